#include "seqsum/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "seqsum/solver.hpp"

namespace seqsum::cli {

namespace {

struct GlobalOptions {
    long precision_bits = 192;
    long precision_ceiling = 4096;
    std::string format = "text";
    std::string out;
    unsigned jobs = 0;  // 0: machine parallelism

    EscalationPolicy policy() const {
        return {static_cast<mpfr_prec_t>(precision_bits),
                static_cast<mpfr_prec_t>(precision_ceiling)};
    }
    unsigned effective_jobs() const {
        if (jobs > 0) return jobs;
        unsigned hw = std::thread::hardware_concurrency();
        return hw ? hw : 1;
    }
    // precision knobs normalise to powers of two
    void normalize() {
        auto pow2_at_least = [](long v) {
            long p = 8;
            while (p < v) p <<= 1;
            return p;
        };
        precision_bits = pow2_at_least(precision_bits);
        precision_ceiling = pow2_at_least(precision_ceiling);
    }
    void validate() const {
        if (precision_bits < 8 || precision_ceiling < precision_bits)
            throw std::invalid_argument("precision-bits must be >= 8 and <= ceiling");
        if (format != "text" && format != "json" && format != "csv")
            throw std::invalid_argument("format must be text, json or csv");
    }
};

void emit(const GlobalOptions& opt, const std::string& payload) {
    if (opt.out.empty() || opt.out == "-") {
        std::cout << payload;
        return;
    }
    std::ofstream f(opt.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + opt.out);
    f << payload;
}

mpq_class parse_decimal(const std::string& text) {
    // exact decimal/fraction literal: 26, 1.4, 3/2
    auto v = RealExpr::parse(text).exact_rational();
    if (!v) throw std::invalid_argument("expected an exact rational: " + text);
    return *v;
}

mpz_class parse_bigint(const std::string& text) {
    try {
        return mpz_class(text);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("expected an integer: " + text);
    }
}

std::string substitute_shift(const std::string& tmpl, long s) {
    std::string out;
    std::size_t pos = 0;
    bool found = false;
    while (pos < tmpl.size()) {
        std::size_t hit = tmpl.find("{s}", pos);
        if (hit == std::string::npos) {
            out += tmpl.substr(pos);
            break;
        }
        out += tmpl.substr(pos, hit - pos);
        out += std::to_string(s);
        pos = hit + 3;
        found = true;
    }
    if (!found) throw std::invalid_argument("mu template must contain {s}");
    return out;
}

ordered_json interval_json(const mpq_class& lo, const mpq_class& hi, long bits) {
    mpq_class mid = (lo + hi) / 2, rad = (hi - lo) / 2;
    return ordered_json{{"mid", decimal_string(mid, 20)},
                        {"rad", decimal_upper_bound(rad)},
                        {"bits", bits}};
}

std::string interval_text(const mpq_class& lo, const mpq_class& hi) {
    mpq_class mid = (lo + hi) / 2, rad = (hi - lo) / 2;
    return decimal_string(mid, 20) + " +/- " + decimal_upper_bound(rad);
}

// ---- seq ------------------------------------------------------------------

Family family_from_string(const std::string& name) {
    if (name == "lucas") return Family::lucas;
    if (name == "jacobsthal") return Family::jacobsthal;
    throw std::invalid_argument("unknown family: " + name);
}

int run_seq(const GlobalOptions& opt, const std::string& family_name,
            unsigned long from, unsigned long to) {
    if (to < from) throw std::invalid_argument("--to must be >= --from");
    const BinaryRecurrence& rec = family_recurrence(family_from_string(family_name));
    std::ostringstream text;
    ordered_json arr = ordered_json::array();
    std::ostringstream csv;
    csv << "n,value\n";
    for (unsigned long n = from; n <= to; ++n) {
        mpz_class v = term(rec, n);
        if (n > from) text << ' ';
        text << v.get_str();
        arr.push_back(v.get_str());
        csv << n << ',' << v.get_str() << '\n';
    }
    text << '\n';
    if (opt.format == "json")
        emit(opt, arr.dump(2) + "\n");
    else if (opt.format == "csv")
        emit(opt, csv.str());
    else
        emit(opt, text.str());
    return 0;
}

// ---- search ----------------------------------------------------------------

int run_search(const GlobalOptions& opt, const std::string& equation,
               unsigned long n_max) {
    EquationId id = equation_from_string(equation);
    auto sols = enumerate_solutions(summand_family(id), target_family(id), n_max,
                                    opt.effective_jobs());
    if (opt.format == "json") {
        ordered_json j;
        j["equation"] = equation;
        j["n_max"] = n_max;
        ordered_json arr = ordered_json::array();
        for (const auto& t : sols)
            arr.push_back(ordered_json{{"n", t.n}, {"m", t.m}, {"k", t.k}});
        j["solutions"] = arr;
        emit(opt, j.dump(2) + "\n");
    } else if (opt.format == "csv") {
        std::ostringstream s;
        s << "n,m,k\n";
        for (const auto& t : sols) s << t.n << ',' << t.m << ',' << t.k << '\n';
        emit(opt, s.str());
    } else {
        std::ostringstream s;
        for (const auto& t : sols) s << t.n << ' ' << t.m << ' ' << t.k << '\n';
        emit(opt, s.str());
    }
    return 0;
}

// ---- cfrac -----------------------------------------------------------------

int run_cfrac(const GlobalOptions& opt, const std::string& alpha_text,
              unsigned long terms) {
    if (terms == 0) throw std::invalid_argument("--terms must be positive");
    RealExpr alpha = RealExpr::parse(alpha_text);
    ContinuedFractionTable table = expand(alpha, terms - 1, opt.policy());
    if (opt.format == "json") {
        ordered_json j;
        j["alpha"] = alpha_text;
        ordered_json arr = ordered_json::array();
        for (std::size_t i = 0; i < table.size(); ++i)
            arr.push_back(ordered_json{{"i", i},
                                       {"a", table.partial_quotients[i].get_str()},
                                       {"p", table.p(i).get_str()},
                                       {"q", table.q(i).get_str()}});
        j["terms"] = arr;
        emit(opt, j.dump(2) + "\n");
    } else {
        std::ostringstream s;
        if (opt.format == "csv") s << "i,a,p,q\n";
        const char sep = opt.format == "csv" ? ',' : ' ';
        for (std::size_t i = 0; i < table.size(); ++i)
            s << i << sep << table.partial_quotients[i].get_str() << sep
              << table.p(i).get_str() << sep << table.q(i).get_str() << '\n';
        emit(opt, s.str());
    }
    return 0;
}

// ---- matveev ---------------------------------------------------------------

int run_matveev(const GlobalOptions& opt, unsigned t, unsigned D,
                const std::string& a_list, const std::string& b_text) {
    MatveevInput input;
    input.t = t;
    input.D = D;
    std::stringstream ss(a_list);
    std::string item;
    while (std::getline(ss, item, ',')) input.A.push_back(parse_decimal(item));
    if (!b_text.empty()) input.B = parse_decimal(b_text);
    input.validate();

    mpfr_prec_t bits = static_cast<mpfr_prec_t>(opt.precision_bits);
    CertifiedReal c = matveev_coefficient(input, bits);
    std::optional<CertifiedReal> bound;
    if (input.B) bound = matveev_log_lower_bound(input, bits);

    if (opt.format == "json") {
        ordered_json j;
        j["C"] = interval_json(c.lo_q(), c.hi_q(), opt.precision_bits);
        if (bound)
            j["log_lower_bound"] =
                interval_json(bound->lo_q(), bound->hi_q(), opt.precision_bits);
        emit(opt, j.dump(2) + "\n");
    } else {
        std::ostringstream s;
        s << "C = " << interval_text(c.lo_q(), c.hi_q()) << '\n';
        if (bound)
            s << "log lower bound -C*(1+log B) = "
              << interval_text(bound->lo_q(), bound->hi_q()) << '\n';
        emit(opt, s.str());
    }
    return 0;
}

// ---- reduce ----------------------------------------------------------------

ordered_json reduction_result_json(const ReductionResult& r) {
    ordered_json j;
    j["q_index"] = r.q_index;
    j["q"] = r.q_used.get_str();
    j["epsilon"] = interval_json(r.epsilon_lo, r.epsilon_hi,
                                 static_cast<long>(r.decided_bits));
    if (r.status == ReductionStatus::success) j["bound"] = r.omega_bound.get_str();
    j["status"] = to_string(r.status);
    return j;
}

int run_reduce(const GlobalOptions& opt, const std::string& alpha_text,
               const std::string& mu_text, const std::string& a_text,
               const std::string& b_text, const std::string& m_text,
               std::optional<long> index, const std::string& sweep_range,
               const std::string& mu_template, const std::string& exclude_list,
               unsigned attempts) {
    RealExpr alpha = RealExpr::parse(alpha_text);
    mpq_class A = parse_decimal(a_text);
    RealExpr B = RealExpr::parse(b_text);
    mpz_class M = parse_bigint(m_text);
    EscalationPolicy policy = opt.policy();

    if (!sweep_range.empty()) {
        auto dots = sweep_range.find("..");
        if (dots == std::string::npos)
            throw std::invalid_argument("--sweep expects LO..HI");
        long lo = std::stol(sweep_range.substr(0, dots));
        long hi = std::stol(sweep_range.substr(dots + 2));
        if (mu_template.empty())
            throw std::invalid_argument("--sweep requires --mu-template");
        std::set<long> exclusions;
        if (!exclude_list.empty()) {
            std::stringstream ss(exclude_list);
            std::string item;
            while (std::getline(ss, item, ',')) exclusions.insert(std::stol(item));
        }
        ReductionSweep sweep{alpha,
                             [&mu_template](long s) {
                                 return RealExpr::parse(substitute_shift(mu_template, s));
                             },
                             A,
                             B,
                             M,
                             lo,
                             hi,
                             exclusions,
                             index ? std::optional<std::size_t>(*index) : std::nullopt};
        SweepResult r = reduce_sweep(sweep, policy, opt.effective_jobs());
        ordered_json j;
        j["q_index"] = r.q_index;
        j["q"] = r.q.get_str();
        j["min_shift"] = r.min_epsilon_shift;
        j["min_epsilon"] = interval_json(r.min_epsilon_lo, r.min_epsilon_hi,
                                         static_cast<long>(r.min_epsilon_bits));
        j["uniform_bound"] = r.uniform_omega_bound.get_str();
        j["failures"] = r.failures;
        if (opt.format == "json") {
            ordered_json entries = ordered_json::array();
            for (const auto& e : r.entries) {
                ordered_json ej;
                ej["s"] = e.shift;
                ej["status"] = to_string(e.status);
                ej["epsilon"] = interval_json(e.epsilon_lo, e.epsilon_hi,
                                              static_cast<long>(e.decided_bits));
                if (e.status == ReductionStatus::success)
                    ej["bound"] = e.omega_bound.get_str();
                entries.push_back(ej);
            }
            j["entries"] = entries;
            emit(opt, j.dump(2) + "\n");
        } else {
            std::ostringstream s;
            s << "q_index " << r.q_index << " q " << r.q.get_str() << '\n'
              << "min epsilon at s=" << r.min_epsilon_shift << ": "
              << interval_text(r.min_epsilon_lo, r.min_epsilon_hi) << '\n'
              << "uniform bound " << r.uniform_omega_bound.get_str() << '\n'
              << "failures " << r.failures.size() << '\n';
            emit(opt, s.str());
        }
        return 0;
    }

    if (mu_text.empty()) throw std::invalid_argument("reduce needs --mu (or --sweep)");
    ReductionProblem problem{alpha, RealExpr::parse(mu_text), A, B, M};
    ReductionResult r;
    if (index) {
        ContinuedFractionTable table =
            expand(alpha, static_cast<std::size_t>(*index) + 2, policy);
        r = reduce_once(problem, table, static_cast<std::size_t>(*index), policy);
    } else {
        r = reduce_auto(problem, policy, attempts);
    }
    if (opt.format == "json") {
        emit(opt, reduction_result_json(r).dump(2) + "\n");
    } else {
        std::ostringstream s;
        s << "q_index " << r.q_index << " q " << r.q_used.get_str() << '\n'
          << "epsilon " << interval_text(r.epsilon_lo, r.epsilon_hi) << '\n'
          << "status " << to_string(r.status) << '\n';
        if (r.status == ReductionStatus::success)
            s << "bound " << r.omega_bound.get_str() << '\n';
        emit(opt, s.str());
    }
    if (r.status == ReductionStatus::precision_exhausted) return 3;
    return r.status == ReductionStatus::success ? 0 : 1;
}

// ---- legendre ---------------------------------------------------------------

int run_legendre(const GlobalOptions& opt, const std::string& x_text,
                 const std::string& p_text, const std::string& q_text,
                 const std::string& m_text, unsigned long terms) {
    RealExpr x = RealExpr::parse(x_text);
    EscalationPolicy policy = opt.policy();
    if (!m_text.empty()) {
        mpz_class M = parse_bigint(m_text);
        ContinuedFractionTable table = expand(x, terms, policy);
        first_denominator_exceeding(table, M, policy);  // extend as needed
        LegendreLowerBound lb = legendre_lower_bound(table, M);
        if (opt.format == "json") {
            ordered_json j;
            j["index"] = lb.index;
            j["q"] = lb.q.get_str();
            j["b"] = lb.b.get_str();
            j["M"] = lb.M.get_str();
            j["statement"] = "|r/s - x| > 1/((b+2)*s^2) for all 0 < s < M";
            emit(opt, j.dump(2) + "\n");
        } else {
            std::ostringstream s;
            s << "index " << lb.index << '\n'
              << "q " << lb.q.get_str() << '\n'
              << "b " << lb.b.get_str() << '\n'
              << "|r/s - x| > 1/((b+2)*s^2) for all 0 < s < " << lb.M.get_str() << '\n';
            emit(opt, s.str());
        }
        return 0;
    }
    if (p_text.empty() || q_text.empty())
        throw std::invalid_argument("legendre needs either --M or both --p and --q");
    bool is_conv =
        legendre_is_convergent(parse_bigint(p_text), parse_bigint(q_text), x, policy);
    if (opt.format == "json")
        emit(opt, ordered_json{{"is_convergent", is_conv}}.dump(2) + "\n");
    else
        emit(opt, std::string(is_conv ? "true" : "false") + "\n");
    return 0;
}

// ---- certify ----------------------------------------------------------------

int run_certify(const GlobalOptions& opt, const std::string& equation,
                unsigned long window, const std::string& m_text,
                std::optional<long> index, std::optional<long> sweep_index,
                bool with_timings) {
    EquationId id = equation_from_string(equation);
    CertifyConfig cfg;
    cfg.window = window;
    if (!m_text.empty()) cfg.M = parse_bigint(m_text);
    cfg.precision_bits = static_cast<mpfr_prec_t>(opt.precision_bits);
    cfg.precision_ceiling = static_cast<mpfr_prec_t>(opt.precision_ceiling);
    cfg.jobs = opt.effective_jobs();
    if (index) cfg.reduction_index = static_cast<std::size_t>(*index);
    if (sweep_index) cfg.sweep_index = static_cast<std::size_t>(*sweep_index);

    CertificationReport report = certify(id, cfg);
    CrossCheckResult check = cross_check(report);

    if (opt.format == "json") {
        emit(opt, report.to_json(with_timings).dump(2) + "\n");
    } else {
        std::ostringstream s;
        s << "equation " << report.equation << ", window " << report.window << '\n';
        for (const auto& t : report.solutions)
            s << "solution " << t.n << ' ' << t.m << ' ' << t.k << '\n';
        for (const auto& st : report.stages)
            s << "stage " << st.name << ": " << st.status << '\n';
        for (const auto& [name, value] : report.ceilings)
            s << "ceiling " << name << " = " << value.get_str() << '\n';
        s << "verdict " << report.verdict << '\n';
        s << "cross_check " << (check.pass ? "pass" : "fail") << '\n';
        for (const auto& f : check.findings) s << "  finding: " << f << '\n';
        emit(opt, s.str());
    }

    for (const auto& st : report.stages)
        if (st.status == "precision_exhausted") return 3;
    if (report.verdict != "complete" || !check.pass) return 1;
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    GlobalOptions opt;

    CLI::App app{"exact solver and certification pipeline for sums of two binary "
                 "recurrence terms hitting another recurrence"};
    app.require_subcommand(1);
    app.add_option("--precision-bits", opt.precision_bits, "working precision")
        ->capture_default_str();
    app.add_option("--precision-ceiling", opt.precision_ceiling, "escalation ceiling")
        ->capture_default_str();
    app.add_option("--format", opt.format, "text | json | csv")->capture_default_str();
    app.add_option("--out", opt.out, "output path (default stdout)");
    app.add_option("--jobs", opt.jobs, "worker threads (0 = machine parallelism)");

    std::string seq_family;
    unsigned long seq_from = 0, seq_to = 10;
    CLI::App* seq = app.add_subcommand("seq", "print terms of a built-in sequence");
    seq->fallthrough();
    seq->add_option("--family", seq_family, "lucas | jacobsthal")->required();
    seq->add_option("--from", seq_from, "first index");
    seq->add_option("--to", seq_to, "last index")->required();

    std::string search_eq;
    unsigned long search_nmax = 200;
    CLI::App* search = app.add_subcommand("search", "enumerate all solutions");
    search->fallthrough();
    search->add_option("--equation", search_eq, "jj-l | ll-j")->required();
    search->add_option("--nmax", search_nmax, "search 0 <= m <= n <= nmax");

    std::string cf_alpha;
    unsigned long cf_terms = 0;
    CLI::App* cfrac = app.add_subcommand("cfrac", "continued fraction expansion");
    cfrac->fallthrough();
    cfrac->add_option("--alpha", cf_alpha, "real expression")->required();
    cfrac->add_option("--terms", cf_terms, "number of partial quotients")->required();

    unsigned mt_t = 0, mt_d = 0;
    std::string mt_a, mt_b;
    CLI::App* matveev = app.add_subcommand("matveev", "lower-bound coefficient");
    matveev->fallthrough();
    matveev->add_option("--t", mt_t, "number of logarithms")->required();
    matveev->add_option("--D", mt_d, "field degree")->required();
    matveev->add_option("--A", mt_a, "comma-separated A_i values")->required();
    matveev->add_option("--B", mt_b, "exponent height (optional)");

    std::string rd_alpha, rd_mu, rd_a, rd_b, rd_m, rd_sweep, rd_mu_template, rd_exclude;
    long rd_index = -1;
    unsigned rd_attempts = 10;
    CLI::App* reduce = app.add_subcommand("reduce", "reduction lemma instance or sweep");
    reduce->fallthrough();
    reduce->add_option("--alpha", rd_alpha, "irrational multiplier")->required();
    reduce->add_option("--mu", rd_mu, "additive constant");
    reduce->add_option("--A", rd_a, "A > 0")->required();
    reduce->add_option("--B", rd_b, "B > 1")->required();
    reduce->add_option("--M", rd_m, "coefficient bound M")->required();
    reduce->add_option("--index", rd_index, "convergent index (default: first q > 6M)");
    reduce->add_option("--sweep", rd_sweep, "shift range LO..HI");
    reduce->add_option("--mu-template", rd_mu_template, "mu with {s} placeholder");
    reduce->add_option("--exclude", rd_exclude, "comma-separated excluded shifts");
    reduce->add_option("--attempts", rd_attempts, "attempt limit without --index");

    std::string lg_x, lg_p, lg_q, lg_m;
    unsigned long lg_terms = 64;
    CLI::App* legendre = app.add_subcommand("legendre", "convergent criteria");
    legendre->fallthrough();
    legendre->add_option("--x", lg_x, "real expression")->required();
    legendre->add_option("--p", lg_p, "numerator");
    legendre->add_option("--q", lg_q, "denominator");
    legendre->add_option("--M", lg_m, "denominator bound for the lower-bound form");
    legendre->add_option("--terms", lg_terms, "expansion length");

    std::string ct_eq, ct_m;
    unsigned long ct_window = 200;
    long ct_index = -1, ct_sweep_index = -1;
    bool ct_no_timings = false;
    CLI::App* cert = app.add_subcommand("certify", "full certification pipeline");
    cert->fallthrough();
    cert->add_option("--equation", ct_eq, "jj-l | ll-j")->required();
    cert->add_option("--window", ct_window, "search window");
    cert->add_option("--M", ct_m, "override M");
    cert->add_option("--index", ct_index, "reduction convergent index");
    cert->add_option("--sweep-index", ct_sweep_index, "sweep convergent index");
    cert->add_flag("--no-timings", ct_no_timings, "omit per-stage timings");

    std::vector<std::string> storage = args;
    std::vector<char*> argv;
    std::string program = "seqsum";
    argv.push_back(program.data());
    for (auto& a : storage) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "invalid arguments: " << e.what() << '\n';
        return 2;
    }

    try {
        opt.normalize();
        opt.validate();
        if (*seq) return run_seq(opt, seq_family, seq_from, seq_to);
        if (*search) return run_search(opt, search_eq, search_nmax);
        if (*cfrac) return run_cfrac(opt, cf_alpha, cf_terms);
        if (*matveev) return run_matveev(opt, mt_t, mt_d, mt_a, mt_b);
        if (*reduce)
            return run_reduce(opt, rd_alpha, rd_mu, rd_a, rd_b, rd_m,
                              rd_index >= 0 ? std::optional<long>(rd_index) : std::nullopt,
                              rd_sweep, rd_mu_template, rd_exclude, rd_attempts);
        if (*legendre) return run_legendre(opt, lg_x, lg_p, lg_q, lg_m, lg_terms);
        if (*cert)
            return run_certify(
                opt, ct_eq, ct_window, ct_m,
                ct_index >= 0 ? std::optional<long>(ct_index) : std::nullopt,
                ct_sweep_index >= 0 ? std::optional<long>(ct_sweep_index) : std::nullopt,
                !ct_no_timings);
        std::cerr << "no subcommand given\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << " at token '" << e.token << "'\n";
        return 2;
    } catch (const PrecisionExhausted& e) {
        std::cerr << "precision exhausted: " << e.what() << '\n';
        return 3;
    } catch (const DomainError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace seqsum::cli
