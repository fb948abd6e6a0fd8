#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <mpfr.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "seqsum/reduction.hpp"
#include "seqsum/solver.hpp"

using namespace seqsum;

namespace {

RealExpr alpha_expr() {
    return RealExpr::log(RealExpr::phi()) / RealExpr::log(RealExpr::integer(2));
}

RealExpr mu_base() {
    return RealExpr::log(RealExpr::integer(3)) / RealExpr::log(RealExpr::integer(2));
}

const mpz_class M_JJ("300000000000000000000000000000");  // 3e29
const mpz_class M_LL("40000000000000000000000000000");   // 4e28

RealExpr mu_shift_jj(long s) {
    return RealExpr::log(RealExpr::integer(3) /
                         (RealExpr::integer(1) + RealExpr::integer(2).pow(-s))) /
           RealExpr::log(RealExpr::integer(2));
}

RealExpr mu_shift_ll(long s) {
    return RealExpr::log(RealExpr::integer(3) *
                         (RealExpr::integer(1) + RealExpr::phi().pow(-s))) /
           RealExpr::log(RealExpr::integer(2));
}

bool agrees_to_digits(const mpq_class& value, const mpq_class& reference,
                      unsigned digits) {
    mpq_class rel = abs(value - reference) / abs(reference);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
    return rel * scale <= 1;
}

// independent oracle for eps = ||mu q|| - M ||alpha q||: plain MPFR at high
// precision with round-to-nearest, no interval machinery
mpq_class oracle_epsilon(const mpz_class& q, const mpz_class& M, mpfr_prec_t bits) {
    mpfr_t phi, alpha, mu, t, dist_alpha, dist_mu;
    mpfr_inits2(bits, phi, alpha, mu, t, dist_alpha, dist_mu,
                static_cast<mpfr_ptr>(nullptr));
    mpfr_sqrt_ui(phi, 5, MPFR_RNDN);
    mpfr_add_ui(phi, phi, 1, MPFR_RNDN);
    mpfr_div_ui(phi, phi, 2, MPFR_RNDN);
    mpfr_log(alpha, phi, MPFR_RNDN);
    mpfr_set_ui(t, 2, MPFR_RNDN);
    mpfr_log(t, t, MPFR_RNDN);
    mpfr_div(alpha, alpha, t, MPFR_RNDN);  // log(phi)/log(2)
    mpfr_set_ui(mu, 3, MPFR_RNDN);
    mpfr_log(mu, mu, MPFR_RNDN);
    mpfr_div(mu, mu, t, MPFR_RNDN);  // log(3)/log(2)

    auto nearest_dist = [&](mpfr_t out, mpfr_t value) {
        mpfr_t scaled, rounded;
        mpfr_inits2(bits, scaled, rounded, static_cast<mpfr_ptr>(nullptr));
        mpfr_mul_z(scaled, value, q.get_mpz_t(), MPFR_RNDN);
        mpfr_round(rounded, scaled);
        mpfr_sub(out, scaled, rounded, MPFR_RNDN);
        mpfr_abs(out, out, MPFR_RNDN);
        mpfr_clears(scaled, rounded, static_cast<mpfr_ptr>(nullptr));
    };
    nearest_dist(dist_alpha, alpha);
    nearest_dist(dist_mu, mu);
    mpfr_mul_z(dist_alpha, dist_alpha, M.get_mpz_t(), MPFR_RNDN);
    mpfr_sub(dist_mu, dist_mu, dist_alpha, MPFR_RNDN);
    mpq_class out;
    mpfr_get_q(out.get_mpq_t(), dist_mu);
    mpfr_clears(phi, alpha, mu, t, dist_alpha, dist_mu,
                static_cast<mpfr_ptr>(nullptr));
    return out;
}

mpz_class pow10_z_35() {
    mpz_class s;
    mpz_ui_pow_ui(s.get_mpz_t(), 10, 35);
    return s;
}

// second independent oracle on a different bignum engine entirely
mpq_class boost_epsilon(const mpz_class& q, const mpz_class& M) {
    using bf = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<140>>;
    bf phi = (1 + sqrt(bf(5))) / 2;
    bf log2 = log(bf(2));
    bf alpha = log(phi) / log2;
    bf mu = log(bf(3)) / log2;
    bf qb(q.get_str());
    auto nearest = [](const bf& x) {
        bf f = x - floor(x);
        return f < bf(1) / 2 ? f : 1 - f;
    };
    bf eps = nearest(mu * qb) - bf(M.get_str()) * nearest(alpha * qb);
    // 40 decimal digits are plenty for the comparison
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, 40);
    bf scaled = eps * bf(scale.get_str());
    mpz_class num(scaled.convert_to<boost::multiprecision::cpp_int>().str());
    return mpq_class(num, scale);
}

}  // namespace

TEST_CASE("published reduction instance at q_75 (A=26, B=2, M=3e29)") {
    ContinuedFractionTable table = expand(alpha_expr(), 76);
    ReductionProblem problem{alpha_expr(), mu_base(), 26, RealExpr::integer(2), M_JJ};
    ReductionResult r = reduce_once(problem, table, 75);
    REQUIRE(r.status == ReductionStatus::success);
    CHECK(r.q_used == mpz_class("252339790309653189029774211371593442"));

    // quoted lower bound 0.140378035627 and the oracle agree
    mpq_class quoted(mpz_class("140378035627"), mpz_class("1000000000000"));
    CHECK(r.epsilon_lo > quoted);
    CHECK(agrees_to_digits((r.epsilon_lo + r.epsilon_hi) / 2, quoted, 9));
    mpq_class oracle = oracle_epsilon(r.q_used, M_JJ, 1024);
    CHECK(abs(oracle - (r.epsilon_lo + r.epsilon_hi) / 2) < mpq_class(1, mpz_class(1) << 160));
    CHECK(r.epsilon_lo <= oracle);
    CHECK(oracle <= r.epsilon_hi);
    mpq_class second_engine = boost_epsilon(r.q_used, M_JJ);
    CHECK(abs(second_engine - oracle) < mpq_class(1, pow10_z_35()));

    // omega = n-m stays below 127
    CHECK(r.omega_bound == 125);
}

TEST_CASE("published reduction instance at q_70 (A=12, B=phi, M=4e28)") {
    ContinuedFractionTable table = expand(alpha_expr(), 76);
    ReductionProblem problem{alpha_expr(), mu_base(), 12, RealExpr::phi(), M_LL};
    ReductionResult r = reduce_once(problem, table, 70);
    REQUIRE(r.status == ReductionStatus::success);
    CHECK(r.q_used == mpz_class("228666343422267608843910896109913"));

    // the oracle confirms the computed eps; the quoted column value
    // 0.0328403974748 transposes digits of the true 0.03284039474832...
    mpq_class oracle = oracle_epsilon(r.q_used, M_LL, 1024);
    mpq_class mid = (r.epsilon_lo + r.epsilon_hi) / 2;
    CHECK(abs(oracle - mid) < mpq_class(1, mpz_class(1) << 160));
    mpq_class second_engine = boost_epsilon(r.q_used, M_LL);
    CHECK(abs(second_engine - oracle) < mpq_class(1, pow10_z_35()));
    mpq_class computed_digits(mpz_class("32840394748"), mpz_class("1000000000000"));
    CHECK(agrees_to_digits(mid, computed_digits, 9));
    CHECK(r.epsilon_lo > mpq_class(mpz_class("32840394"), mpz_class("1000000000")));

    // omega = n-m stays below 168
    CHECK(r.omega_bound == 167);
}

TEST_CASE("zero mu forces a certified non-positive epsilon") {
    ContinuedFractionTable table = expand(alpha_expr(), 76);
    ReductionProblem problem{alpha_expr(), RealExpr::integer(0), 26,
                             RealExpr::integer(2), M_JJ};
    ReductionResult r = reduce_once(problem, table, 75);
    CHECK(r.status == ReductionStatus::epsilon_nonpositive);
    CHECK(r.epsilon_hi <= 0);
}

TEST_CASE("q must exceed 6M") {
    ContinuedFractionTable table = expand(alpha_expr(), 76);
    ReductionProblem problem{alpha_expr(), mu_base(), 26, RealExpr::integer(2), M_JJ};
    CHECK_THROWS_AS(reduce_once(problem, table, 10), std::invalid_argument);
}

TEST_CASE("reduce_auto picks the first admissible convergent") {
    ReductionProblem problem{alpha_expr(), mu_base(), 26, RealExpr::integer(2), M_JJ};
    ReductionResult r = reduce_auto(problem);
    REQUIRE(r.status == ReductionStatus::success);
    // first q > 6M sits at index 69 and already certifies
    CHECK(r.q_index == 69);
    CHECK(r.attempts.size() == 1);
    CHECK(r.q_used > 6 * M_JJ);
}

TEST_CASE("reduce_auto advances past failing convergents and reports attempts") {
    // mu = 0 fails at every convergent: a structural failure with the trail
    ReductionProblem problem{alpha_expr(), RealExpr::integer(0), 26,
                             RealExpr::integer(2), M_JJ};
    ReductionResult r = reduce_auto(problem, {}, 4);
    CHECK(r.status == ReductionStatus::epsilon_nonpositive);
    CHECK(r.attempts.size() == 4);
    for (const auto& a : r.attempts) {
        CHECK(a.status == ReductionStatus::epsilon_nonpositive);
        CHECK(a.epsilon_hi <= 0);
    }
}

TEST_CASE("shifting mu by alpha matches a shifted instance") {
    // with mu' = mu + alpha the instance certifies with the same machinery
    ContinuedFractionTable table = expand(alpha_expr(), 76);
    ReductionProblem shifted{alpha_expr(), mu_base() + alpha_expr(), 26,
                             RealExpr::integer(2), M_JJ};
    ReductionResult r = reduce_once(shifted, table, 75);
    CHECK(r.status == ReductionStatus::success);
    // ||(mu + alpha) q|| for a convergent q is within M||alpha q|| of ||mu q||
    ReductionProblem base{alpha_expr(), mu_base(), 26, RealExpr::integer(2), M_JJ};
    ReductionResult rb = reduce_once(base, table, 75);
    mpq_class drift = abs((r.epsilon_lo + r.epsilon_hi) / 2 -
                          (rb.epsilon_lo + rb.epsilon_hi) / 2);
    CHECK(drift < mpq_class(1, 1000000));
}

TEST_CASE("published sweep at q_75: minimum at shift 121") {
    ReductionSweep sweep{alpha_expr(), mu_shift_jj, 1,   RealExpr::integer(2),
                         M_JJ,         0,           128, {1},
                         75};
    SweepResult r = reduce_sweep(sweep, {}, 3);
    CHECK(r.q_index == 75);
    CHECK(r.failures.empty());
    CHECK(r.min_epsilon_shift == 121);
    mpq_class quoted(mpz_class("343788493"), mpz_class("100000000000"));
    CHECK(r.min_epsilon_lo > quoted);
    CHECK(agrees_to_digits((r.min_epsilon_lo + r.min_epsilon_hi) / 2, quoted, 6));
    CHECK(r.uniform_omega_bound == 125);  // omega = n-4, so n <= 129
}

TEST_CASE("shift 1 in the jj sweep is certifiably negative") {
    ContinuedFractionTable table = expand(alpha_expr(), 76);
    ReductionProblem p{alpha_expr(), mu_shift_jj(1), 1, RealExpr::integer(2), M_JJ};
    ReductionResult r = reduce_once(p, table, 75);
    CHECK(r.status == ReductionStatus::epsilon_nonpositive);
    CHECK(r.epsilon_hi <= 0);
    // mu(1) = log(2)/log(2) = 1, an integer, so eps = -M||alpha q|| < 0
    auto exact = mu_shift_jj(1).exact_rational();
    CHECK_FALSE(exact.has_value());  // not foldable, but provably integral:
    CertifiedReal v = eval(mu_shift_jj(1), 128);
    CHECK(v.lo_q() < 1);
    CHECK(v.hi_q() > 1);
    CHECK(v.width() < mpq_class(1, mpz_class(1) << 100));
}

TEST_CASE("published sweep at q_70: min epsilon above 0.004, bound 171") {
    ReductionSweep sweep{alpha_expr(), mu_shift_ll, 12,  RealExpr::phi(),
                         M_LL,         0,           168, {},
                         70};
    SweepResult r = reduce_sweep(sweep, {}, 3);
    CHECK(r.q_index == 70);
    CHECK(r.failures.empty());
    CHECK(r.min_epsilon_lo > mpq_class(4, 1000));
    CHECK(r.uniform_omega_bound == 171);  // omega = n
}

TEST_CASE("sweeps are deterministic across worker counts") {
    ReductionSweep sweep{alpha_expr(), mu_shift_jj, 1,  RealExpr::integer(2),
                         M_JJ,         0,           40, {1},
                         75};
    SweepResult a = reduce_sweep(sweep, {}, 1);
    SweepResult b = reduce_sweep(sweep, {}, 8);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        CHECK(a.entries[i].shift == b.entries[i].shift);
        CHECK(a.entries[i].epsilon_lo == b.entries[i].epsilon_lo);
        CHECK(a.entries[i].epsilon_hi == b.entries[i].epsilon_hi);
        CHECK(a.entries[i].omega_bound == b.entries[i].omega_bound);
    }
    CHECK(a.min_epsilon_shift == b.min_epsilon_shift);
    CHECK(a.uniform_omega_bound == b.uniform_omega_bound);
}

TEST_CASE("omega bound never tightens when epsilon shrinks (M grows)") {
    ContinuedFractionTable table = expand(alpha_expr(), 76);
    ReductionProblem small_m{alpha_expr(), mu_base(), 26, RealExpr::integer(2), M_JJ};
    ReductionProblem big_m{alpha_expr(), mu_base(), 26, RealExpr::integer(2),
                           mpz_class(2 * M_JJ)};
    ReductionResult rs = reduce_once(small_m, table, 75);
    ReductionResult rb = reduce_once(big_m, table, 75);
    REQUIRE(rs.status == ReductionStatus::success);
    REQUIRE(rb.status == ReductionStatus::success);
    CHECK(rb.epsilon_lo < rs.epsilon_lo);
    CHECK(rb.omega_bound >= rs.omega_bound);
}

TEST_CASE("soundness: actual solutions satisfy the sweep inequality chain") {
    // |k*alpha - n + mu(n-m)| < 1/B^(n-4) for every solution of the first
    // equation with n-m >= 2; analogous bound 12/phi^n for the second one
    mpfr_prec_t bits = 256;
    CertifiedReal alpha = eval(alpha_expr(), bits);

    auto jj = enumerate_solutions(BinaryRecurrence::jacobsthal(),
                                  BinaryRecurrence::lucas(), 200);
    for (const auto& t : jj) {
        if (t.n - t.m < 2) continue;
        CertifiedReal mu = eval(mu_shift_jj(static_cast<long>(t.n - t.m)), bits);
        CertifiedReal form = (CertifiedReal::from_integer(t.k, bits) * alpha -
                              CertifiedReal::from_integer(t.n, bits) + mu)
                                 .abs();
        CertifiedReal cap =
            CertifiedReal::from_integer(2, bits).pow_int(static_cast<long>(t.n) - 4);
        CHECK(form.provably_lt(CertifiedReal::from_integer(1, bits) / cap));
    }

    auto ll = enumerate_solutions(BinaryRecurrence::lucas(),
                                  BinaryRecurrence::jacobsthal(), 200);
    CertifiedReal phi = CertifiedReal::from_surd(QuadraticSurd::golden_ratio(), bits);
    for (const auto& t : ll) {
        CertifiedReal mu = eval(mu_shift_ll(static_cast<long>(t.n - t.m)), bits);
        CertifiedReal form = (CertifiedReal::from_integer(t.n, bits) * alpha -
                              CertifiedReal::from_integer(t.k, bits) + mu)
                                 .abs();
        CertifiedReal cap = CertifiedReal::from_integer(12, bits) /
                            phi.pow_int(static_cast<long>(t.n));
        CHECK(form.provably_lt(cap));
    }
}
