#include "seqsum/reduction.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

namespace seqsum {

void ReductionProblem::validate() const {
    if (A <= 0) throw std::invalid_argument("reduction: A must be positive");
    if (M < 1) throw std::invalid_argument("reduction: M must be >= 1");
}

const char* to_string(ReductionStatus s) {
    switch (s) {
        case ReductionStatus::success: return "success";
        case ReductionStatus::epsilon_nonpositive: return "epsilon_nonpositive";
        case ReductionStatus::precision_exhausted: return "precision_exhausted";
    }
    return "unknown";
}

namespace {

// floor of the upper endpoint; a sound integer upper bound for any omega
// strictly below the enclosed value.
mpz_class floor_of_upper(const CertifiedReal& v) {
    mpq_class hi = v.hi_q();
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), hi.get_num_mpz_t(), hi.get_den_mpz_t());
    return r;
}

}  // namespace

ReductionResult reduce_once(const ReductionProblem& problem,
                            const ContinuedFractionTable& table, std::size_t index,
                            const EscalationPolicy& policy) {
    problem.validate();
    if (index >= table.size())
        throw std::invalid_argument("reduce_once: convergent index out of range");
    const mpz_class& q = table.q(index);
    if (q <= 6 * problem.M)
        throw std::invalid_argument("reduce_once: q must exceed 6M");

    ReductionResult result;
    result.q_index = index;
    result.q_used = q;

    mpfr_prec_t bits = std::min(policy.start, policy.ceiling);
    if (!eval(problem.B, bits).provably_gt(CertifiedReal::from_integer(1, bits)))
        throw std::invalid_argument("reduce_once: B must exceed 1");
    for (;;) {
        CertifiedReal qv = CertifiedReal::from_integer(q, bits);
        CertifiedReal mu_q = nearest_integer_distance(eval(problem.mu, bits) * qv);
        CertifiedReal alpha_q = nearest_integer_distance(eval(problem.alpha, bits) * qv);
        CertifiedReal eps =
            mu_q - CertifiedReal::from_integer(problem.M, bits) * alpha_q;
        result.epsilon_lo = eps.lo_q();
        result.epsilon_hi = eps.hi_q();
        result.decided_bits = bits;

        if (eps.provably_positive()) {
            // omega < log(A q / eps) / log B, evaluated against the lower
            // endpoint of eps; both log quotient endpoints rounded outward.
            mpq_class ratio = mpq_class(problem.A) * mpq_class(q) / result.epsilon_lo;
            CertifiedReal bound = CertifiedReal::from_rational(ratio, bits).log() /
                                  eval(problem.B, bits).log();
            result.omega_bound = floor_of_upper(bound);
            result.status = ReductionStatus::success;
            return result;
        }
        if (eps.provably_nonpositive()) {
            result.status = ReductionStatus::epsilon_nonpositive;
            return result;
        }
        if (bits >= policy.ceiling) {
            result.status = ReductionStatus::precision_exhausted;
            return result;
        }
        bits = std::min<mpfr_prec_t>(bits * 2, policy.ceiling);
    }
}

ReductionResult reduce_auto(const ReductionProblem& problem,
                            const EscalationPolicy& policy, std::size_t max_attempts) {
    problem.validate();
    ContinuedFractionTable table = expand(problem.alpha, 16, policy);
    auto [first_index, first_q] = first_denominator_exceeding(table, 6 * problem.M, policy);
    (void)first_q;

    std::vector<ReductionAttempt> attempts;
    for (std::size_t k = 0; k < max_attempts; ++k) {
        std::size_t index = first_index + k;
        while (index >= table.size())
            table = expand(table.source, table.size() * 2, policy);
        ReductionResult r = reduce_once(problem, table, index, policy);
        attempts.push_back(
            {index, r.q_used, r.epsilon_lo, r.epsilon_hi, r.status});
        if (r.status != ReductionStatus::epsilon_nonpositive) {
            r.attempts = std::move(attempts);
            return r;
        }
    }
    // structural failure: every attempted convergent gave eps <= 0
    ReductionResult r;
    r.q_index = attempts.back().q_index;
    r.q_used = attempts.back().q;
    r.epsilon_lo = attempts.back().epsilon_lo;
    r.epsilon_hi = attempts.back().epsilon_hi;
    r.status = ReductionStatus::epsilon_nonpositive;
    r.attempts = std::move(attempts);
    return r;
}

SweepResult reduce_sweep(const ReductionSweep& sweep, const EscalationPolicy& policy,
                         unsigned jobs) {
    if (sweep.shift_hi < sweep.shift_lo)
        throw std::invalid_argument("reduce_sweep: empty shift range");

    ContinuedFractionTable table = expand(sweep.alpha, 16, policy);
    auto [index, q] = first_denominator_exceeding(table, 6 * sweep.M, policy);
    if (sweep.q_index) {
        index = *sweep.q_index;
        while (index >= table.size())
            table = expand(table.source, table.size() * 2, policy);
        q = table.q(index);
        if (q <= 6 * sweep.M)
            throw std::invalid_argument("reduce_sweep: chosen convergent has q <= 6M");
    }

    std::vector<long> shifts;
    for (long s = sweep.shift_lo; s <= sweep.shift_hi; ++s)
        if (!sweep.exclusions.count(s)) shifts.push_back(s);

    std::vector<SweepEntry> entries(shifts.size());
    std::vector<std::string> errors(shifts.size());

    unsigned worker_count = std::max(1u, std::min<unsigned>(jobs, shifts.size()));
    auto work = [&](unsigned worker) {
        for (std::size_t i = worker; i < shifts.size(); i += worker_count) {
            long s = shifts[i];
            try {
                ReductionProblem p{sweep.alpha, sweep.mu_of_shift(s), sweep.A, sweep.B,
                                   sweep.M};
                ReductionResult r = reduce_once(p, table, index, policy);
                entries[i] = {s, r.status, r.epsilon_lo, r.epsilon_hi, r.omega_bound,
                              r.decided_bits};
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    if (worker_count == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(worker_count);
        for (unsigned w = 0; w < worker_count; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }

    for (std::size_t i = 0; i < shifts.size(); ++i)
        if (!errors[i].empty())
            throw std::runtime_error("sweep failed at shift " +
                                     std::to_string(shifts[i]) + ": " + errors[i]);

    SweepResult result;
    result.q_index = index;
    result.q = q;
    result.entries = entries;
    bool have_min = false;
    for (const SweepEntry& e : entries) {
        if (e.status == ReductionStatus::precision_exhausted)
            throw PrecisionExhausted("sweep: precision exhausted at shift " +
                                     std::to_string(e.shift));
        if (e.status == ReductionStatus::epsilon_nonpositive) {
            result.failures.push_back(e.shift);
            continue;
        }
        if (!have_min || e.epsilon_lo < result.min_epsilon_lo) {
            result.min_epsilon_shift = e.shift;
            result.min_epsilon_lo = e.epsilon_lo;
            result.min_epsilon_hi = e.epsilon_hi;
            result.min_epsilon_bits = e.decided_bits;
            have_min = true;
        }
        result.uniform_omega_bound = std::max(result.uniform_omega_bound, e.omega_bound);
    }
    if (!have_min)
        throw std::runtime_error("sweep: no shift produced a positive epsilon");
    return result;
}

}  // namespace seqsum
