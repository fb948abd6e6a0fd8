#pragma once

#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "seqsum/certreal.hpp"
#include "seqsum/contfrac.hpp"

namespace seqsum {

// One instance of the reduction lemma: an inequality
//   0 < |n*alpha - m + mu| < A / B^omega  with n <= M
// turns into omega < log(A*q / eps) / log(B) for a convergent denominator
// q > 6M with eps := ||mu*q|| - M*||alpha*q|| > 0.
struct ReductionProblem {
    RealExpr alpha;
    RealExpr mu;
    mpq_class A;  // > 0
    RealExpr B;   // > 1
    mpz_class M;  // >= 1

    void validate() const;
};

enum class ReductionStatus { success, epsilon_nonpositive, precision_exhausted };

const char* to_string(ReductionStatus s);

struct ReductionAttempt {
    std::size_t q_index;
    mpz_class q;
    mpq_class epsilon_lo, epsilon_hi;
    ReductionStatus status;
};

struct ReductionResult {
    std::size_t q_index = 0;
    mpz_class q_used;
    mpq_class epsilon_lo, epsilon_hi;  // exact dyadic endpoints of eps
    mpz_class omega_bound;             // meaningful only on success
    ReductionStatus status = ReductionStatus::precision_exhausted;
    mpfr_prec_t decided_bits = 0;      // precision at which the sign was settled
    std::vector<ReductionAttempt> attempts;  // populated by reduce_auto
};

// eps = ||mu*q|| - M*||alpha*q|| at the given convergent; success iff eps is
// provably positive.  omega_bound is computed conservatively: the lower
// endpoint of eps and the upper endpoint of log(A*q/eps)/log(B).
ReductionResult reduce_once(const ReductionProblem& problem,
                            const ContinuedFractionTable& table, std::size_t index,
                            const EscalationPolicy& policy = {});

// Expands alpha's continued fraction, starts at the first q > 6M, and on a
// non-positive eps advances to later convergents (up to max_attempts).  The
// returned result carries every attempt.
ReductionResult reduce_auto(const ReductionProblem& problem,
                            const EscalationPolicy& policy = {},
                            std::size_t max_attempts = 10);

// A family of reduction problems over an integer shift s (mu depends on s,
// everything else is shared, including one convergent).  By default the
// convergent is the first with q > 6M; q_index overrides that choice (any
// index with q > 6M is sound, and published computations often pick a later
// one).
struct ReductionSweep {
    RealExpr alpha;
    std::function<RealExpr(long)> mu_of_shift;
    mpq_class A;
    RealExpr B;
    mpz_class M;
    long shift_lo = 0;
    long shift_hi = 0;
    std::set<long> exclusions;
    std::optional<std::size_t> q_index;
};

struct SweepEntry {
    long shift;
    ReductionStatus status;
    mpq_class epsilon_lo, epsilon_hi;
    mpz_class omega_bound;
    mpfr_prec_t decided_bits = 0;
};

struct SweepResult {
    std::size_t q_index;
    mpz_class q;
    std::vector<SweepEntry> entries;          // in shift order, exclusions skipped
    long min_epsilon_shift;                   // argmin over successful shifts
    mpq_class min_epsilon_lo, min_epsilon_hi;
    mpfr_prec_t min_epsilon_bits = 0;
    mpz_class uniform_omega_bound;            // max omega over successful shifts
    std::vector<long> failures;               // shifts with eps <= 0
};

// Runs reduce_once for every non-excluded shift with a shared convergent.
// Deterministic regardless of the worker count; a precision exhaustion at any
// shift aborts the sweep with PrecisionExhausted naming the shift.
SweepResult reduce_sweep(const ReductionSweep& sweep,
                         const EscalationPolicy& policy = {}, unsigned jobs = 1);

}  // namespace seqsum
