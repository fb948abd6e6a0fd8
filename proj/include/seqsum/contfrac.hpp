#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "seqsum/certreal.hpp"

namespace seqsum {

// Partial quotients a_0..a_N and exact convergents p_i/q_i of a real
// expression.  Construction certifies: a_i >= 1 for i >= 1, the convergent
// recurrence, gcd(p_i, q_i) = 1, and |x - p_i/q_i| < 1/(q_i q_{i+1}) for
// every i < N.
struct ContinuedFractionTable {
    RealExpr source;
    std::vector<mpz_class> partial_quotients;
    std::vector<std::pair<mpz_class, mpz_class>> convergents;  // (p_i, q_i)
    mpfr_prec_t built_precision_bits = 0;

    std::size_t size() const { return partial_quotients.size(); }
    const mpz_class& q(std::size_t i) const { return convergents.at(i).second; }
    const mpz_class& p(std::size_t i) const { return convergents.at(i).first; }
};

// First count+1 partial quotients of x via the Gauss map on intervals.  Each
// quotient comes from an unambiguous certified floor; on ambiguity the whole
// expansion restarts at doubled precision (expansions here are short, so a
// restart is cheaper than incremental refinement).  Throws PrecisionExhausted
// when a quotient stays ambiguous at the ceiling, which happens exactly when
// x is rational or indistinguishable from a rational at that precision.
ContinuedFractionTable expand(const RealExpr& x, std::size_t count,
                              const EscalationPolicy& policy = {});

// Smallest index i with q_i > threshold; extends the table by re-expansion
// when it is too short.
std::pair<std::size_t, mpz_class>
first_denominator_exceeding(ContinuedFractionTable& table, const mpz_class& threshold,
                            const EscalationPolicy& policy = {});

// Certified |p/q - x| < 1/(2 q^2).  A true result is cross-checked against
// the actual convergent list; a disagreement (impossible if the kernel is
// sound) raises logic_error.
bool legendre_is_convergent(const mpz_class& p, const mpz_class& q, const RealExpr& x,
                            const EscalationPolicy& policy = {});

// Certified statement: |r/s - x| > 1/((b+2) s^2) for all integers r and all
// 0 < s < M, where q_{index} is the first denominator above M and b is the
// largest partial quotient up to that index.
struct LegendreLowerBound {
    std::size_t index;  // smallest n with q_n > M
    mpz_class q;        // q_{index}
    mpz_class b;        // max{a_i : 0 <= i <= index}
    mpz_class M;
};

LegendreLowerBound legendre_lower_bound(const ContinuedFractionTable& table,
                                        const mpz_class& M);

}  // namespace seqsum
