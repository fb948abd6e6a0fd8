#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "seqsum/bigseq.hpp"

namespace seqsum {

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A discrete decision (floor, comparison) could not be taken at the current
// working precision.  Callers escalate and retry.
struct AmbiguousAtPrecision : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Escalation hit the configured precision ceiling.
struct PrecisionExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    std::string token;
    ParseError(const std::string& message, std::string tok)
        : std::runtime_error(message), token(std::move(tok)) {}
};

struct EscalationPolicy {
    mpfr_prec_t start = 192;
    mpfr_prec_t ceiling = 4096;
};

// Interval [lo, hi] of dyadic rationals (MPFR numbers, i.e. sign * mantissa *
// 2^exponent) with outward rounding on every operation.  Soundness contract:
// the interval always contains the exact mathematical value of the expression
// it was computed from.  Comparisons report true only when the intervals
// prove them.
//
// Width contract: exact inputs land within one ulp of the true value per
// endpoint, and each operation adds at most one outward ulp per endpoint on
// top of the interval image (log and sqrt are correctly rounded, +,-,*,/
// round directed).  For an expression of depth g over inputs of comparable
// magnitude the relative width is therefore O(2^{g - bits}); doubling the
// precision at least halves the width (the dyadic grids are nested), and in
// practice shrinks it geometrically.
class CertifiedReal {
public:
    explicit CertifiedReal(mpfr_prec_t bits);  // [0, 0]
    CertifiedReal(const CertifiedReal& o);
    CertifiedReal(CertifiedReal&& o) noexcept;
    CertifiedReal& operator=(const CertifiedReal& o);
    CertifiedReal& operator=(CertifiedReal&& o) noexcept;
    ~CertifiedReal();

    static CertifiedReal from_integer(const mpz_class& z, mpfr_prec_t bits);
    static CertifiedReal from_rational(const mpq_class& r, mpfr_prec_t bits);
    static CertifiedReal from_surd(const QuadraticSurd& s, mpfr_prec_t bits);
    // [lo, hi] with outward rounding of the two rational endpoints.
    static CertifiedReal from_endpoints(const mpq_class& lo, const mpq_class& hi,
                                        mpfr_prec_t bits);

    mpfr_prec_t precision_bits() const { return prec_; }

    // Exact dyadic endpoints.
    mpq_class lo_q() const;
    mpq_class hi_q() const;
    mpq_class mid() const { return (lo_q() + hi_q()) / 2; }
    mpq_class rad() const { return (hi_q() - lo_q()) / 2; }
    mpq_class width() const { return hi_q() - lo_q(); }

    CertifiedReal operator-() const;
    friend CertifiedReal operator+(const CertifiedReal& x, const CertifiedReal& y);
    friend CertifiedReal operator-(const CertifiedReal& x, const CertifiedReal& y);
    friend CertifiedReal operator*(const CertifiedReal& x, const CertifiedReal& y);
    // Throws DomainError when the divisor interval contains zero.
    friend CertifiedReal operator/(const CertifiedReal& x, const CertifiedReal& y);

    CertifiedReal abs() const;
    CertifiedReal pow_int(long e) const;  // e < 0 requires the interval to exclude 0
    // Throws DomainError unless the interval is provably positive.
    CertifiedReal log() const;
    CertifiedReal sqrt() const;  // requires lo >= 0

    bool provably_positive() const;     // lo > 0
    bool provably_nonpositive() const;  // hi <= 0
    bool provably_negative() const;     // hi < 0
    bool provably_lt(const CertifiedReal& o) const;  // hi < o.lo
    bool provably_le(const CertifiedReal& o) const;  // hi <= o.lo
    bool provably_gt(const CertifiedReal& o) const { return o.provably_lt(*this); }
    bool provably_ge(const CertifiedReal& o) const { return o.provably_le(*this); }
    bool contains_zero() const;
    bool is_exact_zero() const;  // lo == hi == 0

    // "mid ~ rad" decimal rendering; deterministic, for reports and logs.
    std::string str(size_t significant_digits = 20) const;

private:
    mpfr_t lo_, hi_;
    mpfr_prec_t prec_;
    friend mpz_class certified_floor(const CertifiedReal& x);
    friend CertifiedReal nearest_integer_distance(const CertifiedReal& x);
};

// floor(x), defined only when both endpoints share it; otherwise throws
// AmbiguousAtPrecision so the caller can escalate.
mpz_class certified_floor(const CertifiedReal& x);

// Enclosure of ||x|| = min_{z in Z} |x - z|, always within [0, 1/2].  The
// image of the interval is computed exactly over the rational endpoints, so
// this never needs to signal ambiguity; a straddling input simply yields a
// wider (still sound) enclosure.
CertifiedReal nearest_integer_distance(const CertifiedReal& x);

// Expression tree over exact literals, the named constant phi, log, and
// field operations with integer powers.  Immutable, cheap to copy.
class RealExpr {
public:
    struct Node;  // opaque

    static RealExpr integer(mpz_class v);
    static RealExpr rational(mpq_class v);
    static RealExpr surd(QuadraticSurd v);
    static RealExpr phi();
    static RealExpr log(RealExpr e);

    RealExpr pow(long exponent) const;
    RealExpr operator-() const;
    friend RealExpr operator+(const RealExpr& x, const RealExpr& y);
    friend RealExpr operator-(const RealExpr& x, const RealExpr& y);
    friend RealExpr operator*(const RealExpr& x, const RealExpr& y);
    friend RealExpr operator/(const RealExpr& x, const RealExpr& y);

    CertifiedReal eval(mpfr_prec_t bits) const;

    // Exact constant folding when the expression is rational-valued by
    // construction (no phi, log, or irrational sqrt); nullopt otherwise.
    std::optional<mpq_class> exact_rational() const;

    // Round-trippable text in the CLI mini-language:
    //   integers, a/b, phi, sqrt(d), log(e), + - * / ^, parentheses.
    std::string str() const;
    static RealExpr parse(const std::string& text);

private:
    std::shared_ptr<const Node> node_;
    explicit RealExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
};

inline CertifiedReal eval(const RealExpr& e, mpfr_prec_t bits) { return e.eval(bits); }

// Runs f(bits) from policy.start, doubling on AmbiguousAtPrecision until the
// ceiling, then rethrows as PrecisionExhausted.
template <typename F>
auto with_escalation(const EscalationPolicy& policy, F&& f) {
    mpfr_prec_t bits = std::min(policy.start, policy.ceiling);
    for (;;) {
        try {
            return f(bits);
        } catch (const AmbiguousAtPrecision& e) {
            if (bits >= policy.ceiling)
                throw PrecisionExhausted(std::string("precision ceiling ") +
                                         std::to_string(policy.ceiling) +
                                         " reached: " + e.what());
            bits *= 2;
            if (bits > policy.ceiling) bits = policy.ceiling;
        }
    }
}

// Deterministic decimal rendering helpers (pure GMP, no floating point).
std::string decimal_string(const mpq_class& value, size_t significant_digits);
// Upper bound of |value| as a short scientific decimal, e.g. "3.15e-42".
std::string decimal_upper_bound(const mpq_class& value);

}  // namespace seqsum
