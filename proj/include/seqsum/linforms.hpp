#pragma once

#include <optional>
#include <vector>

#include "seqsum/certreal.hpp"

namespace seqsum {

// An algebraic number of degree at most 2, the only degrees the pipeline
// needs: either a reduced rational or a quadratic surd together with its
// integer minimal polynomial c2*x^2 + c1*x + c0 (content-free, c2 > 0).
class AlgebraicNumberDesc {
public:
    static AlgebraicNumberDesc rational(mpq_class value);
    static AlgebraicNumberDesc quadratic(QuadraticSurd value, mpz_class c2,
                                         mpz_class c1, mpz_class c0);

    bool is_rational() const { return !quad_.has_value(); }
    const mpq_class& rational_value() const { return rat_; }
    const QuadraticSurd& quadratic_value() const { return quad_->value; }
    unsigned degree() const { return is_rational() ? 1 : 2; }

    // Leading coefficient of the minimal polynomial (denominator for
    // rationals).
    mpz_class leading_coefficient() const;

    // Logarithmic height: log max(|p|, q) for a reduced rational p/q;
    // (1/2)(log c2 + sum_i log max(|root_i|, 1)) for a quadratic.
    CertifiedReal height(mpfr_prec_t bits) const;

    // Enclosure of the number itself.
    CertifiedReal enclosure(mpfr_prec_t bits) const;

private:
    struct Quad {
        QuadraticSurd value;
        mpz_class c2, c1, c0;
    };
    mpq_class rat_;
    std::optional<Quad> quad_;
};

inline CertifiedReal height(const AlgebraicNumberDesc& x, mpfr_prec_t bits) {
    return x.height(bits);
}

enum class HeightRule { sum, product, power };

// Standard height bounds: sum folds pairwise adding log 2 per fold, product
// adds, power scales by |s|.
CertifiedReal height_combine_bound(HeightRule rule,
                                   const std::vector<CertifiedReal>& inputs,
                                   const mpz_class& power_exponent = 0);

// Inputs of the lower-bound theorem for linear forms in t logarithms over a
// field of degree D.  B, when present, bounds the exponent vector.
struct MatveevInput {
    unsigned t = 0;
    unsigned D = 0;
    std::vector<mpq_class> A;
    std::optional<mpq_class> B;

    void validate() const;  // t,D >= 1; each A_i >= 0.16; B >= 1 when present
};

// C = 1.4 * 30^{t+3} * t^{4.5} * D^2 * (1 + log D) * prod A_i, so that
// log|Lambda| > -C (1 + log B).
CertifiedReal matveev_coefficient(const MatveevInput& input, mpfr_prec_t bits);

// -C (1 + log B); requires input.B.
CertifiedReal matveev_log_lower_bound(const MatveevInput& input, mpfr_prec_t bits);

// Certified check that A_i >= max(D*h(alpha_i), |log alpha_i|, 0.16) for the
// supplied descriptors (position-wise; descriptors may be fewer than A when
// trailing A_i are justified separately).
void validate_matveev_choice(const MatveevInput& input,
                             const std::vector<AlgebraicNumberDesc>& alphas,
                             const EscalationPolicy& policy = {});

// Least integer X >= 2 with x*c0 >= c1*log(x)*(c2 + c3*log(x)) for all real
// x >= X.  The result is certified by: the inequality's failure at X-1 (when
// X > 2), its validity at X, and a proof that the difference is increasing on
// [X, inf).
struct IndexBound {
    mpz_class x;
    bool minimality_certified;  // g(X-1) < 0 proven (or X == 2)
};

IndexBound solve_index_bound(const RealExpr& c0, const RealExpr& c1,
                             const RealExpr& c2, const RealExpr& c3,
                             const EscalationPolicy& policy = {});

}  // namespace seqsum
