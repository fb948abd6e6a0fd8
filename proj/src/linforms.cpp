#include "seqsum/linforms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace seqsum {

namespace {

CertifiedReal interval_max(const CertifiedReal& a, const CertifiedReal& b) {
    return CertifiedReal::from_endpoints(std::max(a.lo_q(), b.lo_q()),
                                         std::max(a.hi_q(), b.hi_q()),
                                         std::max(a.precision_bits(), b.precision_bits()));
}

}  // namespace

AlgebraicNumberDesc AlgebraicNumberDesc::rational(mpq_class value) {
    value.canonicalize();
    AlgebraicNumberDesc d;
    d.rat_ = std::move(value);
    return d;
}

AlgebraicNumberDesc AlgebraicNumberDesc::quadratic(QuadraticSurd value, mpz_class c2,
                                                   mpz_class c1, mpz_class c0) {
    if (value.is_rational())
        throw std::invalid_argument("quadratic descriptor needs an irrational surd");
    if (c2 <= 0) throw std::invalid_argument("minimal polynomial needs c2 > 0");
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), c2.get_mpz_t(), c1.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c0.get_mpz_t());
    if (g != 1) throw std::invalid_argument("minimal polynomial must be content-free");
    QuadraticSurd check = QuadraticSurd::from_integer(c2) * value * value +
                          QuadraticSurd::from_integer(c1) * value +
                          QuadraticSurd::from_integer(c0);
    if (!check.is_zero())
        throw std::invalid_argument("surd is not a root of the stated polynomial");
    AlgebraicNumberDesc d;
    d.quad_ = Quad{std::move(value), std::move(c2), std::move(c1), std::move(c0)};
    return d;
}

mpz_class AlgebraicNumberDesc::leading_coefficient() const {
    return is_rational() ? mpz_class(rat_.get_den()) : quad_->c2;
}

CertifiedReal AlgebraicNumberDesc::enclosure(mpfr_prec_t bits) const {
    if (is_rational()) return CertifiedReal::from_rational(rat_, bits);
    return CertifiedReal::from_surd(quad_->value, bits);
}

CertifiedReal AlgebraicNumberDesc::height(mpfr_prec_t bits) const {
    if (is_rational()) {
        if (rat_ == 0) throw std::invalid_argument("height of zero is undefined");
        mpz_class m = std::max(mpz_class(abs(rat_.get_num())), mpz_class(rat_.get_den()));
        return CertifiedReal::from_integer(m, bits).log();
    }
    // (1/2)(log c2 + sum over both roots of log max(|root|, 1)); whether
    // |root| exceeds 1 is decided exactly in surd arithmetic.
    CertifiedReal sum = CertifiedReal::from_integer(quad_->c2, bits).log();
    const QuadraticSurd roots[2] = {quad_->value, quad_->value.conjugate()};
    for (const QuadraticSurd& root : roots) {
        bool above_one = (root - QuadraticSurd::from_integer(1)).sign() > 0 ||
                         (root + QuadraticSurd::from_integer(1)).sign() < 0;
        if (above_one)
            sum = sum + CertifiedReal::from_surd(root, bits).abs().log();
    }
    return sum / CertifiedReal::from_integer(2, bits);
}

CertifiedReal height_combine_bound(HeightRule rule,
                                   const std::vector<CertifiedReal>& inputs,
                                   const mpz_class& power_exponent) {
    if (inputs.empty()) throw std::invalid_argument("height_combine_bound: no inputs");
    mpfr_prec_t bits = inputs.front().precision_bits();
    for (const auto& h : inputs) bits = std::max(bits, h.precision_bits());

    switch (rule) {
        case HeightRule::power: {
            if (inputs.size() != 1)
                throw std::invalid_argument("power rule takes one height");
            return inputs.front() *
                   CertifiedReal::from_integer(abs(power_exponent), bits);
        }
        case HeightRule::product: {
            CertifiedReal acc = inputs.front();
            for (std::size_t i = 1; i < inputs.size(); ++i) acc = acc + inputs[i];
            return acc;
        }
        case HeightRule::sum: {
            CertifiedReal log2 = CertifiedReal::from_integer(2, bits).log();
            CertifiedReal acc = inputs.front();
            for (std::size_t i = 1; i < inputs.size(); ++i)
                acc = acc + inputs[i] + log2;
            return acc;
        }
    }
    throw std::logic_error("height_combine_bound: unknown rule");
}

void MatveevInput::validate() const {
    if (t < 1) throw std::invalid_argument("matveev: t must be >= 1");
    if (D < 1) throw std::invalid_argument("matveev: D must be >= 1");
    if (A.size() != t)
        throw std::invalid_argument("matveev: need exactly t values A_i");
    const mpq_class floor_a(4, 25);  // 0.16
    for (const auto& a : A)
        if (a < floor_a) throw std::invalid_argument("matveev: A_i below 0.16");
    if (B && *B < 1) throw std::invalid_argument("matveev: B must be >= 1");
}

CertifiedReal matveev_coefficient(const MatveevInput& input, mpfr_prec_t bits) {
    input.validate();
    mpz_class thirty_pow;
    mpz_ui_pow_ui(thirty_pow.get_mpz_t(), 30, input.t + 3);

    CertifiedReal t_int = CertifiedReal::from_integer(input.t, bits);
    CertifiedReal t45 = t_int.pow_int(4) * t_int.sqrt();  // t^{4.5}

    CertifiedReal d_int = CertifiedReal::from_integer(input.D, bits);
    CertifiedReal d_factor =
        d_int.pow_int(2) * (CertifiedReal::from_integer(1, bits) + d_int.log());

    mpq_class prod_a(1);
    for (const auto& a : input.A) prod_a *= a;

    return CertifiedReal::from_rational(mpq_class(7, 5), bits) *
           CertifiedReal::from_integer(thirty_pow, bits) * t45 * d_factor *
           CertifiedReal::from_rational(prod_a, bits);
}

CertifiedReal matveev_log_lower_bound(const MatveevInput& input, mpfr_prec_t bits) {
    if (!input.B) throw std::invalid_argument("matveev: bound needs B");
    CertifiedReal c = matveev_coefficient(input, bits);
    CertifiedReal one_plus_log_b =
        CertifiedReal::from_integer(1, bits) +
        CertifiedReal::from_rational(*input.B, bits).log();
    return -(c * one_plus_log_b);
}

void validate_matveev_choice(const MatveevInput& input,
                             const std::vector<AlgebraicNumberDesc>& alphas,
                             const EscalationPolicy& policy) {
    input.validate();
    if (alphas.size() > input.A.size())
        throw std::invalid_argument("matveev: more descriptors than A values");
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        with_escalation(policy, [&](mpfr_prec_t bits) {
            CertifiedReal required = interval_max(
                CertifiedReal::from_integer(input.D, bits) * alphas[i].height(bits),
                interval_max(alphas[i].enclosure(bits).log().abs(),
                             CertifiedReal::from_rational(mpq_class(4, 25), bits)));
            CertifiedReal chosen = CertifiedReal::from_rational(input.A[i], bits);
            if (required.provably_le(chosen)) return true;
            if (chosen.provably_lt(required))
                throw std::invalid_argument("matveev: A_" + std::to_string(i + 1) +
                                            " is below the theorem's floor");
            throw AmbiguousAtPrecision("matveev A_i validation undecided");
        });
    }
}

// ---------------------------------------------------------------------------
// Index-bound solver: g(x) = c0*x - c1*log(x)*(c2 + c3*log(x))

namespace {

struct Coeffs {
    CertifiedReal c0, c1, c2, c3;
};

CertifiedReal g_at(const Coeffs& c, const mpz_class& x, mpfr_prec_t bits) {
    CertifiedReal xv = CertifiedReal::from_integer(x, bits);
    CertifiedReal lx = xv.log();
    return xv * c.c0 - c.c1 * lx * (c.c2 + c.c3 * lx);
}

// Certificate that g is increasing on [x, inf):
//   (a) 2*c3*log(x) + c2 - 2*c3 >= 0, so (c2 + 2*c3*log t)/t is
//       non-increasing for t >= x, and
//   (b) g'(x) = c0 - c1*(c2 + 2*c3*log x)/x > 0.
// Returns +1 certified, -1 refuted, 0 undecided.
int monotone_cert(const Coeffs& c, const mpz_class& x, mpfr_prec_t bits) {
    CertifiedReal xv = CertifiedReal::from_integer(x, bits);
    CertifiedReal lx = xv.log();
    CertifiedReal two = CertifiedReal::from_integer(2, bits);
    CertifiedReal zero = CertifiedReal::from_integer(0, bits);

    CertifiedReal decreasing = two * c.c3 * lx + c.c2 - two * c.c3;
    CertifiedReal gprime = c.c0 - c.c1 * (c.c2 + two * c.c3 * lx) / xv;
    if (decreasing.provably_ge(zero) && gprime.provably_positive()) return 1;
    if (decreasing.provably_negative() || gprime.provably_nonpositive()) return -1;
    return 0;
}

int sign_of(const CertifiedReal& v) {
    if (v.provably_positive()) return 1;
    if (v.provably_negative()) return -1;
    if (v.is_exact_zero()) return 0;
    throw AmbiguousAtPrecision("sign undecided");
}

double rough_fixed_point(double c0, double c1, double c2, double c3) {
    double x = 2.0;
    for (int i = 0; i < 400; ++i) {
        double lx = std::log(x);
        double next = (c1 / c0) * lx * (c2 + c3 * lx);
        if (!std::isfinite(next) || next < 2.0) next = 2.0;
        if (std::abs(next - x) <= std::max(0.5, 1e-12 * x)) return next;
        x = next;
    }
    return x;
}

}  // namespace

IndexBound solve_index_bound(const RealExpr& c0, const RealExpr& c1,
                             const RealExpr& c2, const RealExpr& c3,
                             const EscalationPolicy& policy) {
    return with_escalation(policy, [&](mpfr_prec_t bits) {
        Coeffs c{eval(c0, bits), eval(c1, bits), eval(c2, bits), eval(c3, bits)};
        if (!c.c0.provably_positive())
            throw std::invalid_argument("solve_index_bound: c0 must be positive");
        if (c.c1.is_exact_zero()) return IndexBound{2, true};
        if (!c.c1.provably_positive())
            throw std::invalid_argument("solve_index_bound: c1 must be 0 or positive");
        if (c.c3.lo_q() < 0)
            throw std::invalid_argument("solve_index_bound: c3 must be non-negative");

        auto holds = [&](const mpz_class& x) {
            // true iff g(x) >= 0 and the monotone certificate passes at x
            int gs = sign_of(g_at(c, x, bits));
            if (gs < 0) return false;
            int mc = monotone_cert(c, x, bits);
            if (mc == 0) throw AmbiguousAtPrecision("monotone certificate undecided");
            return mc > 0;
        };

        if (holds(2)) return IndexBound{2, true};

        mpz_class hi = 3;
        {
            double est = rough_fixed_point(
                mpq_class(c.c0.mid()).get_d(), mpq_class(c.c1.mid()).get_d(),
                mpq_class(c.c2.mid()).get_d(), mpq_class(c.c3.mid()).get_d());
            if (est > 3.0) {
                mpf_class estf(est * 1.001, 64);
                mpz_class z(estf);
                hi = z + 2;
            }
        }
        int widen = 0;
        while (!holds(hi)) {
            hi *= 2;
            if (++widen > 512)
                throw std::invalid_argument("solve_index_bound: no crossing found");
        }

        mpz_class lo = 2;  // holds(2) is false here
        while (hi - lo > 1) {
            mpz_class midpoint = (lo + hi) / 2;
            if (holds(midpoint))
                hi = midpoint;
            else
                lo = midpoint;
        }

        bool minimal = false;
        if (hi == 2) {
            minimal = true;
        } else {
            int below = sign_of(g_at(c, mpz_class(hi - 1), bits));
            minimal = below < 0;
        }
        return IndexBound{hi, minimal};
    });
}

}  // namespace seqsum
