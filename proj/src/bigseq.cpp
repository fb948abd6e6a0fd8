#include "seqsum/bigseq.hpp"

#include <stdexcept>
#include <utility>

#include "seqsum/certreal.hpp"

namespace seqsum {

namespace {

bool is_perfect_square(const mpz_class& d, mpz_class& root) {
    if (d < 0) return false;
    mpz_class r, rem;
    mpz_sqrtrem(r.get_mpz_t(), rem.get_mpz_t(), d.get_mpz_t());
    if (rem == 0) {
        root = r;
        return true;
    }
    return false;
}

}  // namespace

QuadraticSurd::QuadraticSurd(mpz_class a, mpz_class b, mpz_class c, mpz_class d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
    if (c_ == 0) throw std::invalid_argument("QuadraticSurd: zero denominator");
    if (d_ < 0) throw std::invalid_argument("QuadraticSurd: negative radicand");
    normalize();
}

void QuadraticSurd::normalize() {
    if (c_ < 0) {
        c_ = -c_;
        a_ = -a_;
        b_ = -b_;
    }
    if (b_ == 0) {
        d_ = 0;
    } else {
        mpz_class root;
        if (is_perfect_square(d_, root)) {
            a_ += b_ * root;
            b_ = 0;
            d_ = 0;
        }
    }
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a_.get_mpz_t(), b_.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c_.get_mpz_t());
    if (g > 1) {
        a_ /= g;
        b_ /= g;
        c_ /= g;
    }
}

QuadraticSurd QuadraticSurd::from_rational(const mpq_class& r) {
    return QuadraticSurd(r.get_num(), 0, r.get_den(), 0);
}

QuadraticSurd QuadraticSurd::from_integer(const mpz_class& z) {
    return QuadraticSurd(z, 0, 1, 0);
}

QuadraticSurd QuadraticSurd::sqrt_of(const mpz_class& d) {
    return QuadraticSurd(0, 1, 1, d);
}

QuadraticSurd QuadraticSurd::golden_ratio() {
    return QuadraticSurd(1, 1, 2, 5);
}

mpq_class QuadraticSurd::to_rational() const {
    if (!is_rational()) throw std::logic_error("QuadraticSurd: not rational");
    mpq_class r(a_, c_);
    r.canonicalize();
    return r;
}

QuadraticSurd QuadraticSurd::conjugate() const {
    return QuadraticSurd(a_, -b_, c_, d_);
}

QuadraticSurd QuadraticSurd::operator-() const {
    return QuadraticSurd(-a_, -b_, c_, d_);
}

mpz_class QuadraticSurd::common_radicand(const QuadraticSurd& x, const QuadraticSurd& y) {
    if (x.b_ == 0) return y.d_;
    if (y.b_ == 0) return x.d_;
    if (x.d_ != y.d_)
        throw std::invalid_argument("QuadraticSurd: mixed radicands " +
                                    x.d_.get_str() + " and " + y.d_.get_str());
    return x.d_;
}

QuadraticSurd operator+(const QuadraticSurd& x, const QuadraticSurd& y) {
    mpz_class d = QuadraticSurd::common_radicand(x, y);
    return QuadraticSurd(x.a_ * y.c_ + y.a_ * x.c_, x.b_ * y.c_ + y.b_ * x.c_,
                         x.c_ * y.c_, d);
}

QuadraticSurd operator-(const QuadraticSurd& x, const QuadraticSurd& y) {
    return x + (-y);
}

QuadraticSurd operator*(const QuadraticSurd& x, const QuadraticSurd& y) {
    mpz_class d = QuadraticSurd::common_radicand(x, y);
    return QuadraticSurd(x.a_ * y.a_ + x.b_ * y.b_ * d,
                         x.a_ * y.b_ + x.b_ * y.a_, x.c_ * y.c_, d);
}

QuadraticSurd QuadraticSurd::inverse() const {
    if (is_zero()) throw std::domain_error("QuadraticSurd: inverse of zero");
    // c / (a + b sqrt(d)) = c (a - b sqrt(d)) / (a^2 - b^2 d)
    mpz_class norm = a_ * a_ - b_ * b_ * d_;
    return QuadraticSurd(a_ * c_, -b_ * c_, norm, d_);
}

QuadraticSurd operator/(const QuadraticSurd& x, const QuadraticSurd& y) {
    return x * y.inverse();
}

QuadraticSurd QuadraticSurd::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    QuadraticSurd result = from_integer(1);
    QuadraticSurd base = *this;
    unsigned long k = static_cast<unsigned long>(e);
    while (k > 0) {
        if (k & 1) result = result * base;
        base = base * base;
        k >>= 1;
    }
    return result;
}

int QuadraticSurd::sign() const {
    // sign of a + b sqrt(d); c > 0 never matters
    if (b_ == 0) return sgn(a_);
    if (a_ == 0) return sgn(b_);
    int sa = sgn(a_), sb = sgn(b_);
    if (sa == sb) return sa;
    // opposite signs: compare a^2 against b^2 d
    mpz_class lhs = a_ * a_, rhs = b_ * b_ * d_;
    if (lhs == rhs) return 0;
    return (lhs > rhs) ? sa : sb;
}

bool QuadraticSurd::operator==(const QuadraticSurd& o) const {
    return a_ == o.a_ && b_ == o.b_ && c_ == o.c_ && d_ == o.d_;
}

std::string QuadraticSurd::str() const {
    if (is_rational()) {
        if (c_ == 1) return a_.get_str();
        return a_.get_str() + "/" + c_.get_str();
    }
    std::string s = "(" + a_.get_str();
    s += (b_ >= 0) ? "+" : "-";
    s += mpz_class(abs(b_)).get_str() + "*sqrt(" + d_.get_str() + "))";
    if (c_ != 1) s += "/" + c_.get_str();
    return s;
}

BinaryRecurrence::BinaryRecurrence(std::string name_, mpz_class p_, mpz_class q_,
                                   mpz_class u0_, mpz_class u1_)
    : name(std::move(name_)), p(std::move(p_)), q(std::move(q_)),
      u0(std::move(u0_)), u1(std::move(u1_)) {
    if (q == 0) throw std::invalid_argument("BinaryRecurrence: q must be non-zero");
    if (discriminant() <= 0)
        throw std::invalid_argument("BinaryRecurrence: discriminant must be positive");
}

QuadraticSurd BinaryRecurrence::root_theta() const {
    return QuadraticSurd(p, 1, 2, discriminant());
}

QuadraticSurd BinaryRecurrence::root_eta() const {
    return QuadraticSurd(p, -1, 2, discriminant());
}

QuadraticSurd BinaryRecurrence::binet_a() const {
    QuadraticSurd theta = root_theta(), eta = root_eta();
    return (QuadraticSurd::from_integer(u1) - QuadraticSurd::from_integer(u0) * eta) /
           (theta - eta);
}

QuadraticSurd BinaryRecurrence::binet_b() const {
    QuadraticSurd theta = root_theta(), eta = root_eta();
    return (QuadraticSurd::from_integer(u0) * theta - QuadraticSurd::from_integer(u1)) /
           (theta - eta);
}

const BinaryRecurrence& BinaryRecurrence::lucas() {
    static const BinaryRecurrence rec("lucas", 1, 1, 2, 1);
    return rec;
}

const BinaryRecurrence& BinaryRecurrence::jacobsthal() {
    static const BinaryRecurrence rec("jacobsthal", 1, 2, 0, 1);
    return rec;
}

const BinaryRecurrence& family_recurrence(Family f) {
    return f == Family::lucas ? BinaryRecurrence::lucas()
                              : BinaryRecurrence::jacobsthal();
}

mpz_class term(const BinaryRecurrence& rec, unsigned long n) {
    if (n == 0) return rec.u0;
    mpz_class prev = rec.u0, cur = rec.u1, next;
    for (unsigned long i = 1; i < n; ++i) {
        next = rec.p * cur + rec.q * prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

mpq_class binet_exact(const BinaryRecurrence& rec, unsigned long n) {
    QuadraticSurd value = rec.binet_a() * rec.root_theta().pow(static_cast<long>(n)) +
                          rec.binet_b() * rec.root_eta().pow(static_cast<long>(n));
    return value.to_rational();
}

std::vector<std::pair<unsigned long, mpz_class>>
terms_up_to_value(const BinaryRecurrence& rec, const mpz_class& bound) {
    std::vector<std::pair<unsigned long, mpz_class>> out;
    if (bound < 0) return out;
    mpz_class prev = rec.u0, cur = rec.u1;
    int consecutive_above = 0;
    unsigned long n = 0;
    mpz_class value = rec.u0;
    while (consecutive_above < 2) {
        if (value <= bound) {
            out.emplace_back(n, value);
            consecutive_above = 0;
        } else {
            ++consecutive_above;
        }
        ++n;
        if (n == 1) {
            value = rec.u1;
        } else {
            mpz_class next = rec.p * cur + rec.q * prev;
            prev = std::move(cur);
            cur = next;
            value = std::move(next);
        }
    }
    return out;
}

bool growth_bounds_hold(Family family, unsigned long n) {
    if (n < 1) throw std::invalid_argument("growth_bounds_hold: n must be >= 1");
    const BinaryRecurrence& rec = family_recurrence(family);
    mpz_class un = term(rec, n);
    EscalationPolicy policy{64, 4096};
    return with_escalation(policy, [&](mpfr_prec_t bits) {
        CertifiedReal value = CertifiedReal::from_integer(un, bits);
        CertifiedReal lo(bits), hi(bits);
        if (family == Family::lucas) {
            CertifiedReal theta =
                CertifiedReal::from_surd(QuadraticSurd::golden_ratio(), bits);
            lo = theta.pow_int(static_cast<long>(n) - 1);
            hi = CertifiedReal::from_integer(2, bits) *
                 theta.pow_int(static_cast<long>(n));
        } else {
            CertifiedReal two = CertifiedReal::from_integer(2, bits);
            lo = two.pow_int(static_cast<long>(n) - 2);
            hi = two.pow_int(static_cast<long>(n) - 1);
        }
        if (lo.provably_le(value) && value.provably_le(hi)) return true;
        if (lo.provably_gt(value) || value.provably_gt(hi)) return false;
        throw AmbiguousAtPrecision("growth bound undecided");
    });
}

}  // namespace seqsum
