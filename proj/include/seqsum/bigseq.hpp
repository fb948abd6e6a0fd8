#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

namespace seqsum {

// Exact element of Q(sqrt(d)): (a + b*sqrt(d)) / c with integers a, b and
// c > 0, d >= 0.  Normal form: gcd(a, b, c) = 1; a perfect-square d is folded
// into the rational part, so b == 0 <=> d == 0 after construction.
class QuadraticSurd {
public:
    QuadraticSurd() : a_(0), b_(0), c_(1), d_(0) {}
    QuadraticSurd(mpz_class a, mpz_class b, mpz_class c, mpz_class d);

    static QuadraticSurd from_rational(const mpq_class& r);
    static QuadraticSurd from_integer(const mpz_class& z);
    static QuadraticSurd sqrt_of(const mpz_class& d);  // sqrt(d), d >= 0
    static QuadraticSurd golden_ratio();               // (1 + sqrt(5)) / 2

    const mpz_class& a() const { return a_; }
    const mpz_class& b() const { return b_; }
    const mpz_class& c() const { return c_; }
    const mpz_class& d() const { return d_; }

    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_rational() const { return b_ == 0; }
    mpq_class to_rational() const;  // requires is_rational()

    QuadraticSurd conjugate() const;  // sqrt(d) -> -sqrt(d)
    QuadraticSurd inverse() const;    // requires non-zero
    QuadraticSurd pow(long e) const;  // integer exponent, negative via inverse

    int sign() const;  // exact: -1, 0, +1

    QuadraticSurd operator-() const;
    friend QuadraticSurd operator+(const QuadraticSurd& x, const QuadraticSurd& y);
    friend QuadraticSurd operator-(const QuadraticSurd& x, const QuadraticSurd& y);
    friend QuadraticSurd operator*(const QuadraticSurd& x, const QuadraticSurd& y);
    friend QuadraticSurd operator/(const QuadraticSurd& x, const QuadraticSurd& y);
    bool operator==(const QuadraticSurd& o) const;

    std::string str() const;

private:
    mpz_class a_, b_, c_, d_;
    void normalize();
    static mpz_class common_radicand(const QuadraticSurd& x, const QuadraticSurd& y);
};

// U_{n+2} = p*U_{n+1} + q*U_n with integer seeds u0, u1.
// Requires q != 0 and a positive discriminant p^2 + 4q (two distinct real
// roots).
struct BinaryRecurrence {
    std::string name;
    mpz_class p, q;
    mpz_class u0, u1;

    BinaryRecurrence(std::string name, mpz_class p, mpz_class q,
                     mpz_class u0, mpz_class u1);

    mpz_class discriminant() const { return p * p + 4 * q; }
    QuadraticSurd root_theta() const;  // (p + sqrt(disc)) / 2, the dominant root
    QuadraticSurd root_eta() const;    // (p - sqrt(disc)) / 2
    QuadraticSurd binet_a() const;     // (u1 - u0*eta) / (theta - eta)
    QuadraticSurd binet_b() const;     // (u0*theta - u1) / (theta - eta)

    static const BinaryRecurrence& lucas();       // 2, 1, 3, 4, 7, 11, ...
    static const BinaryRecurrence& jacobsthal();  // 0, 1, 1, 3, 5, 11, ...
};

enum class Family { lucas, jacobsthal };

const BinaryRecurrence& family_recurrence(Family f);

// U_n by exact iteration.
mpz_class term(const BinaryRecurrence& rec, unsigned long n);

// A*theta^n + B*eta^n in exact surd arithmetic; the result is always a
// rational (integer-valued for integer seeds) and equals term(rec, n).
mpq_class binet_exact(const BinaryRecurrence& rec, unsigned long n);

// All (n, U_n) with U_n <= bound.  The scan runs past the non-monotone prefix
// (Lucas starts 2, 1, ...) and stops only once two consecutive terms exceed
// the bound.
std::vector<std::pair<unsigned long, mpz_class>>
terms_up_to_value(const BinaryRecurrence& rec, const mpz_class& bound);

// Certified check of the growth envelope used by the index-relation
// derivations: theta^{n-1} <= L_n <= 2*theta^n, 2^{n-2} <= J_n <= 2^{n-1}.
bool growth_bounds_hold(Family family, unsigned long n);

}  // namespace seqsum
