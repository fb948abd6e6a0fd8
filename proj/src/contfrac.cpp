#include "seqsum/contfrac.hpp"

#include <stdexcept>

namespace seqsum {

namespace {

// Check the construction invariants; the approximation-quality check uses the
// full-precision interval enclosing x.
void certify_table(const ContinuedFractionTable& table, const CertifiedReal& x_enclosure) {
    const auto& a = table.partial_quotients;
    const auto& c = table.convergents;
    if (a.size() != c.size()) throw std::logic_error("cf table: length mismatch");
    for (std::size_t i = 1; i < a.size(); ++i)
        if (a[i] < 1) throw std::logic_error("cf table: partial quotient below 1");
    for (std::size_t i = 0; i < c.size(); ++i) {
        // seeds: p_{-1} = 1, p_{-2} = 0, q_{-1} = 0, q_{-2} = 1
        mpz_class pp = (i >= 1) ? c[i - 1].first : mpz_class(1);
        mpz_class pp2 = (i >= 2) ? c[i - 2].first : mpz_class(i == 1 ? 1 : 0);
        mpz_class qq = (i >= 1) ? c[i - 1].second : mpz_class(0);
        mpz_class qq2 = (i >= 2) ? c[i - 2].second : mpz_class(i == 1 ? 0 : 1);
        if (c[i].first != a[i] * pp + pp2 || c[i].second != a[i] * qq + qq2)
            throw std::logic_error("cf table: convergent recurrence violated");
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), c[i].first.get_mpz_t(), c[i].second.get_mpz_t());
        if (g != 1) throw std::logic_error("cf table: convergent not reduced");
    }
    mpfr_prec_t bits = x_enclosure.precision_bits();
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        mpq_class ratio(c[i].first, c[i].second);
        ratio.canonicalize();
        CertifiedReal err = (x_enclosure - CertifiedReal::from_rational(ratio, bits)).abs();
        mpq_class cap(mpz_class(1), mpz_class(c[i].second * c[i + 1].second));
        if (!err.provably_lt(CertifiedReal::from_rational(cap, bits)))
            throw std::logic_error("cf table: approximation bound not certified at index " +
                                   std::to_string(i));
    }
}

}  // namespace

ContinuedFractionTable expand(const RealExpr& x, std::size_t count,
                              const EscalationPolicy& policy) {
    return with_escalation(policy, [&](mpfr_prec_t bits) {
        CertifiedReal value = eval(x, bits);
        std::vector<mpz_class> a;
        a.reserve(count + 1);
        CertifiedReal current = value;
        for (std::size_t i = 0; i <= count; ++i) {
            mpz_class ai = certified_floor(current);
            a.push_back(ai);
            if (i == count) break;
            CertifiedReal frac = current - CertifiedReal::from_integer(ai, bits);
            if (!frac.provably_positive())
                throw AmbiguousAtPrecision("cf remainder not provably positive at term " +
                                           std::to_string(i));
            current = CertifiedReal::from_integer(1, bits) / frac;
        }

        ContinuedFractionTable table{x, std::move(a), {}, bits};
        table.convergents.reserve(table.partial_quotients.size());
        mpz_class p_prev = 1, p_prev2 = 0, q_prev = 0, q_prev2 = 1;
        for (const mpz_class& ai : table.partial_quotients) {
            mpz_class p = ai * p_prev + p_prev2;
            mpz_class q = ai * q_prev + q_prev2;
            table.convergents.emplace_back(p, q);
            p_prev2 = std::move(p_prev);
            p_prev = std::move(p);
            q_prev2 = std::move(q_prev);
            q_prev = std::move(q);
        }
        certify_table(table, value);
        return table;
    });
}

std::pair<std::size_t, mpz_class>
first_denominator_exceeding(ContinuedFractionTable& table, const mpz_class& threshold,
                            const EscalationPolicy& policy) {
    for (;;) {
        for (std::size_t i = 0; i < table.size(); ++i)
            if (table.q(i) > threshold) return {i, table.q(i)};
        std::size_t grown = table.size() < 8 ? 16 : table.size() * 2;
        table = expand(table.source, grown, policy);
    }
}

bool legendre_is_convergent(const mpz_class& p, const mpz_class& q, const RealExpr& x,
                            const EscalationPolicy& policy) {
    if (q <= 0) throw std::invalid_argument("legendre_is_convergent: q must be positive");
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
    if (g != 1) throw std::invalid_argument("legendre_is_convergent: p/q must be reduced");

    mpq_class ratio(p, q);
    ratio.canonicalize();
    mpq_class cap(mpz_class(1), mpz_class(2 * q * q));
    bool sharp = with_escalation(policy, [&](mpfr_prec_t bits) {
        CertifiedReal err =
            (eval(x, bits) - CertifiedReal::from_rational(ratio, bits)).abs();
        CertifiedReal bound = CertifiedReal::from_rational(cap, bits);
        if (err.provably_lt(bound)) return true;
        if (err.provably_ge(bound)) return false;
        throw AmbiguousAtPrecision("legendre inequality undecided");
    });
    if (!sharp) return false;

    // Cross-check: the inequality forces p/q to appear among the convergents.
    ContinuedFractionTable table = expand(x, 8, policy);
    for (;;) {
        for (std::size_t i = 0; i < table.size(); ++i)
            if (table.p(i) == p && table.q(i) == q) return true;
        if (table.q(table.size() - 1) > q)
            throw std::logic_error("legendre_is_convergent: inequality certified but "
                                   "p/q is not a convergent");
        table = expand(table.source, table.size() * 2, policy);
    }
}

LegendreLowerBound legendre_lower_bound(const ContinuedFractionTable& table,
                                        const mpz_class& M) {
    if (M <= 0) throw std::invalid_argument("legendre_lower_bound: M must be positive");
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (table.q(i) > M) {
            mpz_class b = 0;
            for (std::size_t j = 0; j <= i; ++j)
                b = std::max(b, table.partial_quotients[j]);
            return {i, table.q(i), b, M};
        }
    }
    throw std::invalid_argument("legendre_lower_bound: table too short, extend it first");
}

}  // namespace seqsum
