#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <mpfr.h>

#include <random>

#include "seqsum/certreal.hpp"

using namespace seqsum;

namespace {

// Independent oracle: straight MPFR evaluation at high precision, no interval
// machinery.  Returns the value as an exact rational.
mpq_class oracle_log(unsigned long arg, mpfr_prec_t bits) {
    mpfr_t a;
    mpfr_init2(a, bits);
    mpfr_set_ui(a, arg, MPFR_RNDN);
    mpfr_log(a, a, MPFR_RNDN);
    mpq_class out;
    mpfr_get_q(out.get_mpq_t(), a);
    mpfr_clear(a);
    return out;
}

bool contains(const CertifiedReal& v, const mpq_class& x) {
    return v.lo_q() <= x && x <= v.hi_q();
}

// random rational expression over +,-,*,/ and rational literals
RealExpr random_rational_expr(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> kind(0, depth <= 0 ? 0 : 4);
    std::uniform_int_distribution<long> lit(-50, 50);
    std::uniform_int_distribution<long> den(1, 30);
    switch (kind(rng)) {
        case 0:
            return RealExpr::rational(mpq_class(lit(rng), den(rng)));
        case 1:
            return random_rational_expr(rng, depth - 1) + random_rational_expr(rng, depth - 1);
        case 2:
            return random_rational_expr(rng, depth - 1) - random_rational_expr(rng, depth - 1);
        case 3:
            return random_rational_expr(rng, depth - 1) * random_rational_expr(rng, depth - 1);
        default: {
            RealExpr d = RealExpr::rational(mpq_class(lit(rng), den(rng)));
            auto exact = d.exact_rational();
            if (!exact || *exact == 0) d = RealExpr::integer(3);
            return random_rational_expr(rng, depth - 1) / d;
        }
    }
}

}  // namespace

TEST_CASE("log(2) enclosure against a raw high-precision oracle") {
    CertifiedReal v = eval(RealExpr::log(RealExpr::integer(2)), 64);
    CHECK(contains(v, oracle_log(2, 512)));
    // well-known leading digits 0.6931471805599453...
    CHECK(v.lo_q() < mpq_class(mpz_class("6931471806"), mpz_class("10000000000")));
    CHECK(v.hi_q() > mpq_class(mpz_class("6931471805"), mpz_class("10000000000")));
}

TEST_CASE("log(phi)/log(2) enclosure and width") {
    RealExpr alpha = RealExpr::log(RealExpr::phi()) / RealExpr::log(RealExpr::integer(2));
    CertifiedReal v = eval(alpha, 128);
    // 0.69424191363061738...
    CHECK(v.lo_q() < mpq_class(mpz_class("69424192"), mpz_class("100000000")));
    CHECK(v.hi_q() > mpq_class(mpz_class("69424191"), mpz_class("100000000")));
    CHECK(v.width() < mpq_class(1, mpz_class(1) << 100));
    CHECK(certified_floor(v) == 0);
    CHECK(certified_floor(eval(alpha, 64)) == 0);
}

TEST_CASE("identity phi - (1+sqrt(5))/2 encloses zero tightly") {
    RealExpr expr = RealExpr::phi() -
                    (RealExpr::integer(1) + RealExpr::surd(QuadraticSurd::sqrt_of(5))) /
                        RealExpr::integer(2);
    CertifiedReal v = eval(expr, 64);
    CHECK(contains(v, mpq_class(0)));
    CHECK(v.width() < mpq_class(1, mpz_class(1) << 50));
}

TEST_CASE("certified_floor decides or signals") {
    CHECK(certified_floor(CertifiedReal::from_endpoints(mpq_class(22, 10), mpq_class(24, 10), 64)) == 2);
    CHECK_THROWS_AS(
        certified_floor(CertifiedReal::from_endpoints(mpq_class(29, 10), mpq_class(31, 10), 64)),
        AmbiguousAtPrecision);
    CHECK(certified_floor(CertifiedReal::from_integer(-3, 64)) == -3);
    // floor on rational inputs agrees with exact rational floor
    std::mt19937 rng(11);
    std::uniform_int_distribution<long> num(-400, 400);
    std::uniform_int_distribution<long> den(1, 40);
    for (int i = 0; i < 200; ++i) {
        mpq_class r(num(rng), den(rng));
        r.canonicalize();
        mpz_class expect;
        mpz_fdiv_q(expect.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
        CHECK(certified_floor(CertifiedReal::from_rational(r, 96)) == expect);
    }
}

TEST_CASE("nearest integer distance: exact cases") {
    auto nid = [](const mpq_class& lo, const mpq_class& hi) {
        return nearest_integer_distance(CertifiedReal::from_endpoints(lo, hi, 96));
    };
    // exact midpoint 1/2 -> exactly 1/2
    CertifiedReal half = nid(mpq_class(1, 2), mpq_class(1, 2));
    CHECK(half.lo_q() == mpq_class(1, 2));
    CHECK(half.hi_q() == mpq_class(1, 2));
    // exact integer -> 0
    CertifiedReal zero = nid(3, 3);
    CHECK(zero.lo_q() == 0);
    CHECK(zero.hi_q() == 0);
    // [2.2, 2.4] -> [0.2, 0.4]
    CertifiedReal band = nid(mpq_class(11, 5), mpq_class(12, 5));
    CHECK(band.lo_q() <= mpq_class(1, 5));
    CHECK(band.hi_q() >= mpq_class(2, 5));
    CHECK(band.hi_q() < mpq_class(1, 2));
    // straddling an integer -> min 0; straddling a half-integer -> max 1/2
    CHECK(nid(mpq_class(29, 10), mpq_class(31, 10)).lo_q() == 0);
    CHECK(nid(mpq_class(24, 10), mpq_class(26, 10)).hi_q() == mpq_class(1, 2));
}

TEST_CASE("nearest integer distance is 1-periodic (spot check)") {
    std::mt19937 rng(23);
    std::uniform_int_distribution<long> num(-300, 300);
    std::uniform_int_distribution<long> den(1, 60);
    for (int i = 0; i < 300; ++i) {
        mpq_class r(num(rng), den(rng));
        r.canonicalize();
        CertifiedReal a = nearest_integer_distance(CertifiedReal::from_rational(r, 96));
        CertifiedReal b =
            nearest_integer_distance(CertifiedReal::from_rational(mpq_class(r + 1), 96));
        CHECK(a.lo_q() <= b.hi_q());
        CHECK(b.lo_q() <= a.hi_q());
        CHECK(a.hi_q() <= mpq_class(1, 2));
        CHECK(a.lo_q() >= 0);
    }
}

TEST_CASE("containment and monotone refinement over random rational expressions") {
    std::mt19937 rng(99);
    for (int i = 0; i < 1000; ++i) {
        RealExpr e = random_rational_expr(rng, 3);
        auto exact = e.exact_rational();
        if (!exact) continue;
        CertifiedReal coarse = e.eval(64);
        CertifiedReal fine = e.eval(256);
        CHECK(contains(coarse, *exact));
        CHECK(contains(fine, *exact));
        // doubling precision never widens
        CHECK(coarse.lo_q() <= fine.lo_q());
        CHECK(fine.hi_q() <= coarse.hi_q());
    }
}

TEST_CASE("width shrinks at least geometrically as precision doubles") {
    RealExpr exprs[] = {
        RealExpr::log(RealExpr::phi()) / RealExpr::log(RealExpr::integer(2)),
        RealExpr::log(RealExpr::integer(3)) / RealExpr::log(RealExpr::integer(2)),
        RealExpr::surd(QuadraticSurd::sqrt_of(5)) * RealExpr::rational(mpq_class(3, 7)),
    };
    for (const RealExpr& e : exprs) {
        mpq_class w64 = e.eval(64).width();
        mpq_class w128 = e.eval(128).width();
        mpq_class w256 = e.eval(256).width();
        REQUIRE(w64 > 0);
        // far better than halving per doubling
        CHECK(w128 * (mpz_class(1) << 32) < w64);
        CHECK(w256 * (mpz_class(1) << 64) < w128);
    }
}

TEST_CASE("interval division by zero-straddling interval is rejected") {
    CertifiedReal num = CertifiedReal::from_integer(1, 64);
    CertifiedReal den = CertifiedReal::from_endpoints(-1, 1, 64);
    CHECK_THROWS_AS(num / den, DomainError);
    CHECK_THROWS_AS(CertifiedReal::from_integer(0, 64).log(), DomainError);
    CHECK_THROWS_AS(CertifiedReal::from_integer(-2, 64).log(), DomainError);
}

TEST_CASE("integer powers, including negatives") {
    CertifiedReal two = CertifiedReal::from_integer(2, 96);
    CHECK(two.pow_int(10).lo_q() == 1024);
    CHECK(two.pow_int(0).lo_q() == 1);
    CertifiedReal inv = two.pow_int(-3);
    CHECK(contains(inv, mpq_class(1, 8)));
    CertifiedReal neg = CertifiedReal::from_integer(-3, 96).pow_int(3);
    CHECK(contains(neg, mpq_class(-27)));
}

TEST_CASE("expression parser round-trips the pipeline inputs") {
    const char* samples[] = {
        "log(phi)/log(2)",
        "log(3)/log(2)",
        "log(3/(1+2^(-121)))/log(2)",
        "log(3*(1+phi^(-45)))/log(2)",
        "(1+sqrt(5))/2",
        "26",
        "3/2",
        "1.4",
    };
    for (const char* text : samples) {
        RealExpr e = RealExpr::parse(text);
        RealExpr again = RealExpr::parse(e.str());
        CertifiedReal a = e.eval(128), b = again.eval(128);
        CHECK(a.lo_q() == b.lo_q());
        CHECK(a.hi_q() == b.hi_q());
    }
    // phi parses to the golden ratio
    CertifiedReal phi = RealExpr::parse("phi").eval(96);
    CertifiedReal built =
        CertifiedReal::from_surd(QuadraticSurd::golden_ratio(), 96);
    CHECK(phi.lo_q() == built.lo_q());
}

TEST_CASE("parser reports the offending token") {
    auto check_token = [](const char* text, const std::string& token) {
        try {
            RealExpr::parse(text);
            FAIL("expected ParseError for ", text);
        } catch (const ParseError& e) {
            CHECK(e.token == token);
        }
    };
    check_token("log(2", "<end>");
    check_token("2 + * 3", "*");
    check_token("foo", "foo");
    check_token("sqrt(phi)", "phi");
    check_token("2^x", "x");
}

TEST_CASE("exact decimal literals") {
    auto v = RealExpr::parse("1.4").exact_rational();
    REQUIRE(v.has_value());
    CHECK(*v == mpq_class(7, 5));
    CHECK(*RealExpr::parse("0.16").exact_rational() == mpq_class(4, 25));
    CHECK(*RealExpr::parse("2.2").exact_rational() == mpq_class(11, 5));
}

TEST_CASE("escalation policy reaches a decision or exhausts") {
    EscalationPolicy tiny{64, 64};
    CHECK_THROWS_AS(with_escalation(tiny,
                                    [](mpfr_prec_t) -> int {
                                        throw AmbiguousAtPrecision("never decides");
                                    }),
                    PrecisionExhausted);
    int calls = 0;
    int out = with_escalation(EscalationPolicy{64, 1024}, [&](mpfr_prec_t bits) -> int {
        ++calls;
        if (bits < 256) throw AmbiguousAtPrecision("more bits");
        return 7;
    });
    CHECK(out == 7);
    CHECK(calls == 3);  // 64, 128, 256
}

TEST_CASE("decimal rendering is deterministic and truncating") {
    CHECK(decimal_string(mpq_class(7, 5), 5) == "1.4000e0");
    CHECK(decimal_string(mpq_class(-7, 5), 3) == "-1.40e0");
    CHECK(decimal_string(mpq_class(0), 5) == "0");
    CHECK(decimal_string(mpq_class(1, 3), 6) == "3.33333e-1");
    CHECK(decimal_upper_bound(mpq_class(0)) == "0");
    // upper bound really is an upper bound
    mpq_class v(1, 3);
    CHECK(decimal_upper_bound(v) == "3.34e-1");
}
