#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "seqsum/bigseq.hpp"

using namespace seqsum;

TEST_CASE("seed terms and small values") {
    const auto& L = BinaryRecurrence::lucas();
    const auto& J = BinaryRecurrence::jacobsthal();
    CHECK(term(L, 0) == 2);
    CHECK(term(L, 1) == 1);
    CHECK(term(J, 0) == 0);
    CHECK(term(J, 1) == 1);
    // both families hit 11 at index 5
    CHECK(term(L, 5) == 11);
    CHECK(term(J, 5) == 11);
}

TEST_CASE("J_12 against the closed form (2^12 - 1)/3") {
    mpz_class expected = (mpz_class(1) << 12) - 1;
    expected /= 3;
    CHECK(expected == 1365);
    CHECK(term(BinaryRecurrence::jacobsthal(), 12) == expected);
}

TEST_CASE("defining recurrence holds at random large indices") {
    const auto& L = BinaryRecurrence::lucas();
    const auto& J = BinaryRecurrence::jacobsthal();
    std::mt19937 rng(42);
    std::uniform_int_distribution<unsigned long> dist(2, 10000);
    for (int i = 0; i < 12; ++i) {
        unsigned long n = dist(rng);
        CHECK(term(L, n) == term(L, n - 1) + term(L, n - 2));
        CHECK(term(J, n) == term(J, n - 1) + 2 * term(J, n - 2));
    }
}

TEST_CASE("binet closed form equals iteration for n <= 60") {
    for (const auto* rec : {&BinaryRecurrence::lucas(), &BinaryRecurrence::jacobsthal()})
        for (unsigned long n = 0; n <= 60; ++n) {
            mpq_class v = binet_exact(*rec, n);
            CHECK(v.get_den() == 1);
            CHECK(v.get_num() == term(*rec, n));
        }
    // the Jacobsthal closed form is (2^n - (-1)^n)/3
    for (unsigned long n = 0; n <= 60; ++n) {
        mpz_class expected = (mpz_class(1) << n) - (n % 2 == 0 ? 1 : -1);
        expected /= 3;
        CHECK(binet_exact(BinaryRecurrence::jacobsthal(), n) == expected);
    }
}

TEST_CASE("binet coefficients specialise as expected") {
    const auto& L = BinaryRecurrence::lucas();
    CHECK(L.binet_a() == QuadraticSurd::from_integer(1));
    CHECK(L.binet_b() == QuadraticSurd::from_integer(1));
    CHECK(binet_exact(L, 0) == 2);
    CHECK(binet_exact(L, 7) == 29);

    const auto& J = BinaryRecurrence::jacobsthal();
    // discriminant 9 is a perfect square: the roots normalise to rationals
    CHECK(J.root_theta().is_rational());
    CHECK(J.root_theta().to_rational() == 2);
    CHECK(J.root_eta().to_rational() == -1);
    CHECK(J.binet_a().to_rational() == mpq_class(1, 3));
}

TEST_CASE("terms_up_to_value keeps the non-monotone prefix") {
    const auto& L = BinaryRecurrence::lucas();
    const auto& J = BinaryRecurrence::jacobsthal();

    auto lucas4 = terms_up_to_value(L, 4);
    REQUIRE(lucas4.size() == 4);
    CHECK(lucas4[0] == std::pair<unsigned long, mpz_class>{0, 2});
    CHECK(lucas4[1] == std::pair<unsigned long, mpz_class>{1, 1});
    CHECK(lucas4[2] == std::pair<unsigned long, mpz_class>{2, 3});
    CHECK(lucas4[3] == std::pair<unsigned long, mpz_class>{3, 4});

    auto jac1 = terms_up_to_value(J, 1);
    REQUIRE(jac1.size() == 3);
    CHECK(jac1[1].second == 1);
    CHECK(jac1[2].second == 1);  // duplicate value retained

    CHECK(terms_up_to_value(L, 0).empty());
}

TEST_CASE("terms_up_to_value matches term() on small bounds") {
    for (const auto* rec : {&BinaryRecurrence::lucas(), &BinaryRecurrence::jacobsthal()})
        for (long bound : {0, 1, 2, 5, 11, 100, 5000}) {
            auto listed = terms_up_to_value(*rec, bound);
            for (const auto& [n, v] : listed) CHECK(v == term(*rec, n));
            // nothing missing below the cutoff index
            unsigned long cutoff = listed.empty() ? 8 : listed.back().first + 3;
            std::size_t count = 0;
            for (unsigned long n = 0; n <= cutoff; ++n)
                if (term(*rec, n) <= bound) ++count;
            CHECK(count == listed.size());
        }
}

TEST_CASE("growth bounds certified for 1 <= n <= 500") {
    for (unsigned long n = 1; n <= 500; ++n) {
        CHECK(growth_bounds_hold(Family::lucas, n));
        CHECK(growth_bounds_hold(Family::jacobsthal, n));
    }
}

TEST_CASE("growth bound boundary cases") {
    CHECK(growth_bounds_hold(Family::lucas, 1));       // theta^0 = 1 <= 1
    CHECK(growth_bounds_hold(Family::jacobsthal, 2));  // 1 <= 1 <= 2
}

TEST_CASE("surd arithmetic closes over Q(sqrt(5))") {
    QuadraticSurd phi = QuadraticSurd::golden_ratio();
    QuadraticSurd psi = phi.conjugate();
    CHECK((phi + psi) == QuadraticSurd::from_integer(1));
    CHECK((phi * psi) == QuadraticSurd::from_integer(-1));
    CHECK((phi * phi - phi) == QuadraticSurd::from_integer(1));  // phi^2 = phi + 1
    CHECK(phi.pow(2) == phi + QuadraticSurd::from_integer(1));
    CHECK(phi.pow(-1) == phi - QuadraticSurd::from_integer(1));  // 1/phi = phi - 1
    CHECK(phi.sign() == 1);
    CHECK(psi.sign() == -1);
    CHECK((phi - phi).sign() == 0);
}

TEST_CASE("perfect-square radicands collapse to rationals") {
    QuadraticSurd s(1, 1, 2, 9);  // (1 + sqrt(9))/2 = 2
    CHECK(s.is_rational());
    CHECK(s.to_rational() == 2);
    QuadraticSurd root = QuadraticSurd::sqrt_of(49);
    CHECK(root.to_rational() == 7);
}

TEST_CASE("surd power and inverse round trips") {
    QuadraticSurd phi = QuadraticSurd::golden_ratio();
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> dist(-12, 12);
    for (int i = 0; i < 30; ++i) {
        long e = dist(rng);
        CHECK(phi.pow(e) * phi.pow(-e) == QuadraticSurd::from_integer(1));
    }
}

TEST_CASE("recurrence construction rejects bad parameters") {
    CHECK_THROWS_AS(BinaryRecurrence("bad", 1, 0, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(BinaryRecurrence("bad", 0, -1, 0, 1), std::invalid_argument);
}

TEST_CASE("binet closed form holds for random recurrences") {
    // arbitrary radicands, square and non-square alike, positive and negative
    // coefficients
    std::mt19937 rng(2024);
    std::uniform_int_distribution<long> pd(-3, 5), qd(-5, 5), seed(-4, 4);
    int built = 0;
    while (built < 40) {
        long p = pd(rng), q = qd(rng);
        if (q == 0 || p * p + 4 * q <= 0) continue;
        BinaryRecurrence rec("random", p, q, seed(rng), seed(rng));
        ++built;
        for (unsigned long n = 0; n <= 24; ++n) {
            mpq_class v = binet_exact(rec, n);
            CHECK(v.get_den() == 1);
            CHECK(v.get_num() == term(rec, n));
        }
    }
}
