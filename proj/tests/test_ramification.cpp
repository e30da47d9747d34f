#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <abv/ramification.hpp>

#include <random>

using namespace abv;

namespace {

// Seeded generator of valid filtrations: g1..gm a descending chain of
// p-powers, g0 = e_tame * g1.
filtration random_filtration(std::mt19937_64& rng) {
    long primes[] = {2, 3, 5};
    long p = primes[rng() % 3];
    long wild_len = rng() % 4;
    std::vector<long> wild;
    for (long i = 0; i < wild_len; ++i) wild.push_back(rng() % 4);
    std::sort(wild.rbegin(), wild.rend());
    std::vector<long> orders;
    std::vector<long> gs;
    for (long e : wild) {
        long g = 1;
        for (long i = 0; i < e; ++i) g *= p;
        gs.push_back(g);
    }
    long e_tame = 1 + rng() % 6;
    long top_wild = gs.empty() ? 1 : gs[0];
    orders.push_back(e_tame * top_wild);
    for (long g : gs) orders.push_back(g);
    return filtration(p, orders);
}

Rat random_nonneg_rat(std::mt19937_64& rng) {
    return make_rat(rng() % 600, 1 + rng() % 24);
}

}  // namespace

TEST_CASE("herbrand_phi examples") {
    filtration unram = filtration::unramified();
    CHECK(herbrand_phi(unram, make_rat(5)) == make_rat(5));
    filtration f(2, {4, 2, 1});
    CHECK(herbrand_phi(f, make_rat(3, 2)) == make_rat(5, 8));
    filtration g(3, {3, 3, 1});
    CHECK(herbrand_phi(g, make_rat(1)) == make_rat(1));
    CHECK(herbrand_phi(f, make_rat(0)) == 0);
    CHECK_THROWS_AS(herbrand_phi(f, make_rat(-1)), std::domain_error);
}

TEST_CASE("herbrand_psi examples") {
    filtration f(2, {4, 2, 1});
    CHECK(herbrand_psi(f, make_rat(5, 8)) == make_rat(3, 2));
    CHECK(herbrand_psi(filtration::unramified(), make_rat(7)) == make_rat(7));
    CHECK(herbrand_psi(f, make_rat(0)) == 0);
    CHECK_THROWS_AS(herbrand_psi(f, make_rat(-2)), std::domain_error);
}

TEST_CASE("phi/psi round trip and concavity on random filtrations") {
    std::mt19937_64 rng(101);
    for (int i = 0; i < 100; ++i) {
        filtration f = random_filtration(rng);
        Rat prev_slope(-1);
        for (int j = 0; j < 5; ++j) {
            Rat u = random_nonneg_rat(rng);
            Rat v = herbrand_phi(f, u);
            CHECK(herbrand_psi(f, v) == u);
            Rat w = random_nonneg_rat(rng);
            CHECK(herbrand_phi(f, herbrand_psi(f, w)) == w);
        }
        // piecewise slopes g_{m+1}/g_0, non-increasing in m
        for (long m = 0; m < 6; ++m) {
            Rat slope = herbrand_phi(f, Rat(m + 1)) - herbrand_phi(f, Rat(m));
            CHECK(slope == Rat(f.order_at(m + 1)) / Rat(f.g0()));
            if (m > 0) CHECK(slope <= herbrand_phi(f, Rat(m)) - herbrand_phi(f, Rat(m - 1)));
        }
    }
}

TEST_CASE("upper_breaks") {
    filtration f(2, {4, 2, 1});
    auto b = upper_breaks(f);
    REQUIRE(b.size() == 2);
    CHECK(b[0] == std::pair<Rat, long>{Rat(0), 4});
    CHECK(b[1] == std::pair<Rat, long>{make_rat(1, 2), 2});
    CHECK(upper_breaks(filtration::unramified()).empty());
    // (3,3,1): g0 = g1, so the only break is the wild one at lower number 1
    auto c = upper_breaks(filtration(3, {3, 3, 1}));
    REQUIRE(c.size() == 1);
    CHECK(c[0] == std::pair<Rat, long>{Rat(1), 3});
}

TEST_CASE("different valuation and root discriminant exponent") {
    CHECK(different_valuation(filtration::tame_cyclic(9, 2)) == 8);
    CHECK(different_valuation(filtration::unramified()) == 0);
    CHECK(different_valuation(filtration(2, {4, 2, 1})) == 4);

    CHECK(root_disc_exponent(filtration::tame_cyclic(3, 2)) == make_rat(2, 3));
    CHECK(root_disc_exponent(filtration::unramified()) == 0);
    CHECK(root_disc_exponent(filtration(2, {4, 2, 1})) == 1);
}

TEST_CASE("root_disc_exponent stays below 1 on tame filtrations") {
    // tame cyclic degree e contributes 1 - 1/e, approaching 1 from below
    for (long e = 2; e <= 50; ++e) {
        Rat r = root_disc_exponent(filtration::tame_cyclic(e, 7));
        CHECK(r == Rat(1) - make_rat(1, e));
        CHECK(r < 1);
    }
}

TEST_CASE("fontaine bounds") {
    CHECK(fontaine_upper_bound(1, 1, 2) == 1);
    CHECK(fontaine_upper_bound(1, 1, 3) == make_rat(1, 2));
    CHECK(fontaine_upper_bound(2, 1, 2) == 3);

    CHECK(fontaine_different_bound(1, 3) == make_rat(3, 2));
    CHECK(fontaine_different_bound(2, 2) == 3);
    CHECK(fontaine_different_bound(1, 7) == make_rat(7, 6));
}

TEST_CASE("cyclotomic different") {
    CHECK(cyclotomic_different(3, 2) == make_rat(3, 2));
    CHECK(cyclotomic_different(2, 3) == 2);
    CHECK(cyclotomic_different(5, 1) == make_rat(3, 4));
    CHECK_THROWS_AS(cyclotomic_different(2, 1), std::domain_error);
}

TEST_CASE("cyclotomic_cap") {
    CHECK(cyclotomic_cap(3, 1) == 1);
    CHECK(cyclotomic_cap(2, 1) == 2);
    CHECK(cyclotomic_cap(7, 4) == 4);
    for (long n = 1; n <= 3; ++n) {
        for (long p : {3L, 5L, 7L}) CHECK(cyclotomic_cap(p, n) == n);
        CHECK(cyclotomic_cap(2, n) == n + 1);
    }
    CHECK(cyclotomic_cap(2, 2, true) == 2);
    CHECK(cyclotomic_cap(2, 3, true) == 3);
    // exclusion mechanism: every layer above the cap contradicts the bound
    for (long p : {2L, 3L, 5L, 7L})
        for (long n = 1; n <= 4; ++n)
            for (long m = cyclotomic_cap(p, n) + 1; m <= cyclotomic_cap(p, n) + 4; ++m)
                CHECK(cyclotomic_different(p, m) >= fontaine_different_bound(n, p));
}

TEST_CASE("conductor_exponent") {
    CHECK(conductor_exponent(filtration(2, {2, 2, 1})) == 2);
    CHECK(conductor_exponent(filtration::unramified()) == 0);
    CHECK(conductor_exponent(filtration::tame_cyclic(6, 5)) == 1);
    // g_2 = 1 forces conductor <= 2
    std::mt19937_64 rng(23);
    for (int i = 0; i < 300; ++i) {
        filtration f = random_filtration(rng);
        if (f.order_at(2) == 1) CHECK(conductor_exponent(f) <= 2);
    }
}

TEST_CASE("filtration validation") {
    CHECK_THROWS_AS(filtration(2, {2, 4, 1}), std::domain_error);
    CHECK_THROWS_AS(filtration(2, {6, 6, 2, 1}), std::domain_error);  // g1=6 not a 2-power
    CHECK_THROWS_AS(filtration(3, {9, 6, 1}), std::domain_error);     // divisibility
    CHECK_NOTHROW(filtration(2, {12, 4, 2, 1}));
}
