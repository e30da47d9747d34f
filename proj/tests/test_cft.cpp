#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <abv/cft.hpp>
#include <abv/data.hpp>

#include <sstream>

using namespace abv;

TEST_CASE("splitting_in_cyclotomic") {
    CHECK(splitting_in_cyclotomic(3, 2) == 1);
    CHECK(splitting_in_cyclotomic(3, 7) == 2);
    CHECK(splitting_in_cyclotomic(2, 7) == 1);
    CHECK(splitting_in_cyclotomic(2, 5) == 2);
    CHECK(splitting_in_cyclotomic(5, 2) == 1);
    CHECK(splitting_in_cyclotomic(5, 11) == 4);  // 11 = 1 mod 5 splits completely
    CHECK_THROWS_AS(splitting_in_cyclotomic(3, 3), std::domain_error);
    // one prime over p for each pair the bound table covers
    const std::pair<long, long> pairs[] = {{2, 3}, {2, 7}, {3, 2}, {3, 5}, {5, 2}, {5, 3}};
    for (auto [ell, p] : pairs) CHECK(splitting_in_cyclotomic(ell, p) == 1);
}

TEST_CASE("abelian_layer") {
    auto r = abelian_layer(3, 5);
    CHECK(r.rank_bound == 1);
    CHECK(r.resolved);
    REQUIRE(r.candidates.size() == 2);
    CHECK(r.candidates[0] == field_tag::cyclotomic(3));
    CHECK(r.candidates[1] == field_tag::cyclotomic(3).compose(field_tag::pure_radical(3, 5)));

    auto q = abelian_layer(5, 2);
    CHECK(q.rank_bound == 1);
    CHECK(q.candidates[1] == field_tag::cyclotomic(5).compose(field_tag::pure_radical(5, 2)));

    auto u = abelian_layer(3, 7);
    CHECK(u.rank_bound == 2);
    CHECK_FALSE(u.resolved);
    CHECK(u.candidates.empty());
}

TEST_CASE("fundamental discriminant recognition") {
    for (long d : {-3, -4, -7, -8, 5, 8, 12, 13, 28})
        CHECK(is_fundamental_discriminant(d));
    for (long d : {0, 1, -1, -9, 9, 16, -12, 25, -27})
        CHECK_FALSE(is_fundamental_discriminant(d));
}

TEST_CASE("quadratic_class_number imaginary") {
    CHECK(quadratic_class_number(-3) == 1);
    CHECK(quadratic_class_number(-7) == 1);
    CHECK(quadratic_class_number(-4) == 1);
    CHECK(quadratic_class_number(-23) == 3);
    CHECK(quadratic_class_number(-47) == 5);
    CHECK(quadratic_class_number(-163) == 1);
    CHECK(quadratic_class_number(-56) == 4);
    CHECK_THROWS_AS(quadratic_class_number(-9), std::domain_error);
}

TEST_CASE("quadratic_class_number real") {
    CHECK(quadratic_class_number(12) == 1);
    CHECK(quadratic_class_number(28) == 1);
    CHECK(quadratic_class_number(5) == 1);
    CHECK(quadratic_class_number(8) == 1);
    CHECK(quadratic_class_number(44) == 1);  // Q(sqrt(11))
}

TEST_CASE("field_tag canonicalization") {
    field_tag a = field_tag::cyclotomic(3).compose(field_tag::pure_radical(3, 5));
    field_tag b = field_tag::pure_radical(3, 5).compose(field_tag::cyclotomic(3));
    CHECK(a == b);
    CHECK(a.str() == "cyc(3)*rad(3,5)");
    CHECK(field_tag::parse("rad(3,5)*cyc(3)") == a);
    CHECK_THROWS_AS(field_tag::parse("nonsense"), std::domain_error);
}

TEST_CASE("axiom ledger") {
    auto ledger = axiom_ledger::load(data_file("axioms.txt"));
    auto& e = ledger.lookup(field_tag::pure_radical(3, 5), "class_number");
    CHECK(e.value == "1");
    CHECK_FALSE(e.citation.empty());
    CHECK(ledger.lookup(field_tag::parse("cyc(3)*rad(3,5)"), "class_number_parity").value ==
          "odd");
    CHECK(ledger.lookup(field_tag::cyclotomic(4).compose(field_tag::quadratic(28)),
                        "class_number").value == "1");
    CHECK(ledger.lookup(field_tag::parse("cyc(3)*rad(3,5)"), "abs_discriminant").value ==
          "3^7*5^4");
    CHECK_THROWS_AS(ledger.lookup(field_tag::quadratic(40), "class_number"),
                    unknown_axiom_error);

    // oracle agrees with ledger on the quadratic entries
    for (long d : {-3, -7, 12, 28}) {
        long h = quadratic_class_number(d);
        CHECK(std::to_string(h) == ledger.lookup(field_tag::quadratic(d), "class_number").value);
    }
}

TEST_CASE("ledger rejects duplicates and malformed rows") {
    std::istringstream dup("quad(-3)|class_number|1|x\nquad(-3)|class_number|1|y\n");
    CHECK_THROWS(axiom_ledger::parse(dup));
    std::istringstream bad("quad(-3)|class_number\n");
    CHECK_THROWS(axiom_ledger::parse(bad));
}
