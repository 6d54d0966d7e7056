#include "doctest.h"

#include "chenrecip/errors.hpp"
#include "chenrecip/ncseries.hpp"

#include <random>

using namespace chenrecip;

namespace {

NCSeries random_series(int n, int degree, std::mt19937& rng, Complex constant)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    NCSeries s(n, degree);
    for (const Word& w : words_up_to(n, degree)) {
        s.set(w, w.empty() ? constant : Complex(u(rng), u(rng)));
    }
    return s;
}

// sum of c_i A_i, which exponentiates to a grouplike series
NCSeries random_lie_element(int n, int degree, std::mt19937& rng)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    NCSeries s(n, degree);
    for (int i = 0; i < n; ++i) s.set({i}, Complex(u(rng), u(rng)));
    // one bracket term keeps it non-commutative
    if (n >= 2 && degree >= 2) {
        const Complex c(u(rng), u(rng));
        s.add({0, 1}, c);
        s.add({1, 0}, -c);
    }
    return s;
}

}  // namespace

TEST_SUITE("ncseries") {

TEST_CASE("words are ordered by length then lexicographically")
{
    const auto w = words_up_to(2, 2);
    REQUIRE(w.size() == 7);
    CHECK(w[0] == Word{});
    CHECK(w[1] == Word{0});
    CHECK(w[3] == Word{0, 0});
    CHECK(w[6] == Word{1, 1});
    CHECK(format_word({0, 2, 1}) == "A1A3A2");
}

TEST_CASE("concatenation product on letters")
{
    const auto a = NCSeries::letter(2, 3, 0);
    const auto b = NCSeries::letter(2, 3, 1, 2.0);
    const auto ab = (NCSeries::unit(2, 3) + a) * (NCSeries::unit(2, 3) + b);
    CHECK(ab[{0, 1}] == Complex(2.0));
    CHECK(ab[{1, 0}] == Complex(0.0));
    CHECK(ab[{0}] == Complex(1.0));
    // products past the truncation are discarded
    const auto high = a * a * a * a;
    CHECK(high.terms().empty());
}

TEST_CASE("product is associative and distributes (randomized)")
{
    std::mt19937 rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        const auto a = random_series(3, 3, rng, 0.4);
        const auto b = random_series(3, 3, rng, -1.2);
        const auto c = random_series(3, 3, rng, 0.9);
        CHECK(((a * b) * c).max_abs_difference(a * (b * c)) < 1e-13);
        CHECK((a * (b + c)).max_abs_difference(a * b + a * c) < 1e-13);
    }
}

TEST_CASE("inverse needs constant term one and is two-sided")
{
    std::mt19937 rng(11);
    const auto a = random_series(2, 4, rng, 1.0);
    const auto ai = inverse(a);
    const auto unit = NCSeries::unit(2, 4);
    CHECK((a * ai).max_abs_difference(unit) < 1e-13);
    CHECK((ai * a).max_abs_difference(unit) < 1e-13);
    CHECK_THROWS_AS(inverse(random_series(2, 2, rng, 2.0)), InvalidInput);
}

TEST_CASE("exp of a Lie element is grouplike and its inverse is the reverse antipode")
{
    std::mt19937 rng(3);
    for (int trial = 0; trial < 4; ++trial) {
        const auto g = exp_series(random_lie_element(3, 4, rng));
        CHECK(grouplike_defect(g) < 1e-13);
        CHECK(inverse(g).max_abs_difference(reverse_antipode(g)) < 1e-13);
    }
}

TEST_CASE("exp of a single letter has coefficients c^r / r!")
{
    const auto e = exp_series(NCSeries::letter(1, 5, 0, Complex(0.0, 2.0)));
    Complex expected(1.0);
    for (int r = 1; r <= 5; ++r) {
        expected *= Complex(0.0, 2.0) / static_cast<double>(r);
        CHECK(std::abs(e[Word(r, 0)] - expected) < 1e-14);
    }
}

TEST_CASE("shuffle words count binomially")
{
    CHECK(shuffle_words({0}, {1}).size() == 2);
    CHECK(shuffle_words({0, 1}, {2, 3}).size() == 6);
    CHECK(shuffle_words({}, {1, 2}).size() == 1);
    const auto s = shuffle_words({0}, {0});
    REQUIRE(s.size() == 2);
    CHECK(s[0] == Word{0, 0});
}

TEST_CASE("a non-grouplike series has a visible shuffle defect")
{
    NCSeries s = NCSeries::unit(1, 2);
    s.set({0}, 1.0);
    s.set({0, 0}, 1.0);  // grouplike needs 1/2
    CHECK(grouplike_defect(s) == doctest::Approx(1.0));
}

TEST_CASE("reverse antipode flips words with a sign")
{
    NCSeries s(3, 3);
    s.set({0, 1, 2}, 5.0);
    s.set({1}, 2.0);
    const auto r = reverse_antipode(s);
    CHECK(r[{2, 1, 0}] == Complex(-5.0));
    CHECK(r[{1}] == Complex(-2.0));
}

TEST_CASE("mismatched alphabets are rejected")
{
    CHECK_THROWS_AS(NCSeries(2, 2) * NCSeries(3, 2), InvalidInput);
    NCSeries s(2, 2);
    CHECK_THROWS_AS(s.set({0, 0, 0}, 1.0), InvalidInput);
    CHECK_THROWS_AS(s.set({5}, 1.0), InvalidInput);
}

}
