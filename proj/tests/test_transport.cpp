#include "doctest.h"

#include "chenrecip/errors.hpp"
#include "chenrecip/transport.hpp"

#include <numbers>
#include <random>

using namespace chenrecip;

namespace {

const Complex kTwoPiI(0.0, 2.0 * std::numbers::pi);

MeromorphicForm rational(std::vector<Complex> num, std::vector<Complex> den)
{
    return MeromorphicForm::rational(Polynomial(std::move(num)), Polynomial(std::move(den)));
}

// 1/(z-a) - 1/(z-b)
MeromorphicForm third_kind(Complex a, Complex b)
{
    return rational({a - b}, {a * b, -(a + b), 1.0});
}

}  // namespace

TEST_SUITE("transport") {

TEST_CASE("loop around the pole of dz/z gives (2 pi i)^r / r!")
{
    const auto dzz = rational({1.0}, {0.0, 1.0});
    const auto res = transport_series({dzz}, circle_loop(0.0, 0.3, 0.4), 4);
    Complex expected(1.0);
    for (int r = 0; r <= 4; ++r) {
        if (r > 0) expected *= kTwoPiI / static_cast<double>(r);
        CHECK(std::abs(res.series[Word(r, 0)] - expected) < 1e-10);
    }
}

TEST_CASE("small words in closed form")
{
    const auto zdz = rational({0.0, 1.0}, {1.0});
    const auto dz = rational({1.0}, {1.0});
    const Path p = line_path(0.0, 1.0);
    // int_0^1 z1 (1 - z1) dz1
    CHECK(std::abs(iterated_integral({zdz, dz}, p) - 1.0 / 6.0) < 1e-14);
    CHECK(std::abs(iterated_integral({dz, zdz}, p) - 1.0 / 3.0) < 1e-14);
    CHECK(std::abs(simplex_oracle({zdz, dz}, p).value - 1.0 / 6.0) < 1e-13);
    // dz o dz o dz along i -> 2i
    CHECK(std::abs(iterated_integral({dz, dz, dz}, line_path(Complex(0, 1), Complex(0, 2))) -
                   Complex(0, -1) / 6.0) < 1e-14);
}

TEST_CASE("agreement with the simplex quadrature on random words")
{
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::vector<MeromorphicForm> pool{
        third_kind(Complex(0.0, 1.5), Complex(2.0, -1.0)), rational({1.0, Complex(0, 1)}, {Complex(3, 0), 0.0, 1.0}),
        rational({0.0, 1.0}, {1.0}), rational({1.0}, {Complex(-1.0, -2.0), 1.0})};
    const Path path = compose_paths(line_path(Complex(-0.5, 0.2), Complex(0.4, -0.3)),
                                    line_path(Complex(0.4, -0.3), Complex(0.9, 0.5)));
    for (int trial = 0; trial < 6; ++trial) {
        std::vector<MeromorphicForm> word;
        const int len = 1 + trial % 3;
        for (int k = 0; k < len; ++k) word.push_back(pool[static_cast<std::size_t>(rng() % pool.size())]);
        const Complex a = iterated_integral(word, path);
        const auto b = simplex_oracle(word, path);
        CHECK(std::abs(a - b.value) <= 1e-9 * std::max(1.0, std::abs(b.value)));
    }
}

TEST_CASE("composition of paths multiplies series")
{
    const FormAssignment forms{third_kind(0.0, 1.0), rational({1.0}, {Complex(0.0, -2.0), 1.0})};
    const Path a = line_path(Complex(0.5, 0.5), Complex(-0.7, 0.3));
    const Path b = Path({PathSegment(ArcSegment{Complex(0, 0), std::abs(Complex(-0.7, 0.3)), std::arg(Complex(-0.7, 0.3)),
                                                std::arg(Complex(-0.7, 0.3)) + 1.2})});
    const auto fa = transport_series(forms, a, 3).series;
    const auto fb = transport_series(forms, b, 3).series;
    const auto fab = transport_series(forms, compose_paths(a, b), 3).series;
    CHECK(fab.max_abs_difference(fa * fb) < 1e-12);
}

TEST_CASE("reversed path gives the inverse, which is the reverse antipode")
{
    const FormAssignment forms{third_kind(Complex(0, 1), Complex(1, 0)), rational({0.0, 1.0}, {1.0})};
    const Path p = line_path(Complex(-1, -1), Complex(0.7, 2.0));
    const auto f = transport_series(forms, p, 3).series;
    const auto r = transport_series(forms, reverse_path(p), 3).series;
    CHECK(r.max_abs_difference(inverse(f)) < 1e-12);
    CHECK(r.max_abs_difference(reverse_antipode(f)) < 1e-12);
}

TEST_CASE("homotopic paths give the same series")
{
    const FormAssignment forms{third_kind(Complex(2, 2), Complex(-2, 1)), rational({1.0}, {Complex(0, 3), 1.0})};
    const Complex s(-1.0, 0.0), e(1.0, 0.0);
    const auto straight = transport_series(forms, line_path(s, e), 3).series;
    std::vector<Complex> pts;
    for (int k = 0; k <= 16; ++k) {
        const double t = k / 16.0;
        pts.push_back(s + t * (e - s) + Complex(0.0, 0.6 * std::sin(std::numbers::pi * t)));
    }
    const auto bent = transport_series(forms, Path({PathSegment(SampledSegment(pts))}), 3).series;
    CHECK(straight.max_abs_difference(bent) < 1e-11);
}

TEST_CASE("a loop around a pole is not homotopic to a point")
{
    const FormAssignment forms{third_kind(0.0, 3.0)};
    const auto around = transport_series(forms, circle_loop(0.0, 1.0, 0.0), 2).series;
    CHECK(std::abs(around[{0}] - kTwoPiI) < 1e-12);
    const auto away = transport_series(forms, circle_loop(Complex(1.5, 0.0), 0.5, 0.0), 2).series;
    CHECK(away.max_abs_difference(NCSeries::unit(1, 2)) < 1e-12);
}

TEST_CASE("transported series are grouplike")
{
    const FormAssignment forms{third_kind(0.0, 1.0), rational({0.0, 0.0, 1.0}, {1.0}), rational({1.0}, {2.0, 1.0})};
    const auto f = transport_series(forms, line_path(Complex(0.3, 0.4), Complex(-0.8, 1.6)), 4).series;
    CHECK(grouplike_defect(f) < 1e-11);
}

TEST_CASE("word subsets match the full series")
{
    const FormAssignment forms{third_kind(0.0, 1.0), rational({1.0}, {1.0})};
    const Path p = line_path(Complex(0.5, 0.5), Complex(2.0, -0.4));
    const auto full = transport_series(forms, p, 3).series;
    const auto part = transport_words(forms, p, {{0, 1, 1}, {1, 0}});
    CHECK(std::abs(part.at({0, 1, 1}) - full[{0, 1, 1}]) < 1e-13);
    CHECK(std::abs(part.at({1, 0}) - full[{1, 0}]) < 1e-13);
}

TEST_CASE("paths through poles are refused")
{
    const FormAssignment forms{rational({1.0}, {0.0, 1.0})};
    CHECK_THROWS_AS(transport_series(forms, line_path(-1.0, 1.0), 2), PoleProximity);
}

}
