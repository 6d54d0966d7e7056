#include "doctest.h"

#include "chenrecip/errors.hpp"
#include "chenrecip/reciprocity.hpp"

#include <random>

using namespace chenrecip;

namespace {

MeromorphicForm rational(std::vector<Complex> num, std::vector<Complex> den)
{
    return MeromorphicForm::rational(Polynomial(std::move(num)), Polynomial(std::move(den)));
}

MeromorphicForm third_kind(Complex a, Complex b)
{
    return rational({a - b}, {a * b, -(a + b), 1.0});
}

NCSeries random_grouplike(int n, int degree, std::mt19937& rng)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    NCSeries lie(n, degree);
    for (int i = 0; i < n; ++i) lie.set({i}, Complex(u(rng), u(rng)));
    for (int i = 0; i + 1 < n; ++i) {
        const Complex c(u(rng), u(rng));
        lie.add({i, i + 1}, c);
        lie.add({i + 1, i}, -c);
    }
    return exp_series(lie);
}

SurfaceScene torus_scene(Complex tau, std::vector<std::pair<Complex, Complex>> poles, Complex base)
{
    SurfaceScene s;
    s.genus = 1;
    s.lattice = Lattice(tau);
    s.base = base;
    for (const auto& [a, b] : poles) s.forms.push_back(MeromorphicForm::elliptic(*s.lattice, a, b));
    return s;
}

}  // namespace

TEST_SUITE("reciprocity") {

TEST_CASE("commutator series has no linear part, exactly")
{
    std::mt19937 rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        const auto a = random_grouplike(3, 3, rng);
        const auto b = random_grouplike(3, 3, rng);
        const auto c = commutator_series(a, b);
        for (int i = 0; i < 3; ++i) CHECK(c[{i}] == Complex(0.0));
        CHECK(c.max_abs_difference(a * b * inverse(a) * inverse(b)) < 1e-12);
    }
}

TEST_CASE("cycle part of the triple law is the ABC coefficient of the commutator")
{
    std::mt19937 rng(8);
    for (int trial = 0; trial < 5; ++trial) {
        const auto a = random_grouplike(3, 3, rng);
        const auto b = random_grouplike(3, 3, rng);
        CHECK(std::abs(triple_cycle_terms(a, b) - commutator_series(a, b)[{0, 1, 2}]) < 1e-12);
    }
}

TEST_CASE("residues sum to zero")
{
    std::mt19937 rng(12);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 6; ++trial) {
        std::vector<Complex> den{1.0};
        for (int k = 0; k < 3; ++k) {
            const Complex r(u(rng), u(rng));
            std::vector<Complex> next(den.size() + 1, Complex{});
            for (std::size_t i = 0; i < den.size(); ++i) {
                next[i + 1] += den[i];
                next[i] -= r * den[i];
            }
            den = next;
        }
        SurfaceScene s;
        s.forms = {rational({Complex(u(rng), u(rng)), Complex(u(rng), u(rng)), 1.0}, den)};
        s.base = Complex(7.0, 7.0);
        CHECK(residue_linear_check(s, 1e-12).max_defect < 1e-12);
    }
}

TEST_CASE("global law on the sphere, with a pole at infinity")
{
    SurfaceScene s;
    s.forms = {rational({1.0, 2.0}, {-2.0, -1.0, 1.0}), rational({1.0}, {0.0, 1.0})};
    s.base = Complex(0.3, 1.1);
    const auto r = global_reciprocity(s, 3, 1e-6);
    CHECK(r.passed);
    CHECK(r.max_by_degree[3] < 1e-10);
}

TEST_CASE("global law on a torus")
{
    const auto s = torus_scene(Complex(0, 1), {{Complex(0.2, 0.3), Complex(0.6, 0.2)}, {Complex(0.3, 0.7), Complex(0.75, 0.6)}},
                               Complex(-0.05, -0.07));
    const auto r = global_reciprocity(s, 3, 1e-4);
    CHECK(r.passed);
    CHECK(r.max_by_degree[2] < 1e-10);
}

TEST_CASE("bilinear law")
{
    SurfaceScene s;
    s.forms = {third_kind(0.0, 3.0), third_kind(1.0, 2.0)};
    s.base = Complex(1.5, 1.3);
    const auto g0 = riemann_bilinear_check(s, 1e-6);
    CHECK(g0.passed);
    CHECK(g0.defect < 1e-10);

    const auto t = torus_scene(Complex(0, 1), {{Complex(0.2, 0.3), Complex(0.6, 0.2)}, {Complex(0.3, 0.7), Complex(0.75, 0.6)}},
                               Complex(-0.05, -0.07));
    const auto g1 = riemann_bilinear_check(t, 1e-5);
    CHECK(g1.passed);
    // periods of zeta(z - a) - zeta(z - b) are proportional to (eta_1, eta_tau),
    // so the cycle part cancels and the residue part carries the law
    CHECK(std::abs(g1.cycle_terms) < 1e-12);
    CHECK(std::abs(g1.residue_terms) > 1.0);
}

TEST_CASE("triple law")
{
    SurfaceScene s;
    s.forms = {third_kind(0.0, 5.0), third_kind(1.0, 6.0), third_kind(2.0, 7.0)};
    s.base = Complex(3.5, 2.0);
    const auto g0 = triple_check(s, 1e-6);
    CHECK(g0.passed);
    CHECK_FALSE(g0.contiguous);  // interleaved collinear poles need the ordering correction

    const auto t = torus_scene(Complex(0.3, 1.1),
                               {{Complex(0.2, 0.3), Complex(0.6, 0.2)},
                                {Complex(0.35, 0.75), Complex(0.8, 0.6)},
                                {Complex(0.1, 0.55), Complex(0.55, 0.9)}},
                               Complex(-0.02, -0.03));
    CHECK(triple_check(t, 1e-4).passed);
}

TEST_CASE("grouped layouts keep each form's poles together")
{
    SurfaceScene s;
    s.forms = {third_kind(Complex(2, 0), Complex(2, 1)), third_kind(Complex(-2, 0), Complex(-2, -1))};
    s.base = 0.0;
    const auto layout = make_layout(s, {{0}, {1}});
    REQUIRE(layout.entries.size() == 4);
    auto owner = [&](const KeyholeEntry& e) { return std::abs(e.residues[0]) > 0.5 ? 0 : 1; };
    int changes = 0;
    for (std::size_t i = 0; i < 4; ++i) changes += owner(layout.entries[i]) != owner(layout.entries[(i + 1) % 4]);
    CHECK(changes == 2);
}

TEST_CASE("layout preconditions")
{
    SurfaceScene s;
    s.forms = {third_kind(1.0, 2.0)};  // both poles on the ray from 0 along the real axis
    s.base = 0.0;
    CHECK_THROWS_AS(make_layout(s), PreconditionError);
    s.base = Complex(1.0, 1e-12);
    CHECK_THROWS_AS(make_layout(s), Error);

    SurfaceScene shared;
    shared.forms = {third_kind(0.0, 1.0), third_kind(0.0, 2.0)};
    shared.base = Complex(0.5, 1.0);
    CHECK_THROWS_AS(riemann_bilinear_check(shared, 1e-6), PreconditionError);
}

TEST_CASE("Weil reciprocity")
{
    // f = z, g = (z - 1)/(z + 1): g(0)^{-1} * f(1) f(-1)^{-1} * (leading ratio of g)^{...} = 1
    const auto worked = weil_check({Polynomial({0.0, 1.0}), Polynomial({1.0})},
                                   {Polynomial({-1.0, 1.0}), Polynomial({1.0, 1.0})}, 1e-10);
    CHECK(worked.passed);
    CHECK(worked.defect < 1e-14);
    CHECK(worked.cross_defect < 1e-10);

    CHECK_THROWS_AS(weil_check({Polynomial({0.0, 1.0}), Polynomial({1.0})},
                               {Polynomial({0.0, 1.0}), Polynomial({2.0, 1.0})}, 1e-10),
                    PreconditionError);
}

}
