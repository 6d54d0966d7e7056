#include "doctest.h"

#include "chenrecip/errors.hpp"
#include "chenrecip/geometry.hpp"

#include <cmath>
#include <numbers>

using namespace chenrecip;

TEST_SUITE("geometry") {

TEST_CASE("line and arc segments")
{
    const PathSegment line(LineSegment{Complex(1, 1), Complex(3, -1)});
    CHECK(std::abs(line.point(0.5) - Complex(2, 0)) < 1e-15);
    CHECK(std::abs(line.derivative(0.3) - Complex(2, -2)) < 1e-15);
    CHECK(std::abs(line.point_from_end(0.25) - line.point(0.75)) < 1e-15);

    const PathSegment arc(ArcSegment{Complex(0, 0), 2.0, 0.0, std::numbers::pi});
    CHECK(std::abs(arc.point(0.5) - Complex(0, 2)) < 1e-14);
    CHECK(std::abs(arc.derivative(0.0) - Complex(0, 2.0 * std::numbers::pi)) < 1e-13);
}

TEST_CASE("point_from_end keeps full precision near the end of a line")
{
    const Complex q(0.1, 0.7);
    const PathSegment line(LineSegment{Complex(2, 3), q});
    const double u = 1e-14;
    const Complex p = line.point_from_end(u);
    // offset u (from - to) up to the spacing of doubles near q; point(1 - u)
    // would lose about 1% of it to the rounding of 1 - u
    CHECK(std::abs((p - q) - u * (Complex(2, 3) - q)) < 2e-16 * std::abs(q));
}

TEST_CASE("reversed segments and paths trace the same points backwards")
{
    const Path p({PathSegment(LineSegment{0.0, 1.0}), PathSegment(ArcSegment{0.0, 1.0, 0.0, 1.0})});
    const Path r = reverse_path(p);
    CHECK(std::abs(r.start() - p.end()) < 1e-15);
    CHECK(std::abs(r.end() - p.start()) < 1e-15);
    CHECK(std::abs(r.segments()[0].point(0.25) - p.segments()[1].point(0.75)) < 1e-14);
}

TEST_CASE("segments must chain")
{
    CHECK_THROWS_AS(Path({PathSegment(LineSegment{0.0, 1.0}), PathSegment(LineSegment{2.0, 3.0})}), InvalidInput);
    CHECK_THROWS_AS(compose_paths(line_path(0.0, 1.0), line_path(1.5, 2.0)), InvalidInput);
    CHECK_NOTHROW(compose_paths(line_path(0.0, 1.0), line_path(1.0, 2.0)));
}

TEST_CASE("sampled segment interpolates its knots")
{
    std::vector<Complex> pts;
    for (int k = 0; k <= 8; ++k) pts.push_back(std::polar(1.0, 0.2 * k));
    const SampledSegment s(pts);
    CHECK(std::abs(s.point(0.0) - pts.front()) < 1e-14);
    CHECK(std::abs(s.point(1.0) - pts.back()) < 1e-14);
    CHECK(std::abs(s.point(0.5) - pts[4]) < 1e-14);
    // between knots it stays close to the circle
    CHECK(std::abs(std::abs(s.point(0.53)) - 1.0) < 1e-3);
}

TEST_CASE("winding numbers")
{
    const Path c = circle_loop(Complex(1, 1), 0.5, 0.3);
    CHECK(c.is_closed());
    CHECK(winding_number(c, Complex(1, 1)) == 1);
    CHECK(winding_number(c, Complex(3, 1)) == 0);
    CHECK(winding_number(reverse_path(c), Complex(1.2, 0.9)) == -1);
    CHECK(winding_number(compose_paths(c, c), Complex(1, 1)) == 2);
    CHECK_THROWS_AS(winding_number(c, Complex(1.5, 1.0)), PoleProximity);
    CHECK_THROWS_AS(winding_number(line_path(0.0, 1.0), 3.0), InvalidInput);
}

TEST_CASE("keyhole loop encloses only its pole")
{
    const KeyholeSpec spec{Complex(0, 0), Complex(1, 1), 0.1};
    const Path k = keyhole_loop(spec);
    CHECK(k.is_closed());
    CHECK(std::abs(k.start()) < 1e-15);
    CHECK(winding_number(k, Complex(1, 1)) == 1);
    CHECK(winding_number(k, Complex(0.5, 0.7)) == 0);
    CHECK(approximate_distance(k, Complex(1, 1)) == doctest::Approx(0.1).epsilon(1e-6));
    CHECK_THROWS_AS(keyhole_loop({0.0, 1.0, 2.0}), InvalidInput);
}

}
