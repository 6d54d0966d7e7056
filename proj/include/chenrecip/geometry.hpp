#pragma once

#include "chenrecip/ncseries.hpp"

#include <variant>
#include <vector>

namespace chenrecip {

/// Straight segment from `from` to `to`.
struct LineSegment {
    Complex from;
    Complex to;
};

/// Circular arc z(t) = center + radius * exp(i (start + t (end - start))).
struct ArcSegment {
    Complex center;
    double radius;
    double start_angle;
    double end_angle;
};

/// Curve through sample points, interpolated by a natural cubic spline in a
/// uniform parameter. Coefficients are precomputed on construction.
class SampledSegment {
public:
    explicit SampledSegment(std::vector<Complex> points);

    Complex point(double t) const;
    Complex derivative(double t) const;
    const std::vector<Complex>& points() const { return points_; }

private:
    std::vector<Complex> points_;
    std::vector<Complex> second_;  // spline second derivatives at knots
};

/// One smooth piece p: [0,1] -> C.
class PathSegment {
public:
    PathSegment(LineSegment s) : shape_(s) {}
    PathSegment(ArcSegment s) : shape_(s) {}
    PathSegment(SampledSegment s) : shape_(std::move(s)) {}

    Complex point(double t) const;
    /// point(1 - u), without the cancellation in 1 - u for small u.
    Complex point_from_end(double u) const;
    Complex derivative(double t) const;
    Complex start() const { return point(0.0); }
    Complex end() const { return point(1.0); }

    PathSegment reversed() const;

    const std::variant<LineSegment, ArcSegment, SampledSegment>& shape() const { return shape_; }

private:
    std::variant<LineSegment, ArcSegment, SampledSegment> shape_;
};

/// Piecewise-smooth path: chained segments.
class Path {
public:
    Path() = default;
    explicit Path(std::vector<PathSegment> segments);

    const std::vector<PathSegment>& segments() const { return segments_; }
    bool empty() const { return segments_.empty(); }
    Complex start() const;
    Complex end() const;
    bool is_closed() const;

private:
    std::vector<PathSegment> segments_;
};

/// Relative tolerance used when chaining endpoints.
inline constexpr double kEndpointTolerance = 1e-12;

bool endpoints_match(Complex a, Complex b);

Path line_path(Complex from, Complex to);
Path compose_paths(const Path& first, const Path& second);
Path reverse_path(const Path& p);

/// Counterclockwise circle of the given radius starting at center + radius e^{i start_angle}.
Path circle_loop(Complex center, double radius, double start_angle);

struct KeyholeSpec {
    Complex base;
    Complex pole;
    double epsilon;
};

/// Straight approach from the base toward the pole, stopping at distance
/// epsilon, a full counterclockwise circle of radius epsilon, and the return.
Path keyhole_loop(const KeyholeSpec& spec);

/// Winding number of a closed path about z0. Throws PoleProximity when the
/// path passes within `min_distance` of z0.
int winding_number(const Path& p, Complex z0, double min_distance = 1e-12);

/// Minimum distance from sampled points of the path to z0 (sampling is dense
/// enough for the validations done here, not a certified bound).
double approximate_distance(const Path& p, Complex z0);

}  // namespace chenrecip
