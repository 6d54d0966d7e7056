#include "chenrecip/geometry.hpp"

#include "chenrecip/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace chenrecip {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

SampledSegment::SampledSegment(std::vector<Complex> points) : points_(std::move(points))
{
    const std::size_t k = points_.size();
    if (k < 2) {
        throw InvalidInput("sampled segment needs at least two points");
    }
    second_.assign(k, Complex{});
    if (k == 2) {
        return;
    }
    // Natural spline on uniform knots with spacing h: tridiagonal system
    // M_{j-1} + 4 M_j + M_{j+1} = 6 (y_{j+1} - 2 y_j + y_{j-1}) / h^2.
    const double h = 1.0 / static_cast<double>(k - 1);
    const std::size_t m = k - 2;
    std::vector<Complex> rhs(m);
    for (std::size_t j = 0; j < m; ++j) {
        rhs[j] = 6.0 * (points_[j + 2] - 2.0 * points_[j + 1] + points_[j]) / (h * h);
    }
    std::vector<double> diag(m, 4.0);
    for (std::size_t j = 1; j < m; ++j) {
        const double f = 1.0 / diag[j - 1];
        diag[j] -= f;
        rhs[j] -= f * rhs[j - 1];
    }
    second_[m] = rhs[m - 1] / diag[m - 1];
    for (std::size_t j = m - 1; j-- > 0;) {
        second_[j + 1] = (rhs[j] - second_[j + 2]) / diag[j];
    }
}

Complex SampledSegment::point(double t) const
{
    const std::size_t k = points_.size();
    const double h = 1.0 / static_cast<double>(k - 1);
    const std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(std::max(t, 0.0) / h), k - 2);
    const double a = (static_cast<double>(j + 1) * h - t) / h;
    const double b = 1.0 - a;
    return a * points_[j] + b * points_[j + 1] +
           ((a * a * a - a) * second_[j] + (b * b * b - b) * second_[j + 1]) * (h * h) / 6.0;
}

Complex SampledSegment::derivative(double t) const
{
    const std::size_t k = points_.size();
    const double h = 1.0 / static_cast<double>(k - 1);
    const std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(std::max(t, 0.0) / h), k - 2);
    const double a = (static_cast<double>(j + 1) * h - t) / h;
    const double b = 1.0 - a;
    return (points_[j + 1] - points_[j]) / h +
           (-(3.0 * a * a - 1.0) * second_[j] + (3.0 * b * b - 1.0) * second_[j + 1]) * h / 6.0;
}

Complex PathSegment::point(double t) const
{
    return std::visit(Overloaded{
                          [t](const LineSegment& s) { return s.from + t * (s.to - s.from); },
                          [t](const ArcSegment& s) {
                              const double phi = s.start_angle + t * (s.end_angle - s.start_angle);
                              return s.center + s.radius * std::exp(kI * phi);
                          },
                          [t](const SampledSegment& s) { return s.point(t); },
                      },
                      shape_);
}

Complex PathSegment::point_from_end(double u) const
{
    if (const auto* s = std::get_if<LineSegment>(&shape_)) {
        return s->to - u * (s->to - s->from);
    }
    return point(1.0 - u);
}

Complex PathSegment::derivative(double t) const
{
    return std::visit(Overloaded{
                          [](const LineSegment& s) { return s.to - s.from; },
                          [t](const ArcSegment& s) {
                              const double span = s.end_angle - s.start_angle;
                              const double phi = s.start_angle + t * span;
                              return kI * span * s.radius * std::exp(kI * phi);
                          },
                          [t](const SampledSegment& s) { return s.derivative(t); },
                      },
                      shape_);
}

PathSegment PathSegment::reversed() const
{
    return std::visit(Overloaded{
                          [](const LineSegment& s) { return PathSegment(LineSegment{s.to, s.from}); },
                          [](const ArcSegment& s) {
                              return PathSegment(ArcSegment{s.center, s.radius, s.end_angle, s.start_angle});
                          },
                          [](const SampledSegment& s) {
                              std::vector<Complex> pts(s.points().rbegin(), s.points().rend());
                              return PathSegment(SampledSegment(std::move(pts)));
                          },
                      },
                      shape_);
}

bool endpoints_match(Complex a, Complex b)
{
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= kEndpointTolerance * scale;
}

Path::Path(std::vector<PathSegment> segments) : segments_(std::move(segments))
{
    for (std::size_t i = 1; i < segments_.size(); ++i) {
        if (!endpoints_match(segments_[i - 1].end(), segments_[i].start())) {
            throw InvalidInput("path segments do not chain: segment " + std::to_string(i) +
                               " starts away from the previous end");
        }
    }
}

Complex Path::start() const
{
    if (segments_.empty()) {
        throw InvalidInput("empty path has no start");
    }
    return segments_.front().start();
}

Complex Path::end() const
{
    if (segments_.empty()) {
        throw InvalidInput("empty path has no end");
    }
    return segments_.back().end();
}

bool Path::is_closed() const
{
    return !segments_.empty() && endpoints_match(start(), end());
}

Path line_path(Complex from, Complex to)
{
    return Path({PathSegment(LineSegment{from, to})});
}

Path compose_paths(const Path& first, const Path& second)
{
    if (first.empty()) {
        return second;
    }
    if (second.empty()) {
        return first;
    }
    if (!endpoints_match(first.end(), second.start())) {
        throw InvalidInput("compose_paths: end of first path does not match start of second");
    }
    std::vector<PathSegment> segs = first.segments();
    segs.insert(segs.end(), second.segments().begin(), second.segments().end());
    return Path(std::move(segs));
}

Path reverse_path(const Path& p)
{
    std::vector<PathSegment> segs;
    segs.reserve(p.segments().size());
    for (auto it = p.segments().rbegin(); it != p.segments().rend(); ++it) {
        segs.push_back(it->reversed());
    }
    return Path(std::move(segs));
}

Path circle_loop(Complex center, double radius, double start_angle)
{
    if (!(radius > 0.0)) {
        throw InvalidInput("circle_loop: radius must be positive");
    }
    return Path({PathSegment(ArcSegment{center, radius, start_angle, start_angle + kTwoPi})});
}

Path keyhole_loop(const KeyholeSpec& spec)
{
    const double dist = std::abs(spec.base - spec.pole);
    if (!(spec.epsilon > 0.0) || spec.epsilon >= dist) {
        throw InvalidInput("keyhole_loop: epsilon must lie in (0, |P - Q|)");
    }
    const Complex dir = (spec.base - spec.pole) / dist;
    const Complex touch = spec.pole + spec.epsilon * dir;
    const double angle = std::arg(dir);
    return Path({PathSegment(LineSegment{spec.base, touch}),
                 PathSegment(ArcSegment{spec.pole, spec.epsilon, angle, angle + kTwoPi}),
                 PathSegment(LineSegment{touch, spec.base})});
}

namespace {

// Accumulates arg(p(t1) - z0) - arg(p(t0) - z0) with subdivision until each
// chord is short compared with the distance to z0.
double angle_sweep(const PathSegment& seg, Complex z0, double t0, double t1, Complex p0, Complex p1,
                   double min_distance, int depth)
{
    const double d0 = std::abs(p0 - z0);
    const double d1 = std::abs(p1 - z0);
    if (d0 < min_distance || d1 < min_distance) {
        throw PoleProximity("winding_number: path passes too close to the point");
    }
    if (depth > 60) {
        throw ConvergenceFailure("winding_number: subdivision limit reached");
    }
    const double tm = 0.5 * (t0 + t1);
    const Complex pm = seg.point(tm);
    const bool short_chord = std::abs(p1 - p0) < 0.25 * std::min(d0, d1) &&
                             std::abs(pm - 0.5 * (p0 + p1)) < 0.25 * std::min(d0, d1);
    if (short_chord && depth >= 3) {
        return std::arg((p1 - z0) / (p0 - z0));
    }
    return angle_sweep(seg, z0, t0, tm, p0, pm, min_distance, depth + 1) +
           angle_sweep(seg, z0, tm, t1, pm, p1, min_distance, depth + 1);
}

}  // namespace

int winding_number(const Path& p, Complex z0, double min_distance)
{
    if (!p.is_closed()) {
        throw InvalidInput("winding_number: path is not closed");
    }
    double total = 0.0;
    for (const auto& seg : p.segments()) {
        total += angle_sweep(seg, z0, 0.0, 1.0, seg.start(), seg.end(), min_distance, 0);
    }
    return static_cast<int>(std::lround(total / kTwoPi));
}

double approximate_distance(const Path& p, Complex z0)
{
    double best = std::numeric_limits<double>::infinity();
    for (const auto& seg : p.segments()) {
        constexpr int kSamples = 256;
        for (int j = 0; j <= kSamples; ++j) {
            best = std::min(best, std::abs(seg.point(static_cast<double>(j) / kSamples) - z0));
        }
        // A line segment's closest point is available exactly.
        if (const auto* line = std::get_if<LineSegment>(&seg.shape())) {
            const Complex d = line->to - line->from;
            const double len2 = std::norm(d);
            if (len2 > 0.0) {
                const double t = std::clamp(std::real((z0 - line->from) * std::conj(d)) / len2, 0.0, 1.0);
                best = std::min(best, std::abs(line->from + t * d - z0));
            }
        }
    }
    return best;
}

}  // namespace chenrecip
