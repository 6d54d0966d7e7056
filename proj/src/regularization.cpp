#include "chenrecip/regularization.hpp"

#include "chenrecip/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace chenrecip {

namespace {

constexpr int kTaylorTerms = 40;
constexpr int kCauchyPoints = 128;
constexpr Complex kTwoPiI{0.0, 2.0 * std::numbers::pi};

NCSeries residue_letter_sum(const FormAssignment& forms, Complex pole, int degree)
{
    const int n = static_cast<int>(forms.size());
    NCSeries r(n, degree);
    for (int i = 0; i < n; ++i) {
        if (degree >= 1) {
            r.set({i}, forms[static_cast<std::size_t>(i)].residue_at(pole));
        }
    }
    return r;
}

double nearest_other_pole(const FormAssignment& forms, Complex pole, double search_radius)
{
    double d = search_radius;
    for (const auto& f : forms) {
        for (const Pole& p : f.poles_within(pole, search_radius)) {
            const double r = std::abs(p.point - pole);
            if (r > kPoleMergeTolerance * std::max(1.0, std::abs(pole))) {
                d = std::min(d, r);
            }
        }
    }
    return d;
}

// Taylor coefficients at Q of omega_i minus its polar part, as letter series.
std::vector<NCSeries> regular_part_taylor(const FormAssignment& forms, Complex pole, double radius, int degree)
{
    const int n = static_cast<int>(forms.size());
    std::vector<NCSeries> out(kTaylorTerms, NCSeries(n, degree));
    if (degree < 1) {
        return out;
    }
    std::vector<Complex> roots(kCauchyPoints);
    for (int k = 0; k < kCauchyPoints; ++k) {
        roots[static_cast<std::size_t>(k)] = std::polar(1.0, 2.0 * std::numbers::pi * k / kCauchyPoints);
    }
    for (int i = 0; i < n; ++i) {
        const MeromorphicForm& f = forms[static_cast<std::size_t>(i)];
        const Complex res = f.residue_at(pole);
        std::vector<Complex> samples(kCauchyPoints);
        for (int k = 0; k < kCauchyPoints; ++k) {
            const Complex y = radius * roots[static_cast<std::size_t>(k)];
            samples[static_cast<std::size_t>(k)] = f.coefficient(pole + y) - res / y;
        }
        double scale = 1.0;
        for (int m = 0; m < kTaylorTerms; ++m) {
            Complex c{};
            for (int k = 0; k < kCauchyPoints; ++k) {
                c += samples[static_cast<std::size_t>(k)] * std::conj(roots[static_cast<std::size_t>((k * m) % kCauchyPoints)]);
            }
            out[static_cast<std::size_t>(m)].set({i}, c / (kCauchyPoints * scale));
            scale *= radius;
        }
    }
    return out;
}

// Local solution exp(log(y) R) H(y), y = z - Q, with
// m H_m - (H_m R - R H_m) = sum_{j<m} H_j B_{m-1-j}.
NCSeries local_solution(const NCSeries& r, const std::vector<NCSeries>& b, Complex y)
{
    const int n = r.alphabet_size();
    const int degree = r.truncation();
    std::vector<NCSeries> h;
    h.reserve(b.size() + 1);
    h.push_back(NCSeries::unit(n, degree));
    NCSeries sum = h.front();
    Complex power = 1.0;
    for (std::size_t m = 1; m <= b.size(); ++m) {
        NCSeries rhs(n, degree);
        for (std::size_t j = 0; j < m; ++j) {
            rhs += h[j] * b[m - 1 - j];
        }
        const double inv = 1.0 / static_cast<double>(m);
        NCSeries term = rhs * inv;
        NCSeries hm = term;
        for (int s = 0; s < degree && !term.terms().empty(); ++s) {
            term = (term * r - r * term) * inv;
            hm += term;
        }
        power *= y;
        sum += hm * power;
        h.push_back(std::move(hm));
    }
    return exp_series(r * std::log(y)) * sum;
}

std::pair<Path, LineSegment> split_final_line(const Path& gamma)
{
    if (gamma.empty()) {
        throw InvalidInput("regularized_transport: empty path");
    }
    const auto* line = std::get_if<LineSegment>(&gamma.segments().back().shape());
    if (line == nullptr) {
        throw InvalidInput("regularized_transport: the final segment must be straight");
    }
    std::vector<PathSegment> prefix(gamma.segments().begin(), gamma.segments().end() - 1);
    return {Path(std::move(prefix)), *line};
}

Path append_line(const Path& prefix, Complex from, Complex to)
{
    if (std::abs(to - from) == 0.0) {
        return prefix;
    }
    if (prefix.empty()) {
        return line_path(from, to);
    }
    return compose_paths(prefix, line_path(from, to));
}

NCSeries transport_or_unit(const FormAssignment& forms, const Path& p, int degree, double tol)
{
    if (p.empty()) {
        return NCSeries::unit(static_cast<int>(forms.size()), degree);
    }
    return transport_series(forms, p, degree, tol).series;
}

}  // namespace

NCSeries residual_series(const FormAssignment& forms, Complex pole, int degree)
{
    return exp_series(residue_letter_sum(forms, pole, degree) * kTwoPiI);
}

RegularizedSeries regularized_transport(const FormAssignment& forms, const Path& gamma, int degree, double tol)
{
    if (forms.empty()) {
        throw InvalidInput("regularized_transport: empty form assignment");
    }
    const auto [prefix, last] = split_final_line(gamma);
    const Complex q = last.to;
    const double approach = std::abs(last.from - q);
    if (approach == 0.0) {
        throw InvalidInput("regularized_transport: degenerate final segment");
    }
    const double d = nearest_other_pole(forms, q, std::max(4.0 * approach, 1.0));
    const double r = std::min(d / 4.0, approach);
    const Complex dir = (last.from - q) / approach;
    const Complex x1 = q + r * dir;

    const NCSeries res = residue_letter_sum(forms, q, degree);
    const auto b = regular_part_taylor(forms, q, d / 2.0, degree);
    const NCSeries y = local_solution(res, b, x1 - q);

    const Path to_match = append_line(prefix, last.from, x1);
    const NCSeries f = transport_or_unit(forms, to_match, degree, tol);

    RegularizedSeries out{f * inverse(y), q, x1, d, 0.0};
    const NCSeries unit = NCSeries::unit(static_cast<int>(forms.size()), degree);
    out.inverse_defect = (out.series * reverse_antipode(out.series)).max_abs_difference(unit);
    return out;
}

RegularizedSeries regularized_transport(const FormAssignment& forms, Complex base, Complex pole, int degree, double tol)
{
    return regularized_transport(forms, line_path(base, pole), degree, tol);
}

NCSeries tame_symbol(const RegularizedSeries& reg, const FormAssignment& forms, int degree)
{
    const int n = static_cast<int>(forms.size());
    const NCSeries unit = NCSeries::unit(n, degree);
    const NCSeries e = residual_series(forms, reg.pole, degree);
    return unit + reg.series * (e - unit) * reverse_antipode(reg.series);
}

NCSeries tame_symbol(const FormAssignment& forms, Complex base, Complex pole, int degree, double tol)
{
    return tame_symbol(regularized_transport(forms, base, pole, degree, tol), forms, degree);
}

LadderFit ladder_regularization(const FormAssignment& original, Complex base_in, Complex pole_in, int degree,
                                double tol)
{
    // Work with the pole at the origin so that z - Q carries no rounding.
    FormAssignment forms;
    for (const auto& f : original) {
        forms.push_back(f.translated(pole_in));
    }
    const Complex base = base_in - pole_in;
    const Complex pole = 0.0;
    const int n = static_cast<int>(forms.size());
    const double length = std::abs(base - pole);
    const double d = std::min(nearest_other_pole(forms, pole, std::max(4.0 * length, 1.0)), length);
    const Complex dir = (base - pole) / length;

    std::vector<bool> pole_letter(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        pole_letter[static_cast<std::size_t>(i)] = forms[static_cast<std::size_t>(i)].residue_at(pole) != Complex{};
    }

    constexpr int kPowers = 4;   // eps^0 .. eps^3
    constexpr int kPoints = 40;  // at least twice the largest basis
    LadderFit out{NCSeries(n, degree), {}, 0.0};
    const double top = d / 64.0;
    std::vector<NCSeries> values;
    for (int j = 0; j < kPoints; ++j) {
        const double eps = top * std::pow(2.0, -0.5 * j);
        out.ladder.push_back(eps);
        values.push_back(transport_series(forms, line_path(base, pole + eps * dir), degree, tol).series);
    }
    for (const Word& w : words_up_to(n, degree)) {
        int logs = 0;
        for (int letter : w) {
            logs += pole_letter[static_cast<std::size_t>(letter)] ? 1 : 0;
        }
        const int cols = kPowers * (logs + 1);
        Eigen::MatrixXcd a(kPoints, cols);
        Eigen::VectorXcd rhs(kPoints);
        for (int j = 0; j < kPoints; ++j) {
            const double eps = out.ladder[static_cast<std::size_t>(j)];
            const Complex lambda = std::log(eps * dir);
            const double e = eps / d;
            for (int k = 0; k < kPowers; ++k) {
                for (int l = 0; l <= logs; ++l) {
                    a(j, k * (logs + 1) + l) = std::pow(e, k) * std::pow(lambda, l);
                }
            }
            rhs(j) = values[static_cast<std::size_t>(j)][w];
        }
        Eigen::VectorXd norms = a.colwise().norm();
        for (int c = 0; c < cols; ++c) {
            a.col(c) /= norms(c);
        }
        const Eigen::VectorXcd x = a.colPivHouseholderQr().solve(rhs);
        const double resid = (a * x - rhs).norm() / std::sqrt(static_cast<double>(kPoints));
        out.max_fit_residual = std::max(out.max_fit_residual, resid / std::max(1.0, rhs.cwiseAbs().maxCoeff()));
        out.series.set(w, x(0) / norms(0));
    }
    return out;
}

KeyholeReport keyhole_direct_check(const FormAssignment& forms, const KeyholeSpec& spec, int degree, double tol,
                                   int ladder_steps)
{
    const int n = static_cast<int>(forms.size());
    const NCSeries unit = NCSeries::unit(n, degree);
    const RegularizedSeries reg = regularized_transport(forms, spec.base, spec.pole, degree, tol);
    const NCSeries tame = tame_symbol(reg, forms, degree);
    const NCSeries e_minus_1 = residual_series(forms, spec.pole, degree) - unit;
    const Complex dir = (spec.base - spec.pole) / std::abs(spec.base - spec.pole);

    KeyholeReport report;
    double eps = spec.epsilon;
    for (int k = 0; k <= ladder_steps; ++k, eps /= 2.0) {
        const NCSeries direct = transport_series(forms, keyhole_loop({spec.base, spec.pole, eps}), degree, tol).series;
        const NCSeries approach =
            transport_series(forms, line_path(spec.base, spec.pole + eps * dir), degree, tol).series;
        const NCSeries assembled = unit + approach * e_minus_1 * inverse(approach);
        KeyholeDefect row{eps, tame.max_abs_difference(direct), assembled.max_abs_difference(direct)};
        report.max_regularized = std::max(report.max_regularized, row.regularized);
        report.rows.push_back(row);
    }
    constexpr double kNoiseFloor = 1e-10;
    report.decreasing = true;
    for (std::size_t k = 1; k < report.rows.size(); ++k) {
        const double prev = report.rows[k - 1].unregularized;
        const double cur = report.rows[k].unregularized;
        if (cur >= prev && cur > kNoiseFloor) {
            report.decreasing = false;
        }
    }
    return report;
}

}  // namespace chenrecip
