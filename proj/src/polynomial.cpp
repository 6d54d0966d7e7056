#include "chenrecip/polynomial.hpp"

#include "chenrecip/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace chenrecip {

Polynomial::Polynomial(std::vector<Complex> coefficients) : coeffs_(std::move(coefficients))
{
    while (!coeffs_.empty() && coeffs_.back() == Complex{}) {
        coeffs_.pop_back();
    }
}

Complex Polynomial::leading() const
{
    return coeffs_.empty() ? Complex{} : coeffs_.back();
}

Complex Polynomial::operator()(Complex z) const
{
    Complex acc{};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * z + *it;
    }
    return acc;
}

Polynomial Polynomial::derivative() const
{
    std::vector<Complex> d;
    for (std::size_t k = 1; k < coeffs_.size(); ++k) {
        d.push_back(static_cast<double>(k) * coeffs_[k]);
    }
    return Polynomial(std::move(d));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b)
{
    if (a.is_zero() || b.is_zero()) {
        return Polynomial();
    }
    std::vector<Complex> out(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
            out[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
    }
    return Polynomial(std::move(out));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b)
{
    std::vector<Complex> out(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        out[i] += a.coeffs_[i];
    }
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i) {
        out[i] -= b.coeffs_[i];
    }
    return Polynomial(std::move(out));
}

namespace {

Complex newton_polish(const Polynomial& p, Complex z)
{
    const Polynomial dp = p.derivative();
    for (int iter = 0; iter < 50; ++iter) {
        const Complex d = dp(z);
        if (d == Complex{}) {
            break;
        }
        const Complex step = p(z) / d;
        z -= step;
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(z))) {
            break;
        }
    }
    return z;
}

}  // namespace

std::vector<Root> find_roots(const Polynomial& p)
{
    if (p.is_zero()) {
        throw InvalidInput("find_roots: zero polynomial");
    }
    const int deg = p.degree();
    if (deg == 0) {
        return {};
    }
    const auto& c = p.coefficients();
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) {
        companion(i, i - 1) = 1.0;
    }
    for (int i = 0; i < deg; ++i) {
        companion(i, deg - 1) = -c[i] / c[deg];
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceFailure("find_roots: eigenvalue solver failed");
    }
    std::vector<Complex> raw(solver.eigenvalues().data(), solver.eigenvalues().data() + deg);

    // Multiple roots spread by O(eps^{1/m}); cluster generously and then
    // polish each cluster on the (m-1)-th derivative, where it is simple.
    std::vector<Root> roots;
    std::vector<bool> used(raw.size(), false);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (used[i]) {
            continue;
        }
        Complex sum = raw[i];
        int count = 1;
        used[i] = true;
        for (std::size_t j = i + 1; j < raw.size(); ++j) {
            if (!used[j] && std::abs(raw[j] - raw[i]) <= 1e-5 * std::max(1.0, std::abs(raw[i]))) {
                used[j] = true;
                sum += raw[j];
                ++count;
            }
        }
        Polynomial q = p;
        for (int k = 1; k < count; ++k) {
            q = q.derivative();
        }
        roots.push_back({newton_polish(q, sum / static_cast<double>(count)), count});
    }
    return roots;
}

}  // namespace chenrecip
