#include "chenrecip/weierstrass.hpp"

#include "chenrecip/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace chenrecip {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

}  // namespace

Lattice::Lattice(Complex tau) : tau_(tau)
{
    if (!(tau.imag() > 0.0)) {
        throw InvalidInput("lattice: Im(tau) must be positive");
    }
    q2_ = std::exp(2.0 * kPi * kI * tau);
    // eta1 = (pi^2 / 3) E2(tau), E2 = 1 - 24 sum sigma_1(n) q^{2n}.
    // Lambert form: sum sigma_1(n) x^n = sum n x^n / (1 - x^n).
    Complex lambert{};
    Complex power = 1.0;
    for (int n = 1; n < 100000; ++n) {
        power *= q2_;
        const Complex term = static_cast<double>(n) * power / (1.0 - power);
        lambert += term;
        if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(lambert))) {
            break;
        }
    }
    eta1_ = (kPi * kPi / 3.0) * (1.0 - 24.0 * lambert);
    eta2_ = eta1_ * tau_ - 2.0 * kPi * kI;
}

Complex Lattice::reduce(Complex z, int* m, int* n) const
{
    const double nn = std::round(z.imag() / tau_.imag());
    const Complex z1 = z - nn * tau_;
    const double mm = std::round(z1.real());
    if (m) {
        *m = static_cast<int>(mm);
    }
    if (n) {
        *n = static_cast<int>(nn);
    }
    return z1 - mm;
}

Complex Lattice::to_cell(Complex z, Complex corner) const
{
    const Complex d = z - corner;
    const double nn = std::floor(d.imag() / tau_.imag());
    const Complex d1 = d - nn * tau_;
    const double mm = std::floor(d1.real() - d1.imag() * tau_.real() / tau_.imag());
    return corner + d1 - mm;
}

double Lattice::distance_to_class(Complex z, Complex w) const
{
    const Complex r = reduce(z - w);
    double best = std::numeric_limits<double>::infinity();
    for (int i = -1; i <= 1; ++i) {
        for (int j = -1; j <= 1; ++j) {
            best = std::min(best, std::abs(r + static_cast<double>(i) + static_cast<double>(j) * tau_));
        }
    }
    return best;
}

Complex Lattice::zeta_reduced(Complex z) const
{
    // zeta(z) = eta1 z + pi cot(pi z) + 4 pi sum_n q^{2n} / (1 - q^{2n}) sin(2 pi n z),
    // convergent for |Im z| < Im tau.
    Complex sum{};
    Complex power = 1.0;
    for (int n = 1; n < 100000; ++n) {
        power *= q2_;
        const Complex term = power / (1.0 - power) * std::sin(2.0 * kPi * static_cast<double>(n) * z);
        sum += term;
        if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum)) && n > 2) {
            break;
        }
    }
    return eta1_ * z + kPi * std::cos(kPi * z) / std::sin(kPi * z) + 4.0 * kPi * sum;
}

Complex Lattice::zeta(Complex z) const
{
    int m = 0;
    int n = 0;
    const Complex r = reduce(z, &m, &n);
    if (std::abs(r) < 1e-14) {
        throw InvalidInput("weierstrass zeta: argument lies on the lattice");
    }
    return zeta_reduced(r) + static_cast<double>(m) * eta1_ + static_cast<double>(n) * eta2_;
}

Complex weierstrass_zeta(const Lattice& lattice, Complex z)
{
    return lattice.zeta(z);
}

}  // namespace chenrecip
