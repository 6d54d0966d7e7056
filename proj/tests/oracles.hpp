#pragma once

// Independent reference computations used only by the tests.

#include "chenrecip/forms.hpp"
#include "chenrecip/qexpansion.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

using chenrecip::Complex;

// Contour integral of g over the circle |z - c| = r by the trapezoid rule,
// which converges geometrically for analytic integrands.
inline Complex circle_integral(const std::function<Complex(Complex)>& g, Complex c, double r, int n = 512)
{
    Complex acc{};
    for (int k = 0; k < n; ++k) {
        const Complex e = std::polar(1.0, 2.0 * std::numbers::pi * k / n);
        acc += g(c + r * e) * Complex(0.0, r) * e;
    }
    return acc * (2.0 * std::numbers::pi / n);
}

// Weierstrass zeta from the symmetric square lattice sum, truncated at
// |m|, |n| <= R, Richardson-extrapolated in R (tail ~ R^-2).
inline Complex lattice_zeta(Complex tau, Complex z, int R = 150)
{
    auto partial = [&](int r) {
        Complex s = 1.0 / z;
        for (int m = -r; m <= r; ++m)
            for (int n = -r; n <= r; ++n) {
                if (m == 0 && n == 0) continue;
                const Complex w = static_cast<double>(m) + static_cast<double>(n) * tau;
                s += 1.0 / (z - w) + 1.0 / w + z / (w * w);
            }
        return s;
    };
    const Complex a = partial(R), b = partial(2 * R);
    return (4.0 * b - a) / 3.0;
}

// Adaptive Gauss-Kronrod on real and imaginary parts separately.
inline Complex integrate(const std::function<Complex(double)>& g, double a, double b, double tol)
{
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    const double re = GK::integrate([&](double x) { return g(x).real(); }, a, b, 12, tol);
    const double im = GK::integrate([&](double x) { return g(x).imag(); }, a, b, 12, tol);
    return {re, im};
}

// f(iy), using f(i/y) = (iy)^k f(iy) below height 1.
inline Complex on_imaginary_axis(const chenrecip::QExpansion& f, double y)
{
    if (y >= 1.0) return f(Complex(0.0, y));
    return std::pow(Complex(0.0, y), -f.weight) * f(Complex(0.0, 1.0 / y));
}

// The value of multiple_lvalue_iterated(f, {n1, n2}):
// (n1+1)! (n2+1)! int f dz o dz^{n1} o f dz o dz^{n2} from i infinity to 0,
// written as a nested integral over y1 > y2 in log coordinates y = e^u.
inline Complex multiple_lvalue(const chenrecip::QExpansion& f, int n1, int n2)
{
    const Complex I(0.0, 1.0);
    auto fact = [](int n) { return std::tgamma(n + 1.0); };
    const double U = std::log(20.0);  // f(iy) is below 1e-40 outside [1/20, 20]
    auto outer = [&](double u2) {
        const double y2 = std::exp(u2);
        auto inner = [&](double u1) {
            const double y1 = std::exp(u1);
            return on_imaginary_axis(f, y1) * std::pow(I * (y2 - y1), n1) / fact(n1) * y1;
        };
        // (-i)^2 = -1 from dz = i dy along decreasing y
        return -integrate(inner, u2, U, 1e-14) * on_imaginary_axis(f, y2) * std::pow(-I * y2, n2) / fact(n2) * y2;
    };
    return integrate(outer, -U, U, 1e-13) * fact(n1 + 1) * fact(n2 + 1);
}

}  // namespace oracle
