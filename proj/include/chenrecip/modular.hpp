#pragma once

#include "chenrecip/ncseries.hpp"
#include "chenrecip/qexpansion.hpp"

#include <limits>
#include <vector>

namespace chenrecip {

inline constexpr double kCuspHeight = std::numeric_limits<double>::infinity();

/// i*from_height -> i*to_height. Height kCuspHeight is the cusp i*infinity, height 0 the cusp 0.
struct VerticalPath {
    double from_height = kCuspHeight;
    double to_height = 1.0;
};

/// p(z) f(z) dz with p a polynomial, coefficients from the constant term up.
struct CuspLetter {
    std::vector<Complex> poly{Complex(1.0)};
    QExpansion f;
};

/// The letter dz, i.e. the constant q-series 1.
QExpansion dz_qexp();

/// Regularized transport from i*infinity to i*height over the given letters,
/// by closed-form termwise integration of p(z) e^{2 pi i m z}. Divergent
/// constant terms are regularized by dropping the constant of the polynomial
/// antiderivative, which is the constant term in the cusp height. Requires
/// height >= 0.5.
NCSeries cusp_transport(const std::vector<CuspLetter>& letters, double height, int degree,
                        double tol = 1e-14);

/// Iterated integral of a word in the letters {0: f dz, 1: dz} along a vertical
/// path. Stretches below height 1 are mapped by z -> -1/z to the region near
/// i*infinity using weight-k modularity of f; f must then be a cusp form.
Complex vertical_transport(const QExpansion& f, const VerticalPath& path, const Word& word,
                           double tol = 1e-14);

/// (n+1)! * int_{i inf}^0 f dz o dz^{o n}.
Complex lvalue_iterated(const QExpansion& f, int n, double tol = 1e-14);

/// prod (n_j+1)! * int_{i inf}^0 f dz o dz^{o n_1} o ... o f dz o dz^{o n_k}.
Complex multiple_lvalue_iterated(const QExpansion& f, const std::vector<int>& ns, double tol = 1e-14);

struct CompletedLValue {
    Complex value;
    double self_check = 0.0;  // |Lambda(s) - i^k Lambda(k - s)| with different splits
};

/// Lambda(f, s) = int_0^inf f(iy) y^{s-1} dy summed with upper incomplete gamma
/// functions on both sides of the functional equation. Throws ConvergenceFailure
/// when the self-check exceeds tol. Requires 0 < s < k.
CompletedLValue lvalue_oracle(const QExpansion& f, double s, double tol = 1e-10);

/// Lambda(f, s) with the integral split at height t.
Complex completed_lvalue(const QExpansion& f, double s, double split);

/// Independent prediction of lvalue_iterated(f, n): (n+1) (-i)^{n+1} Lambda(f, n+1).
Complex lvalue_iterated_oracle(const QExpansion& f, int n, double tol = 1e-10);

/// Regularized generating series of the letters f_j dz along a vertical path
/// with one endpoint at i*infinity.
NCSeries jsymbol_reg(const std::vector<QExpansion>& forms, const VerticalPath& path, int degree,
                     double tol = 1e-14);

/// exp(sum_j a_0(f_j) A_j): the residue series at the cusp.
NCSeries jsymbol_res(const std::vector<QExpansion>& forms, int degree);

}  // namespace chenrecip
