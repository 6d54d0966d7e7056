#pragma once

#include "chenrecip/geometry.hpp"
#include "chenrecip/ncseries.hpp"
#include "chenrecip/transport.hpp"

#include <vector>

namespace chenrecip {

/// Generating series of a path ending at a simple pole Q, with the
/// logarithmic divergence removed.
///
/// Near Q the transport factors as F = K * exp(log(z - Q) R) * H(z) with
/// R = sum_i Res_Q(omega_i) A_i, H holomorphic and H(Q) = 1; `series` is K.
/// K is grouplike, so its inverse is its reverse antipode.
struct RegularizedSeries {
    NCSeries series;
    Complex pole;
    /// Point on the approach where the local expansion was matched.
    Complex match_point;
    /// Radius of convergence of the local expansion (distance to the next pole).
    double local_radius = 0.0;
    /// max |K * reverse_antipode(K) - 1|
    double inverse_defect = 0.0;
};

/// The path must end at Q with a straight final segment. Forms must have
/// at most simple poles at Q and none elsewhere on the path.
RegularizedSeries regularized_transport(const FormAssignment& forms, const Path& gamma, int degree, double tol = 1e-12);

/// Straight approach from base to pole.
RegularizedSeries regularized_transport(const FormAssignment& forms, Complex base, Complex pole, int degree,
                                        double tol = 1e-12);

/// exp(2 pi i R): the limit of the transport around a small circle about Q.
NCSeries residual_series(const FormAssignment& forms, Complex pole, int degree);

/// Transport around the keyhole loop based at `base` around `pole`:
/// 1 + K (exp(2 pi i R) - 1) K^{-1}, independent of the keyhole radius.
NCSeries tame_symbol(const FormAssignment& forms, Complex base, Complex pole, int degree, double tol = 1e-12);
NCSeries tame_symbol(const RegularizedSeries& reg, const FormAssignment& forms, int degree);

/// Independent route to K: fit the truncated transport to the approach
/// point z_eps = Q + eps u on a geometric eps ladder by the basis
/// eps^k log(z_eps - Q)^l and keep the constant term.
struct LadderFit {
    NCSeries series;
    std::vector<double> ladder;
    double max_fit_residual = 0.0;  // relative rms residual, worst word
};
LadderFit ladder_regularization(const FormAssignment& forms, Complex base, Complex pole, int degree,
                                double tol = 1e-13);

/// Keyhole consistency on an eps ladder.
struct KeyholeDefect {
    double epsilon;
    /// max |tame_symbol - direct transport around the keyhole|
    double regularized;
    /// max |1 + F_eps (exp(2 pi i R) - 1) F_eps^{-1} - direct transport|,
    /// with F_eps the transport up to the start of the circle.
    double unregularized;
};
struct KeyholeReport {
    std::vector<KeyholeDefect> rows;
    /// The unregularized defect decreases along the ladder (down to a noise floor).
    bool decreasing = false;
    double max_regularized = 0.0;
};
KeyholeReport keyhole_direct_check(const FormAssignment& forms, const KeyholeSpec& spec, int degree, double tol = 1e-12,
                                   int ladder_steps = 4);

}  // namespace chenrecip
