#pragma once

#include "chenrecip/forms.hpp"
#include "chenrecip/geometry.hpp"
#include "chenrecip/ncseries.hpp"

#include <map>
#include <vector>

namespace chenrecip {

/// Letter i (0-based) is paired with forms[i].
using FormAssignment = std::vector<MeromorphicForm>;

/// Minimum distance between a quadrature node and a pole.
inline constexpr double kPoleProximityThreshold = 1e-8;
/// Smallest parameter step before giving up.
inline constexpr double kStepFloor = 1e-12;

struct TransportResult {
    NCSeries series;
    std::vector<double> estimated_error;  // indexed by degree
    Path path;
};

/// Solution of dF = F * sum_i A_i omega_i with F(start) = 1, truncated at
/// degree N. tol is the per-coefficient target, relative to max(1, |value|).
TransportResult transport_series(const FormAssignment& forms, const Path& path, int degree, double tol = 1e-12);

/// Only the requested words (and the subwords they need), over the alphabet of `forms`.
std::map<Word, Complex> transport_words(const FormAssignment& forms, const Path& path, const std::vector<Word>& words,
                                        double tol = 1e-12);

/// Iterated integral of forms[0] o forms[1] o ... (forms[0] innermost).
Complex iterated_integral(const std::vector<MeromorphicForm>& forms, const Path& path, double tol = 1e-12);

/// Reference value of the same iterated integral by nested Gauss-Legendre
/// quadrature over the ordered simplex. At most 4 forms.
struct OracleValue {
    Complex value;
    double error_estimate;
};
OracleValue simplex_oracle(const std::vector<MeromorphicForm>& forms, const Path& path);

}  // namespace chenrecip
