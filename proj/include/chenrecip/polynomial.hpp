#pragma once

#include "chenrecip/ncseries.hpp"

#include <vector>

namespace chenrecip {

/// Dense complex polynomial, coefficients stored constant term first.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Complex> coefficients);

    /// Degree of the zero polynomial is -1.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<Complex>& coefficients() const { return coeffs_; }
    Complex leading() const;

    Complex operator()(Complex z) const;
    Polynomial derivative() const;

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);

private:
    std::vector<Complex> coeffs_;
};

struct Root {
    Complex value;
    int multiplicity;
};

/// Roots of a nonzero polynomial, clustered into multiplicities and polished
/// by Newton iteration. Backed by the companion-matrix eigenvalues.
std::vector<Root> find_roots(const Polynomial& p);

}  // namespace chenrecip
