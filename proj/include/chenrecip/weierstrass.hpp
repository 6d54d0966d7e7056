#pragma once

#include "chenrecip/ncseries.hpp"

namespace chenrecip {

/// The lattice Z + tau Z with its Weierstrass quasi-periods.
///
/// eta1 = zeta(z + 1) - zeta(z) and eta2 = zeta(z + tau) - zeta(z); they
/// satisfy the Legendre relation eta1 * tau - eta2 = 2 pi i.
class Lattice {
public:
    explicit Lattice(Complex tau);

    Complex tau() const { return tau_; }
    Complex eta1() const { return eta1_; }
    Complex eta2() const { return eta2_; }

    /// Weierstrass zeta. Throws InvalidInput on lattice points.
    Complex zeta(Complex z) const;

    /// Reduces z to z - m - n tau with |Re| <= 1/2 and |Im| <= Im(tau)/2.
    Complex reduce(Complex z, int* m = nullptr, int* n = nullptr) const;

    /// Representative of z in the parallelogram corner + [0,1) + [0,1) tau.
    Complex to_cell(Complex z, Complex corner) const;

    /// Distance from z to the nearest point of w + Lattice.
    double distance_to_class(Complex z, Complex w) const;

private:
    Complex zeta_reduced(Complex z) const;

    Complex tau_;
    Complex q2_;  // exp(2 pi i tau)
    Complex eta1_;
    Complex eta2_;
};

Complex weierstrass_zeta(const Lattice& lattice, Complex z);

}  // namespace chenrecip
