#pragma once

#include "chenrecip/ncseries.hpp"
#include "chenrecip/polynomial.hpp"
#include "chenrecip/weierstrass.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace chenrecip {

enum class FormKind { Rational, Dlog, Elliptic, Pullback };

/// A simple pole and the residue of one form there.
struct Pole {
    Complex point;
    Complex residue;
};

/// A divisor point of a rational function; `multiplicity` is the order.
struct DivisorPoint {
    Complex point;
    int multiplicity;
};

namespace detail {
class FormImpl;
}

/// Meromorphic 1-form g(z) dz with simple poles, on the sphere chart or on the
/// universal cover of a torus.
///
/// Values are immutable and cheap to copy (shared implementation).
class MeromorphicForm {
public:
    /// (num / den)(z) dz. The denominator must have simple roots.
    static MeromorphicForm rational(Polynomial num, Polynomial den);
    /// df / f for f = num / den.
    static MeromorphicForm dlog(Polynomial num, Polynomial den);
    /// scale * (zeta(z - a) - zeta(z - b)) dz on C / (Z + tau Z).
    static MeromorphicForm elliptic(const Lattice& lattice, Complex a, Complex b, Complex scale = 1.0);
    static MeromorphicForm zero();

    FormKind kind() const;

    /// Coefficient g(z). Throws PoleProximity within 1e-9 of a pole.
    Complex coefficient(Complex z) const;

    /// Residue at a finite point; zero at regular points.
    Complex residue_at(Complex p) const;

    /// Finite poles (for elliptic forms: the two given representatives).
    std::vector<Pole> finite_poles() const;

    /// Poles (all lattice translates for elliptic forms) inside the open disk.
    std::vector<Pole> poles_within(Complex center, double radius) const;

    double distance_to_nearest_pole(Complex z) const;

    /// True for forms defined on the torus cover.
    bool is_periodic() const;
    std::optional<Lattice> lattice() const;

    /// Sphere forms only. Throws InvalidInput when the pole at infinity is
    /// not simple.
    Complex residue_at_infinity() const;
    bool has_pole_at_infinity() const;

    /// The same form expressed in the chart w = 1/(z - center), where the
    /// point at infinity sits at w = 0. Sphere forms only.
    MeromorphicForm in_inverted_chart(Complex center) const;
    /// The same form in the coordinate w = z - shift. Pole locations are
    /// shifted exactly, so a pole at `shift` lands on w = 0.
    MeromorphicForm translated(Complex shift) const;

    /// Divisor of f for dlog forms (including infinity, flagged separately).
    struct Divisor {
        std::vector<DivisorPoint> finite;
        int order_at_infinity = 0;
        Complex leading_ratio;  // lim_{z->inf} f(z) z^{order_at_infinity}
    };
    std::optional<Divisor> divisor() const;

    std::string describe() const;

private:
    explicit MeromorphicForm(std::shared_ptr<const detail::FormImpl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const detail::FormImpl> impl_;
};

/// Coefficient g(z) of omega = g(z) dz.
Complex eval_form(const MeromorphicForm& form, Complex z);

/// Residue at a finite point.
Complex residue_at(const MeromorphicForm& form, Complex p);

/// A point of the pole set; `at_infinity` marks the point at infinity of the
/// sphere (then `point` is unused).
struct PoleEntry {
    Complex point;
    bool at_infinity = false;
    std::vector<Complex> residues;  // one per form, zero where regular
};

/// De-duplicated poles of a family of forms, with the residue of every form
/// at each pole. Includes infinity for sphere forms that have a pole there.
std::vector<PoleEntry> pole_set(const std::vector<MeromorphicForm>& forms);

/// Distance below which two pole locations are treated as the same point.
inline constexpr double kPoleMergeTolerance = 1e-9;

}  // namespace chenrecip
