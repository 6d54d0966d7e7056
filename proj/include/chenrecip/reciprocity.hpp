#pragma once

#include "chenrecip/forms.hpp"
#include "chenrecip/ncseries.hpp"
#include "chenrecip/polynomial.hpp"
#include "chenrecip/regularization.hpp"
#include "chenrecip/transport.hpp"
#include "chenrecip/weierstrass.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace chenrecip {

/// F - 1.
NCSeries plus_part(const NCSeries& f);

/// Transport around the commutator loop a b a^{-1} b^{-1}, written as
/// 1 + b+ ai+ - a+ bi+ + a+ b+ ai+ + b+ ai+ bi+ + a+ b+ ai+ bi+ with
/// x+ = x - 1 and ai = inverse(a), bi = inverse(b).
NCSeries commutator_series(const NCSeries& fa, const NCSeries& fb);

/// Compact Riemann surface of genus 0 (sphere, coordinate z plus the point
/// at infinity) or genus 1 (C / (Z + tau Z), worked on the universal cover).
struct SurfaceScene {
    int genus = 0;
    std::optional<Lattice> lattice;
    FormAssignment forms;
    Complex base;
    double tol = 1e-12;  // transport tolerance
};

/// One keyhole of the product relation.
struct KeyholeEntry {
    Complex pole;  // z for finite poles; unused at infinity
    bool at_infinity = false;
    double angle = 0.0;  // direction of the approach ray seen from the base point
    std::vector<Complex> residues;  // one per form
};

/// Loops in product order. For genus 1 the commutator of the two cell sides
/// sits before entry `commutator_position` (== entries.size() for the end).
struct Layout {
    int genus = 0;
    Complex base;
    std::vector<KeyholeEntry> entries;
    std::size_t commutator_position = 0;
    /// Genus 0 with a pole at infinity: the chart w = 1/(z - chart_center).
    Complex chart_center;
    double infinity_angle = 0.0;
    /// Radius used for the explicit keyhole paths of the contractibility test.
    double keyhole_radius = 0.0;
};

/// Orders the keyholes counterclockwise around the base point. When groups
/// are given (lists of form indices), the poles of each group are made
/// contiguous by the choice of the ray to infinity and a cyclic rotation;
/// PreconditionError when impossible. Verifies that the composed loop has
/// winding number 0 about every pole.
Layout make_layout(const SurfaceScene& scene, const std::vector<std::vector<int>>& groups = {});

/// Regularized series of the straight ray from the base to the pole.
RegularizedSeries keyhole_regularization(const SurfaceScene& scene, const Layout& layout, const KeyholeEntry& entry,
                                         int degree);

/// 1 + K (exp(2 pi i R) - 1) K^{-1} for the keyhole at `entry`, where K is
/// the regularized series `reg` and R the residues there.
NCSeries keyhole_tame_symbol(const SurfaceScene& scene, const KeyholeEntry& entry, const RegularizedSeries& reg,
                             int degree);

/// Transports along the sides p0 -> p0 + tau and p0 -> p0 + 1 (genus 1).
struct CellSides {
    NCSeries tau_side;
    NCSeries one_side;
};
CellSides cell_sides(const SurfaceScene& scene, int degree);

struct DefectReport {
    NCSeries product;
    std::map<Word, double> residuals;    // |product(w) - unit(w)|
    std::vector<double> max_by_degree;   // entry 0 is the constant term
    double tolerance = 0.0;
    bool passed = false;
};

/// Product of all tame symbols in layout order, with the commutator factor
/// for genus 1, compared to 1.
DefectReport global_reciprocity(const SurfaceScene& scene, int degree, double tol);

/// |sum of residues| per form (including infinity on the sphere).
struct ResidueReport {
    std::vector<double> per_form;
    double max_defect = 0.0;
    bool passed = false;
};
ResidueReport residue_linear_check(const SurfaceScene& scene, double tol);

/// Value of a reciprocity identity: residue_terms (the sum over poles of
/// residue times regularized integrals), cycle_terms (genus 1), and
/// total = 2 pi i residue_terms + cycle_terms + ordering_correction, which
/// vanishes. The correction collects the products of lower-order terms of
/// different keyholes; it is zero when each form's poles are consecutive in
/// the keyhole order, which straight rays cannot always achieve (for
/// instance interleaved poles on one line).
struct IdentityReport {
    Complex residue_terms;
    Complex cycle_terms;
    Complex ordering_correction;
    bool contiguous = true;
    Complex total;
    double defect = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

/// Bilinear law for forms[0], forms[1] with no common pole.
IdentityReport riemann_bilinear_check(const SurfaceScene& scene, double tol);

/// Triple law for forms[0..2] with pairwise disjoint poles.
IdentityReport triple_check(const SurfaceScene& scene, double tol);

/// Cycle part of the triple law, written out term by term from the side
/// transports (a = first commutator factor, b = second).
Complex triple_cycle_terms(const NCSeries& fa, const NCSeries& fb);

struct RationalFunction {
    Polynomial num;
    Polynomial den;
};

struct WeilReport {
    Complex product;      // by evaluation at the divisor points
    Complex cross_check;  // exp of the bilinear residue terms for df/f, dg/g
    double defect = 0.0;  // |product - 1|
    double cross_defect = 0.0;
    bool passed = false;
};
/// prod_P g(P)^{-ord_P f} prod_Q f(Q)^{ord_Q g} over the divisors, infinity
/// included. Divisors must be disjoint.
WeilReport weil_check(const RationalFunction& f, const RationalFunction& g, double tol);

/// A base point away from the given points, with distinct directions to them.
Complex choose_base_point(const std::vector<Complex>& points);

}  // namespace chenrecip
