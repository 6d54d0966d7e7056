#include "chenrecip/reciprocity.hpp"

#include "chenrecip/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace chenrecip {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr Complex kTwoPiI{0.0, kTwoPi};
constexpr double kMinRayGap = 1e-7;

double normalized_angle(Complex v)
{
    double a = std::arg(v);
    return a < 0.0 ? a + kTwoPi : a;
}

void require_lattice(const SurfaceScene& scene)
{
    if (scene.genus != 0 && scene.genus != 1) {
        throw InvalidInput("surface genus must be 0 or 1");
    }
    if (scene.genus == 1 && !scene.lattice) {
        throw InvalidInput("genus 1 scene needs a lattice");
    }
    for (const auto& f : scene.forms) {
        const auto l = f.lattice();
        if (scene.genus == 0 && l) {
            throw InvalidInput("torus form in a genus 0 scene: " + f.describe());
        }
        if (scene.genus == 1) {
            if (!l && !f.finite_poles().empty()) {
                throw InvalidInput("sphere form with poles in a genus 1 scene: " + f.describe());
            }
            if (l && std::abs(l->tau() - scene.lattice->tau()) > 1e-12) {
                throw InvalidInput("form lattice differs from the scene lattice");
            }
        }
    }
}

// Poles with residues, finite ones reduced to the fundamental cell on genus 1.
std::vector<KeyholeEntry> scene_poles(const SurfaceScene& scene)
{
    std::vector<KeyholeEntry> out;
    for (const PoleEntry& p : pole_set(scene.forms)) {
        KeyholeEntry e;
        e.at_infinity = p.at_infinity;
        e.residues = p.residues;
        e.pole = p.point;
        if (!p.at_infinity) {
            if (scene.genus == 1) {
                e.pole = scene.lattice->to_cell(p.point, scene.base);
                // Interior of the cell: coordinates of pole - base in the basis (1, tau).
                const Complex tau = scene.lattice->tau();
                const Complex d = e.pole - scene.base;
                const double y = d.imag() / tau.imag();
                const double x = d.real() - y * tau.real();
                constexpr double kMargin = 1e-6;
                if (x < kMargin || x > 1.0 - kMargin || y < kMargin || y > 1.0 - kMargin) {
                    throw PreconditionError("a pole lies on the boundary of the fundamental cell at the base point");
                }
            }
            if (std::abs(e.pole - scene.base) < 1e-6) {
                throw PreconditionError("base point coincides with a pole");
            }
            e.angle = normalized_angle(e.pole - scene.base);
        }
        out.push_back(std::move(e));
    }
    return out;
}

int group_of(const KeyholeEntry& e, const std::vector<std::vector<int>>& groups)
{
    int found = -1;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (int f : groups[g]) {
            if (f >= 0 && static_cast<std::size_t>(f) < e.residues.size() && e.residues[static_cast<std::size_t>(f)] != Complex{}) {
                if (found >= 0 && found != static_cast<int>(g)) {
                    throw PreconditionError("forms required to have disjoint poles share a pole");
                }
                found = static_cast<int>(g);
            }
        }
    }
    return found;
}

// Sequence items: indices into the entry list, or -1 for the commutator.
bool contiguous(const std::vector<int>& seq, const std::vector<int>& group_ids, std::size_t group_count)
{
    for (std::size_t g = 0; g < group_count; ++g) {
        int first = -1;
        int last = -1;
        for (std::size_t k = 0; k < seq.size(); ++k) {
            if (seq[k] >= 0 && group_ids[static_cast<std::size_t>(seq[k])] == static_cast<int>(g)) {
                if (first < 0) {
                    first = static_cast<int>(k);
                }
                last = static_cast<int>(k);
            }
        }
        for (int k = first + 1; k < last && first >= 0; ++k) {
            const int item = seq[static_cast<std::size_t>(k)];
            if (item < 0) {
                return false;
            }
            const int other = group_ids[static_cast<std::size_t>(item)];
            if (other >= 0 && other != static_cast<int>(g)) {
                return false;
            }
        }
    }
    return true;
}

Path infinity_loop_in_plane(Complex base, Complex center, double angle, double reach)
{
    const Complex dir = std::polar(1.0, angle);
    const Complex far = base + reach * dir;
    const double radius = std::abs(far - center);
    std::vector<PathSegment> segs;
    segs.emplace_back(LineSegment{base, far});
    segs.emplace_back(ArcSegment{center, radius, angle, angle - kTwoPi});
    segs.emplace_back(LineSegment{far, base});
    return Path(std::move(segs));
}

Path commutator_rectangle(Complex base, Complex tau)
{
    std::vector<PathSegment> segs;
    segs.emplace_back(LineSegment{base, base + tau});
    segs.emplace_back(LineSegment{base + tau, base + tau + 1.0});
    segs.emplace_back(LineSegment{base + tau + 1.0, base + 1.0});
    segs.emplace_back(LineSegment{base + 1.0, base});
    return Path(std::move(segs));
}

void check_contractible(const SurfaceScene& scene, const Layout& layout)
{
    Path composite;
    auto append = [&composite](const Path& p) { composite = composite.empty() ? p : compose_paths(composite, p); };
    double reach = 1.0;
    for (const auto& e : layout.entries) {
        if (!e.at_infinity) {
            reach = std::max(reach, 4.0 * std::abs(e.pole - layout.base));
        }
    }
    for (std::size_t k = 0; k <= layout.entries.size(); ++k) {
        if (layout.genus == 1 && k == layout.commutator_position) {
            append(commutator_rectangle(layout.base, scene.lattice->tau()));
        }
        if (k == layout.entries.size()) {
            break;
        }
        const auto& e = layout.entries[k];
        if (e.at_infinity) {
            append(infinity_loop_in_plane(layout.base, layout.chart_center, layout.infinity_angle, reach));
        } else {
            append(keyhole_loop({layout.base, e.pole, layout.keyhole_radius}));
        }
    }
    if (composite.empty()) {
        return;
    }
    std::vector<Complex> probes;
    if (layout.genus == 1) {
        const Complex tau = scene.lattice->tau();
        const Complex mid = layout.base + (1.0 + tau) / 2.0;
        for (const auto& f : scene.forms) {
            for (const Pole& p : f.poles_within(mid, 2.0 * (1.0 + std::abs(tau)))) {
                probes.push_back(p.point);
            }
        }
    } else {
        for (const auto& e : layout.entries) {
            if (!e.at_infinity) {
                probes.push_back(e.pole);
            }
        }
    }
    // On the sphere a loop around every finite pole is trivial when infinity is not a pole.
    bool has_infinity = false;
    for (const auto& e : layout.entries) {
        has_infinity = has_infinity || e.at_infinity;
    }
    const int expected = (layout.genus == 0 && !has_infinity) ? 1 : 0;
    for (const Complex& z : probes) {
        if (winding_number(composite, z) != expected) {
            std::ostringstream os;
            os << "composed keyhole loop winds around the pole at " << z;
            throw PreconditionError(os.str());
        }
    }
}

}  // namespace

NCSeries plus_part(const NCSeries& f)
{
    NCSeries out = f;
    out.set({}, 0.0);
    return out;
}

NCSeries commutator_series(const NCSeries& fa, const NCSeries& fb)
{
    const NCSeries ap = plus_part(fa);
    const NCSeries bp = plus_part(fb);
    const NCSeries aip = plus_part(inverse(fa));
    const NCSeries bip = plus_part(inverse(fb));
    NCSeries out = NCSeries::unit(fa.alphabet_size(), fa.truncation());
    out += bp * aip;
    out -= ap * bip;
    out += ap * bp * aip;
    out += bp * aip * bip;
    out += ap * bp * aip * bip;
    return out;
}

Complex triple_cycle_terms(const NCSeries& a, const NCSeries& b)
{
    const Word A{0}, B{1}, C{2}, AB{0, 1}, CB{2, 1};
    return a[AB] * b[C] - b[AB] * a[C] + a[CB] * b[A] - b[CB] * a[A] - a[A] * b[B] * a[C] + b[A] * a[B] * b[C];
}

Layout make_layout(const SurfaceScene& scene, const std::vector<std::vector<int>>& groups)
{
    require_lattice(scene);
    std::vector<KeyholeEntry> poles = scene_poles(scene);

    std::vector<std::size_t> finite;
    std::size_t infinity = poles.size();
    for (std::size_t i = 0; i < poles.size(); ++i) {
        if (poles[i].at_infinity) {
            infinity = i;
        } else {
            finite.push_back(i);
        }
    }
    std::sort(finite.begin(), finite.end(), [&](std::size_t a, std::size_t b) { return poles[a].angle < poles[b].angle; });
    for (std::size_t k = 0; k + 1 < finite.size(); ++k) {
        if (poles[finite[k + 1]].angle - poles[finite[k]].angle < kMinRayGap) {
            throw PreconditionError("two poles lie on one ray from the base point");
        }
    }
    if (scene.genus == 0 && finite.size() > 1 &&
        poles[finite.front()].angle + kTwoPi - poles[finite.back()].angle < kMinRayGap) {
        throw PreconditionError("two poles lie on one ray from the base point");
    }

    std::vector<int> group_ids(poles.size(), -1);
    for (std::size_t i = 0; i < poles.size(); ++i) {
        group_ids[i] = group_of(poles[i], groups);
    }

    double min_sep = std::numeric_limits<double>::infinity();
    for (std::size_t a : finite) {
        min_sep = std::min(min_sep, std::abs(poles[a].pole - scene.base));
        for (std::size_t b : finite) {
            if (a != b) {
                min_sep = std::min(min_sep, std::abs(poles[a].pole - poles[b].pole));
            }
        }
    }

    // Candidate cyclic sequences: one per ray to infinity (genus 0 with a
    // pole there), otherwise one.
    struct Candidate {
        std::vector<int> cycle;
        double infinity_angle;
    };
    std::vector<Candidate> candidates;
    if (scene.genus == 1) {
        std::vector<int> cycle(finite.begin(), finite.end());
        cycle.push_back(-1);
        candidates.push_back({cycle, 0.0});
    } else if (infinity == poles.size()) {
        candidates.push_back({std::vector<int>(finite.begin(), finite.end()), 0.0});
    } else {
        for (std::size_t gap = 0; gap < std::max<std::size_t>(finite.size(), 1); ++gap) {
            double lo = finite.empty() ? 0.0 : poles[finite[gap]].angle;
            double hi = finite.empty() ? kTwoPi
                                       : (gap + 1 < finite.size() ? poles[finite[gap + 1]].angle
                                                                  : poles[finite.front()].angle + kTwoPi);
            std::vector<int> cycle;
            for (std::size_t k = 0; k <= gap && k < finite.size(); ++k) {
                cycle.push_back(static_cast<int>(finite[k]));
            }
            cycle.push_back(static_cast<int>(infinity));
            for (std::size_t k = gap + 1; k < finite.size(); ++k) {
                cycle.push_back(static_cast<int>(finite[k]));
            }
            double mid = 0.5 * (lo + hi);
            if (finite.size() == 1) {
                mid = lo + std::numbers::pi;
            }
            candidates.push_back({cycle, std::fmod(mid, kTwoPi)});
        }
    }

    for (const Candidate& cand : candidates) {
        const std::size_t len = cand.cycle.size();
        for (std::size_t rot = 0; rot < std::max<std::size_t>(len, 1); ++rot) {
            std::vector<int> seq;
            for (std::size_t k = 0; k < len; ++k) {
                seq.push_back(cand.cycle[(rot + k) % len]);
            }
            if (!contiguous(seq, group_ids, groups.size())) {
                continue;
            }
            Layout layout;
            layout.genus = scene.genus;
            layout.base = scene.base;
            layout.infinity_angle = cand.infinity_angle;
            layout.chart_center = scene.base - std::polar(1.0, cand.infinity_angle);
            layout.keyhole_radius = std::min(1e-3, 0.25 * min_sep);
            layout.commutator_position = 0;
            for (int item : seq) {
                if (item < 0) {
                    layout.commutator_position = layout.entries.size();
                    continue;
                }
                KeyholeEntry e = poles[static_cast<std::size_t>(item)];
                if (e.at_infinity) {
                    e.angle = cand.infinity_angle;
                }
                layout.entries.push_back(std::move(e));
            }
            if (scene.genus == 0) {
                layout.commutator_position = layout.entries.size();
            }
            check_contractible(scene, layout);
            return layout;
        }
    }
    throw PreconditionError("no ordering of keyholes around the base point keeps each form's poles contiguous");
}

RegularizedSeries keyhole_regularization(const SurfaceScene& scene, const Layout& layout, const KeyholeEntry& entry,
                                         int degree)
{
    if (!entry.at_infinity) {
        return regularized_transport(scene.forms, layout.base, entry.pole, degree, scene.tol);
    }
    FormAssignment pulled;
    for (const auto& f : scene.forms) {
        pulled.push_back(f.in_inverted_chart(layout.chart_center));
    }
    return regularized_transport(pulled, 1.0 / (layout.base - layout.chart_center), 0.0, degree, scene.tol);
}

NCSeries keyhole_tame_symbol(const SurfaceScene& scene, const KeyholeEntry& entry, const RegularizedSeries& reg,
                           int degree)
{
    const int n = static_cast<int>(scene.forms.size());
    NCSeries r(n, degree);
    if (degree >= 1) {
        for (int i = 0; i < n; ++i) {
            r.set({i}, entry.residues[static_cast<std::size_t>(i)]);
        }
    }
    const NCSeries unit = NCSeries::unit(n, degree);
    const NCSeries e = exp_series(r * kTwoPiI);
    return unit + reg.series * (e - unit) * reverse_antipode(reg.series);
}

namespace {

SurfaceScene sub_scene(const SurfaceScene& scene, std::size_t count)
{
    if (scene.forms.size() < count) {
        throw InvalidInput("scene has too few forms for this check");
    }
    SurfaceScene out = scene;
    out.forms.erase(out.forms.begin() + static_cast<long>(count), out.forms.end());
    return out;
}

}  // namespace

CellSides cell_sides(const SurfaceScene& scene, int degree)
{
    if (scene.genus != 1) {
        throw InvalidInput("cell sides exist only in genus 1");
    }
    const Complex tau = scene.lattice->tau();
    return {transport_series(scene.forms, line_path(scene.base, scene.base + tau), degree, scene.tol).series,
            transport_series(scene.forms, line_path(scene.base, scene.base + 1.0), degree, scene.tol).series};
}

DefectReport global_reciprocity(const SurfaceScene& scene, int degree, double tol)
{
    const Layout layout = make_layout(scene);
    const int n = static_cast<int>(scene.forms.size());
    const NCSeries unit = NCSeries::unit(n, degree);
    NCSeries product = unit;
    for (std::size_t k = 0; k <= layout.entries.size(); ++k) {
        if (scene.genus == 1 && k == layout.commutator_position) {
            const CellSides sides = cell_sides(scene, degree);
            product = product * commutator_series(sides.tau_side, sides.one_side);
        }
        if (k < layout.entries.size()) {
            const KeyholeEntry& e = layout.entries[k];
            product = product * keyhole_tame_symbol(scene, e, keyhole_regularization(scene, layout, e, degree), degree);
        }
    }
    DefectReport report{product, {}, std::vector<double>(static_cast<std::size_t>(degree) + 1, 0.0), tol, true};
    for (const Word& w : words_up_to(n, degree)) {
        const double r = std::abs(product[w] - unit[w]);
        report.residuals[w] = r;
        report.max_by_degree[w.size()] = std::max(report.max_by_degree[w.size()], r);
    }
    for (double m : report.max_by_degree) {
        report.passed = report.passed && m <= tol;
    }
    return report;
}

ResidueReport residue_linear_check(const SurfaceScene& scene, double tol)
{
    require_lattice(scene);
    ResidueReport report{std::vector<double>(scene.forms.size(), 0.0), 0.0, true};
    for (std::size_t i = 0; i < scene.forms.size(); ++i) {
        const auto& f = scene.forms[i];
        Complex sum{};
        for (const Pole& p : f.finite_poles()) {
            sum += p.residue;
        }
        if (scene.genus == 0) {
            sum += f.residue_at_infinity();
        }
        report.per_form[i] = std::abs(sum);
        report.max_defect = std::max(report.max_defect, report.per_form[i]);
    }
    report.passed = report.max_defect <= tol;
    return report;
}

namespace {

Layout layout_for_identity(const SurfaceScene& scene, const std::vector<std::vector<int>>& groups, bool& contiguous)
{
    try {
        contiguous = true;
        return make_layout(scene, groups);
    } catch (const PreconditionError& e) {
        if (std::string(e.what()).find("contiguous") == std::string::npos) {
            throw;
        }
    }
    contiguous = false;
    for (const KeyholeEntry& e : scene_poles(scene)) {
        (void)group_of(e, groups);  // rejects shared poles
    }
    return make_layout(scene);
}

// Coefficient of w in the ordered product minus the sum of the individual
// factors' coefficients.
Complex ordering_correction(const SurfaceScene& scene, const Layout& layout, const std::vector<NCSeries>& tame,
                            const std::optional<NCSeries>& commutator, const Word& w)
{
    const int degree = static_cast<int>(w.size());
    NCSeries product = NCSeries::unit(static_cast<int>(scene.forms.size()), degree);
    Complex individual{};
    for (std::size_t k = 0; k <= tame.size(); ++k) {
        if (commutator && k == layout.commutator_position) {
            product = product * *commutator;
            individual += (*commutator)[w];
        }
        if (k < tame.size()) {
            product = product * tame[k];
            individual += tame[k][w];
        }
    }
    return product[w] - individual;
}

}  // namespace

IdentityReport riemann_bilinear_check(const SurfaceScene& full, double tol)
{
    const SurfaceScene scene = sub_scene(full, 2);
    IdentityReport report;
    const Layout layout = layout_for_identity(scene, {{0}, {1}}, report.contiguous);
    std::vector<NCSeries> tame;
    for (const auto& e : layout.entries) {
        const RegularizedSeries reg = keyhole_regularization(scene, layout, e, 2);
        const NCSeries& k = reg.series;
        report.residue_terms += -e.residues[0] * k[{1}] + e.residues[1] * k[{0}];
        tame.push_back(keyhole_tame_symbol(scene, e, reg, 2));
    }
    std::optional<NCSeries> comm;
    if (scene.genus == 1) {
        const CellSides s = cell_sides(scene, 2);
        report.cycle_terms = s.tau_side[{0}] * s.one_side[{1}] - s.one_side[{0}] * s.tau_side[{1}];
        comm = commutator_series(s.tau_side, s.one_side);
    }
    report.ordering_correction = ordering_correction(scene, layout, tame, comm, {0, 1});
    report.total = kTwoPiI * report.residue_terms + report.cycle_terms + report.ordering_correction;
    report.defect = std::abs(report.total);
    report.tolerance = tol;
    report.passed = report.defect <= tol;
    return report;
}

IdentityReport triple_check(const SurfaceScene& full, double tol)
{
    const SurfaceScene scene = sub_scene(full, 3);
    IdentityReport report;
    const Layout layout = layout_for_identity(scene, {{0}, {1}, {2}}, report.contiguous);
    std::vector<NCSeries> tame;
    for (const auto& e : layout.entries) {
        const RegularizedSeries reg = keyhole_regularization(scene, layout, e, 3);
        const NCSeries& k = reg.series;
        const NCSeries ki = reverse_antipode(k);
        report.residue_terms += e.residues[0] * ki[{1, 2}] + e.residues[1] * k[{0}] * ki[{2}] + e.residues[2] * k[{0, 1}];
        tame.push_back(keyhole_tame_symbol(scene, e, reg, 3));
    }
    std::optional<NCSeries> comm;
    if (scene.genus == 1) {
        const CellSides s = cell_sides(scene, 3);
        report.cycle_terms = triple_cycle_terms(s.tau_side, s.one_side);
        comm = commutator_series(s.tau_side, s.one_side);
    }
    report.ordering_correction = ordering_correction(scene, layout, tame, comm, {0, 1, 2});
    report.total = kTwoPiI * report.residue_terms + report.cycle_terms + report.ordering_correction;
    report.defect = std::abs(report.total);
    report.tolerance = tol;
    report.passed = report.defect <= tol;
    return report;
}

Complex choose_base_point(const std::vector<Complex>& points)
{
    if (points.empty()) {
        return {0.1234, 0.5678};
    }
    Complex center{};
    double scale = 0.0;
    for (const Complex& p : points) {
        center += p;
    }
    center /= static_cast<double>(points.size());
    for (const Complex& p : points) {
        scale = std::max(scale, std::abs(p - center));
    }
    scale = std::max(scale, 1.0);
    Complex best = center + Complex(0.5, 0.3) * scale;
    double best_score = -1.0;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 1; k <= 200; ++k) {
        const Complex cand = center + std::polar(scale * 1.5 * std::sqrt(k / 200.0), golden * k);
        double dist = std::numeric_limits<double>::infinity();
        std::vector<double> angles;
        for (const Complex& p : points) {
            dist = std::min(dist, std::abs(p - cand));
            angles.push_back(normalized_angle(p - cand));
        }
        std::sort(angles.begin(), angles.end());
        double gap = kTwoPi;
        for (std::size_t i = 0; i + 1 < angles.size(); ++i) {
            gap = std::min(gap, angles[i + 1] - angles[i]);
        }
        const double score = std::min(dist / scale, gap);
        if (score > best_score) {
            best_score = score;
            best = cand;
        }
    }
    return best;
}

WeilReport weil_check(const RationalFunction& f, const RationalFunction& g, double tol)
{
    const MeromorphicForm df = MeromorphicForm::dlog(f.num, f.den);
    const MeromorphicForm dg = MeromorphicForm::dlog(g.num, g.den);
    const auto divf = *df.divisor();
    const auto divg = *dg.divisor();
    for (const auto& p : divf.finite) {
        for (const auto& q : divg.finite) {
            if (std::abs(p.point - q.point) <= kPoleMergeTolerance * std::max(1.0, std::abs(p.point))) {
                throw PreconditionError("Weil reciprocity needs disjoint divisors");
            }
        }
    }
    if (divf.order_at_infinity != 0 && divg.order_at_infinity != 0) {
        throw PreconditionError("Weil reciprocity needs disjoint divisors (both meet infinity)");
    }
    auto eval = [](const RationalFunction& h, Complex z) { return h.num(z) / h.den(z); };

    WeilReport report;
    report.product = 1.0;
    for (const auto& p : divf.finite) {
        report.product *= std::pow(eval(g, p.point), -p.multiplicity);
    }
    if (divf.order_at_infinity != 0) {
        report.product *= std::pow(divg.leading_ratio, -divf.order_at_infinity);
    }
    for (const auto& q : divg.finite) {
        report.product *= std::pow(eval(f, q.point), q.multiplicity);
    }
    if (divg.order_at_infinity != 0) {
        report.product *= std::pow(divf.leading_ratio, divg.order_at_infinity);
    }
    report.defect = std::abs(report.product - 1.0);

    std::vector<Complex> pts;
    for (const auto& p : divf.finite) {
        pts.push_back(p.point);
    }
    for (const auto& q : divg.finite) {
        pts.push_back(q.point);
    }
    if (divf.finite.empty() || divg.finite.empty()) {
        report.cross_check = 1.0;  // a constant function has an empty divisor
    } else {
        SurfaceScene scene;
        scene.genus = 0;
        scene.forms = {df, dg};
        scene.base = choose_base_point(pts);
        report.cross_check = std::exp(riemann_bilinear_check(scene, tol).residue_terms);
    }
    report.cross_defect = std::abs(report.cross_check - report.product);
    report.passed = report.defect <= tol;
    return report;
}

}  // namespace chenrecip
