#include "chenrecip/forms.hpp"

#include "chenrecip/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace chenrecip {

namespace {

constexpr double kProximity = 1e-9;

void check_proximity(double distance)
{
    if (distance < kProximity) {
        throw PoleProximity("form evaluated within 1e-9 of a pole");
    }
}

double nearest(const std::vector<Pole>& poles, Complex z)
{
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : poles) {
        best = std::min(best, std::abs(z - p.point));
    }
    return best;
}

}  // namespace

namespace detail {

class FormImpl : public std::enable_shared_from_this<FormImpl> {
public:
    virtual ~FormImpl() = default;
    virtual FormKind kind() const = 0;
    virtual Complex coefficient(Complex z) const = 0;
    virtual std::vector<Pole> finite_poles() const = 0;
    virtual std::vector<Pole> poles_within(Complex center, double radius) const
    {
        std::vector<Pole> out;
        for (const auto& p : finite_poles()) {
            if (std::abs(p.point - center) < radius) {
                out.push_back(p);
            }
        }
        return out;
    }
    virtual double distance_to_nearest_pole(Complex z) const { return nearest(finite_poles(), z); }
    virtual std::optional<Lattice> lattice() const { return std::nullopt; }
    // Residue at infinity, or nullopt when the pole there is not simple.
    virtual std::optional<Complex> residue_at_infinity() const = 0;
    virtual std::optional<MeromorphicForm::Divisor> divisor() const { return std::nullopt; }
    virtual std::string describe() const = 0;
    // The same form in the coordinate w = z - shift.
    virtual std::shared_ptr<const FormImpl> translated(Complex shift) const;
};

namespace {

std::string poly_string(const Polynomial& p)
{
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < p.coefficients().size(); ++i) {
        os << (i ? ", " : "") << p.coefficients()[i];
    }
    os << "]";
    return os.str();
}

// Coefficients of p(w + shift).
Polynomial taylor_shift(const Polynomial& p, Complex shift)
{
    std::vector<Complex> c = p.coefficients();
    const std::size_t n = c.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t k = n - 1; k > i; --k) {
            c[k - 1] += shift * c[k];
        }
    }
    return Polynomial(std::move(c));
}

// Stored in partial fractions: quotient(z) + sum_k r_k / (z - p_k).
class RationalImpl final : public FormImpl {
public:
    RationalImpl(const Polynomial& num, const Polynomial& den)
    {
        if (den.is_zero()) {
            throw InvalidInput("rational form: denominator is identically zero");
        }
        std::ostringstream os;
        os << "rational{num=" << poly_string(num) << ", den=" << poly_string(den) << "}";
        description_ = os.str();
        if (num.is_zero()) {
            excess_ = -2;
            return;
        }
        excess_ = num.degree() - den.degree();
        const Polynomial dden = den.derivative();
        double num_scale = 0.0;
        for (const Complex& c : num.coefficients()) {
            num_scale += std::abs(c);
        }
        for (const Root& r : find_roots(den)) {
            if (r.multiplicity != 1) {
                throw InvalidInput("rational form: denominator has a repeated root (pole of order > 1)");
            }
            const Complex top = num(r.value);
            if (std::abs(top) <= 1e-12 * num_scale * std::pow(std::max(1.0, std::abs(r.value)), num.degree())) {
                continue;  // cancelled by the numerator
            }
            poles_.push_back({r.value, top / dden(r.value)});
        }
        std::vector<Complex> rem = num.coefficients();
        const auto& d = den.coefficients();
        const int dd = den.degree();
        if (num.degree() >= dd) {
            std::vector<Complex> quot(static_cast<std::size_t>(num.degree() - dd + 1));
            for (int k = num.degree(); k >= dd; --k) {
                const Complex c = rem[static_cast<std::size_t>(k)] / d.back();
                quot[static_cast<std::size_t>(k - dd)] = c;
                for (int j = 0; j <= dd; ++j) {
                    rem[static_cast<std::size_t>(k - dd + j)] -= c * d[static_cast<std::size_t>(j)];
                }
            }
            quotient_ = Polynomial(std::move(quot));
        }
        // -(coefficient of 1/z at infinity), read off the remainder rather
        // than from the finite residues so the residue sum is a real check
        if (excess_ == -1) {
            infinity_residue_ = -rem[static_cast<std::size_t>(dd - 1)] / d.back();
        }
    }

    RationalImpl(std::vector<Pole> poles, Polynomial quotient, int excess, Complex infinity_residue,
                 std::string description)
        : poles_(std::move(poles)),
          quotient_(std::move(quotient)),
          excess_(excess),
          infinity_residue_(infinity_residue),
          description_(std::move(description))
    {
    }

    FormKind kind() const override { return FormKind::Rational; }

    Complex coefficient(Complex z) const override
    {
        check_proximity(nearest(poles_, z));
        Complex sum = quotient_.is_zero() ? Complex{} : quotient_(z);
        for (const auto& p : poles_) {
            sum += p.residue / (z - p.point);
        }
        return sum;
    }

    std::vector<Pole> finite_poles() const override { return poles_; }

    std::optional<Complex> residue_at_infinity() const override
    {
        if (excess_ <= -2) {
            return Complex{};
        }
        if (excess_ >= 0) {
            return std::nullopt;
        }
        return infinity_residue_;
    }

    std::shared_ptr<const FormImpl> translated(Complex shift) const override
    {
        std::vector<Pole> poles = poles_;
        for (auto& p : poles) {
            p.point -= shift;
        }
        std::ostringstream os;
        os << description_ << " at z = w + " << shift;
        return std::make_shared<RationalImpl>(std::move(poles), taylor_shift(quotient_, shift), excess_,
                                              infinity_residue_, os.str());
    }

    std::string describe() const override { return description_; }

private:
    std::vector<Pole> poles_;
    Polynomial quotient_;
    int excess_ = -2;
    Complex infinity_residue_;
    std::string description_;
};

class DlogImpl final : public FormImpl {
public:
    DlogImpl(const Polynomial& num, const Polynomial& den)
        : description_("dlog{num=" + poly_string(num) + ", den=" + poly_string(den) + "}")
    {
        if (num.is_zero() || den.is_zero()) {
            throw InvalidInput("dlog form: f must be a nonzero rational function");
        }
        std::vector<DivisorPoint> pts;
        auto merge = [&pts](Complex z, int m) {
            for (auto& p : pts) {
                if (std::abs(p.point - z) <= 1e-7 * std::max(1.0, std::abs(z))) {
                    p.multiplicity += m;
                    return;
                }
            }
            pts.push_back({z, m});
        };
        for (const Root& r : find_roots(num)) {
            merge(r.value, r.multiplicity);
        }
        for (const Root& r : find_roots(den)) {
            merge(r.value, -r.multiplicity);
        }
        for (const auto& p : pts) {
            if (p.multiplicity != 0) {
                divisor_.finite.push_back(p);
                poles_.push_back({p.point, static_cast<double>(p.multiplicity)});
            }
        }
        divisor_.order_at_infinity = den.degree() - num.degree();
        divisor_.leading_ratio = num.leading() / den.leading();
    }

    DlogImpl(std::vector<Pole> poles, MeromorphicForm::Divisor divisor, std::string description)
        : poles_(std::move(poles)), divisor_(std::move(divisor)), description_(std::move(description))
    {
    }

    FormKind kind() const override { return FormKind::Dlog; }

    std::shared_ptr<const FormImpl> translated(Complex shift) const override
    {
        std::vector<Pole> poles = poles_;
        for (auto& p : poles) {
            p.point -= shift;
        }
        MeromorphicForm::Divisor divisor = divisor_;
        for (auto& p : divisor.finite) {
            p.point -= shift;
        }
        std::ostringstream os;
        os << description_ << " at z = w + " << shift;
        return std::make_shared<DlogImpl>(std::move(poles), std::move(divisor), os.str());
    }

    Complex coefficient(Complex z) const override
    {
        check_proximity(nearest(poles_, z));
        Complex sum{};
        for (const auto& p : poles_) {
            sum += p.residue / (z - p.point);
        }
        return sum;
    }

    std::vector<Pole> finite_poles() const override { return poles_; }

    std::optional<Complex> residue_at_infinity() const override
    {
        return Complex(static_cast<double>(divisor_.order_at_infinity));
    }

    std::optional<MeromorphicForm::Divisor> divisor() const override { return divisor_; }

    std::string describe() const override { return description_; }

private:
    std::vector<Pole> poles_;
    MeromorphicForm::Divisor divisor_;
    std::string description_;
};

class EllipticImpl final : public FormImpl {
public:
    EllipticImpl(const Lattice& lattice, Complex a, Complex b, Complex scale)
        : lattice_(lattice), a_(a), b_(b), scale_(scale)
    {
        if (lattice_.distance_to_class(a, b) < 1e-9) {
            throw InvalidInput("elliptic form: a and b coincide modulo the lattice");
        }
    }

    FormKind kind() const override { return FormKind::Elliptic; }

    Complex coefficient(Complex z) const override
    {
        check_proximity(distance_to_nearest_pole(z));
        return scale_ * (lattice_.zeta(z - a_) - lattice_.zeta(z - b_));
    }

    std::vector<Pole> finite_poles() const override
    {
        if (scale_ == Complex{}) {
            return {};
        }
        return {{a_, scale_}, {b_, -scale_}};
    }

    std::vector<Pole> poles_within(Complex center, double radius) const override
    {
        std::vector<Pole> out;
        if (scale_ == Complex{}) {
            return out;
        }
        const Complex tau = lattice_.tau();
        const double cell = std::min(1.0, tau.imag()) / (1.0 + std::abs(tau.real()));
        const int k = static_cast<int>(std::ceil(radius / cell)) + 2;
        for (const auto& base : finite_poles()) {
            const Complex r = lattice_.reduce(base.point - center);
            for (int m = -k; m <= k; ++m) {
                for (int n = -k; n <= k; ++n) {
                    const Complex d = r + static_cast<double>(m) + static_cast<double>(n) * tau;
                    if (std::abs(d) < radius) {
                        out.push_back({center + d, base.residue});
                    }
                }
            }
        }
        return out;
    }

    double distance_to_nearest_pole(Complex z) const override
    {
        return std::min(lattice_.distance_to_class(z, a_), lattice_.distance_to_class(z, b_));
    }

    std::optional<Lattice> lattice() const override { return lattice_; }

    std::shared_ptr<const FormImpl> translated(Complex shift) const override
    {
        return std::make_shared<EllipticImpl>(lattice_, a_ - shift, b_ - shift, scale_);
    }

    std::optional<Complex> residue_at_infinity() const override { return std::nullopt; }

    std::string describe() const override
    {
        std::ostringstream os;
        os << "elliptic3k{tau=" << lattice_.tau() << ", a=" << a_ << ", b=" << b_ << ", scale=" << scale_ << "}";
        return os.str();
    }

private:
    Lattice lattice_;
    Complex a_;
    Complex b_;
    Complex scale_;
};

// omega = g(z) dz written in w = 1/(z - c): g(c + 1/w) (-1/w^2) dw.
class PullbackImpl final : public FormImpl {
public:
    PullbackImpl(std::shared_ptr<const FormImpl> base, Complex center) : base_(std::move(base)), center_(center)
    {
        for (const auto& p : base_->finite_poles()) {
            if (std::abs(p.point - center_) > 1e-12) {
                poles_.push_back({1.0 / (p.point - center_), p.residue});
            }
        }
        const auto res_inf = base_->residue_at_infinity();
        if (!res_inf) {
            throw InvalidInput("chart change: form has a pole of order > 1 at infinity");
        }
        if (*res_inf != Complex{}) {
            poles_.push_back({0.0, *res_inf});
        }
    }

    FormKind kind() const override { return FormKind::Pullback; }

    Complex coefficient(Complex w) const override
    {
        check_proximity(nearest(poles_, w));
        if (w == Complex{}) {
            return 0.0;
        }
        return -base_->coefficient(center_ + 1.0 / w) / (w * w);
    }

    std::vector<Pole> finite_poles() const override { return poles_; }

    std::optional<Complex> residue_at_infinity() const override { return std::nullopt; }

    std::string describe() const override
    {
        std::ostringstream os;
        os << "chart(w=1/(z-" << center_ << "))[" << base_->describe() << "]";
        return os.str();
    }

private:
    std::shared_ptr<const FormImpl> base_;
    Complex center_;
    std::vector<Pole> poles_;
};

class TranslatedImpl final : public FormImpl {
public:
    TranslatedImpl(std::shared_ptr<const FormImpl> base, Complex shift) : base_(std::move(base)), shift_(shift)
    {
        for (const auto& p : base_->finite_poles()) {
            poles_.push_back({p.point - shift_, p.residue});
        }
    }

    FormKind kind() const override { return base_->kind(); }
    Complex coefficient(Complex w) const override { return base_->coefficient(w + shift_); }
    std::vector<Pole> finite_poles() const override { return poles_; }
    std::optional<Complex> residue_at_infinity() const override { return base_->residue_at_infinity(); }

    std::string describe() const override
    {
        std::ostringstream os;
        os << base_->describe() << " at z = w + " << shift_;
        return os.str();
    }

private:
    std::shared_ptr<const FormImpl> base_;
    Complex shift_;
    std::vector<Pole> poles_;
};

}  // namespace

std::shared_ptr<const FormImpl> FormImpl::translated(Complex shift) const
{
    return std::make_shared<TranslatedImpl>(shared_from_this(), shift);
}

}  // namespace detail

MeromorphicForm MeromorphicForm::rational(Polynomial num, Polynomial den)
{
    return MeromorphicForm(std::make_shared<detail::RationalImpl>(std::move(num), std::move(den)));
}

MeromorphicForm MeromorphicForm::dlog(Polynomial num, Polynomial den)
{
    return MeromorphicForm(std::make_shared<detail::DlogImpl>(std::move(num), std::move(den)));
}

MeromorphicForm MeromorphicForm::elliptic(const Lattice& lattice, Complex a, Complex b, Complex scale)
{
    return MeromorphicForm(std::make_shared<detail::EllipticImpl>(lattice, a, b, scale));
}

MeromorphicForm MeromorphicForm::zero()
{
    return rational(Polynomial(), Polynomial({1.0}));
}

FormKind MeromorphicForm::kind() const { return impl_->kind(); }

Complex MeromorphicForm::coefficient(Complex z) const { return impl_->coefficient(z); }

Complex MeromorphicForm::residue_at(Complex p) const
{
    for (const auto& pole : impl_->poles_within(p, kPoleMergeTolerance * std::max(1.0, std::abs(p)))) {
        return pole.residue;
    }
    return 0.0;
}

std::vector<Pole> MeromorphicForm::finite_poles() const { return impl_->finite_poles(); }

std::vector<Pole> MeromorphicForm::poles_within(Complex center, double radius) const
{
    return impl_->poles_within(center, radius);
}

double MeromorphicForm::distance_to_nearest_pole(Complex z) const { return impl_->distance_to_nearest_pole(z); }

bool MeromorphicForm::is_periodic() const { return impl_->lattice().has_value(); }

std::optional<Lattice> MeromorphicForm::lattice() const { return impl_->lattice(); }

Complex MeromorphicForm::residue_at_infinity() const
{
    if (is_periodic()) {
        throw InvalidInput("residue at infinity is undefined for torus forms");
    }
    const auto r = impl_->residue_at_infinity();
    if (!r) {
        throw InvalidInput("form has a pole of order > 1 at infinity: " + describe());
    }
    return *r;
}

bool MeromorphicForm::has_pole_at_infinity() const
{
    if (is_periodic() || kind() == FormKind::Pullback) {
        return false;
    }
    const auto r = impl_->residue_at_infinity();
    return !r || *r != Complex{};
}

MeromorphicForm MeromorphicForm::in_inverted_chart(Complex center) const
{
    if (is_periodic()) {
        throw InvalidInput("chart change at infinity is only defined on the sphere");
    }
    return MeromorphicForm(std::make_shared<detail::PullbackImpl>(impl_, center));
}

MeromorphicForm MeromorphicForm::translated(Complex shift) const
{
    return MeromorphicForm(impl_->translated(shift));
}

std::optional<MeromorphicForm::Divisor> MeromorphicForm::divisor() const { return impl_->divisor(); }

std::string MeromorphicForm::describe() const { return impl_->describe(); }

Complex eval_form(const MeromorphicForm& form, Complex z) { return form.coefficient(z); }

Complex residue_at(const MeromorphicForm& form, Complex p) { return form.residue_at(p); }

std::vector<PoleEntry> pole_set(const std::vector<MeromorphicForm>& forms)
{
    std::optional<Lattice> lattice;
    for (const auto& f : forms) {
        if (auto l = f.lattice()) {
            lattice = l;
        }
    }
    auto same = [&lattice](Complex a, Complex b) {
        if (lattice) {
            return lattice->distance_to_class(a, b) <= kPoleMergeTolerance * std::max(1.0, std::abs(a));
        }
        return std::abs(a - b) <= kPoleMergeTolerance * std::max(1.0, std::abs(a));
    };

    std::vector<PoleEntry> out;
    for (std::size_t i = 0; i < forms.size(); ++i) {
        for (const auto& p : forms[i].finite_poles()) {
            if (p.residue == Complex{}) {
                continue;
            }
            auto it = std::find_if(out.begin(), out.end(),
                                   [&](const PoleEntry& e) { return !e.at_infinity && same(e.point, p.point); });
            if (it == out.end()) {
                out.push_back({p.point, false, std::vector<Complex>(forms.size())});
                it = std::prev(out.end());
            }
            it->residues[i] = p.residue;
        }
    }
    if (!lattice) {
        PoleEntry inf{0.0, true, std::vector<Complex>(forms.size())};
        bool any = false;
        for (std::size_t i = 0; i < forms.size(); ++i) {
            inf.residues[i] = forms[i].residue_at_infinity();
            any = any || inf.residues[i] != Complex{};
        }
        if (any) {
            out.push_back(std::move(inf));
        }
    }
    return out;
}

}  // namespace chenrecip
