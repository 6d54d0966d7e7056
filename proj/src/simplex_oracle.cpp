#include "chenrecip/errors.hpp"
#include "chenrecip/transport.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <functional>

namespace chenrecip {

namespace {

using Rule = boost::math::quadrature::gauss<double, 10>;

// Path parametrized by s in [0, #segments]; segment k covers [k, k + 1].
class GlobalParam {
public:
    explicit GlobalParam(const Path& path) : path_(path) {}

    double length() const { return static_cast<double>(path_.segments().size()); }

    Complex pullback(const MeromorphicForm& form, double s) const
    {
        const auto count = path_.segments().size();
        std::size_t k = static_cast<std::size_t>(std::floor(s));
        if (k >= count) {
            k = count - 1;
        }
        const PathSegment& seg = path_.segments()[k];
        const double t = s - static_cast<double>(k);
        return form.coefficient(seg.point(t)) * seg.derivative(t);
    }

private:
    const Path& path_;
};

class Nested {
public:
    Nested(const std::vector<MeromorphicForm>& forms, const GlobalParam& param, int panels)
        : forms_(forms), param_(param), panels_(panels)
    {
    }

    // Integral over 0 < s_1 < ... < s_j < s of forms[0](s_1) ... forms[j-1](s_j).
    Complex value(std::size_t j, double s) const
    {
        if (j == 0) {
            return 1.0;
        }
        return integrate(s, [&](double u) { return param_.pullback(forms_[j - 1], u) * value(j - 1, u); });
    }

private:
    Complex integrate(double s, const std::function<Complex(double)>& f) const
    {
        Complex total{};
        const auto& x = Rule::abscissa();
        const auto& w = Rule::weights();
        for (double lo = 0.0; lo < s; lo += 1.0) {
            const double hi = std::min(lo + 1.0, s);
            const double width = (hi - lo) / panels_;
            for (int p = 0; p < panels_; ++p) {
                const double c = lo + (p + 0.5) * width;
                const double r = width / 2.0;
                for (std::size_t i = 0; i < x.size(); ++i) {
                    total += w[i] * r * f(c + r * x[i]);
                    total += w[i] * r * f(c - r * x[i]);
                }
            }
        }
        return total;
    }

    const std::vector<MeromorphicForm>& forms_;
    const GlobalParam& param_;
    int panels_;
};

int panels_for(std::size_t length)
{
    switch (length) {
    case 1: return 32;
    case 2: return 16;
    case 3: return 6;
    default: return 2;
    }
}

}  // namespace

OracleValue simplex_oracle(const std::vector<MeromorphicForm>& forms, const Path& path)
{
    if (forms.size() > 4) {
        throw InvalidInput("simplex_oracle: at most 4 forms");
    }
    if (forms.empty() || path.empty()) {
        return {forms.empty() ? Complex(1.0) : Complex{}, 0.0};
    }
    const GlobalParam param(path);
    const int panels = panels_for(forms.size());
    const Complex fine = Nested(forms, param, panels).value(forms.size(), param.length());
    const Complex coarse = Nested(forms, param, (panels + 1) / 2).value(forms.size(), param.length());
    return {fine, std::abs(fine - coarse)};
}

}  // namespace chenrecip
