#include "chenrecip/modular.hpp"

#include "chenrecip/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

namespace chenrecip {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const Complex kI(0.0, 1.0);

using Poly = std::vector<Complex>;
// exponent m -> polynomial P_m, standing for sum_m P_m(z) e^{2 pi i m z}
using Terms = std::map<int, Poly>;

Poly poly_mul(const Poly& a, const Poly& b)
{
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, Complex{});
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

void poly_add_scaled(Poly& acc, const Poly& p, Complex s)
{
    if (acc.size() < p.size()) acc.resize(p.size(), Complex{});
    for (std::size_t i = 0; i < p.size(); ++i) acc[i] += s * p[i];
}

Complex poly_eval(const Poly& p, Complex z)
{
    Complex acc{};
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
    return acc;
}

// Antiderivative of P(z) e^{cz}, c = 2 pi i m, vanishing at i*infinity when
// m > 0: Q = sum_k (-1)^k P^{(k)} / c^{k+1}. For m = 0 the polynomial
// antiderivative with zero constant term.
Poly antiderivative(const Poly& p, int m)
{
    if (m == 0) {
        Poly q(p.size() + 1, Complex{});
        for (std::size_t k = 0; k < p.size(); ++k) q[k + 1] = p[k] / static_cast<double>(k + 1);
        return q;
    }
    const Complex c(0.0, kTwoPi * m);
    Poly q(p.size(), Complex{});
    Poly d = p;
    Complex cpow = c;
    double sign = 1.0;
    while (!d.empty()) {
        for (std::size_t i = 0; i < d.size(); ++i) q[i] += sign * d[i] / cpow;
        Poly next(d.size() > 1 ? d.size() - 1 : 0);
        for (std::size_t i = 1; i < d.size(); ++i) next[i - 1] = d[i] * static_cast<double>(i);
        d = std::move(next);
        cpow *= c;
        sign = -sign;
    }
    return q;
}

Complex evaluate(const Terms& t, double height)
{
    const Complex z(0.0, height);
    Complex acc{};
    for (const auto& [m, p] : t) acc += poly_eval(p, z) * std::exp(-kTwoPi * m * height);
    return acc;
}

void check_tail(const QExpansion& f, double height, double tol)
{
    if (f.cutoff() < 1) return;  // finite q-series, nothing dropped
    const double tail = tail_bound(f, height);
    if (tail > tol) {
        throw ConvergenceFailure("q-expansion tail " + std::to_string(tail) + " at height " +
                                 std::to_string(height) + " exceeds tolerance; raise the cutoff");
    }
}

double factorial(int n)
{
    return std::tgamma(n + 1.0);
}

double binomial(int n, int k)
{
    return factorial(n) / (factorial(k) * factorial(n - k));
}

Complex ipow(Complex z, int n)
{
    Complex r(1.0);
    for (int i = 0; i < n; ++i) r *= z;
    return r;
}

// Series from i*infinity to i*h, or the unit when h is the cusp.
NCSeries cusp_anchor(const std::vector<CuspLetter>& letters, double h, int degree, double tol)
{
    const int n = static_cast<int>(letters.size());
    if (std::isinf(h)) return NCSeries::unit(n, degree);
    return cusp_transport(letters, h, degree, tol);
}

NCSeries segment_between(const std::vector<CuspLetter>& letters, double ha, double hb, int degree,
                         double tol)
{
    return concat_mul(inverse(cusp_anchor(letters, ha, degree, tol)),
                      cusp_anchor(letters, hb, degree, tol));
}

std::vector<Word> contiguous_subwords(const Word& w)
{
    std::vector<Word> out{Word{}};
    for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t j = i + 1; j <= w.size(); ++j) out.emplace_back(w.begin() + i, w.begin() + j);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Stretch of the imaginary axis with both heights >= 1, letters {f dz, dz}.
NCSeries upper_piece(const QExpansion& f, double ha, double hb, int degree, double tol)
{
    std::vector<CuspLetter> letters{{{Complex(1.0)}, f}, {{Complex(1.0)}, dz_qexp()}};
    return segment_between(letters, ha, hb, degree, tol);
}

// Stretch with both heights <= 1. Each word is expanded in moment words
// z^{b_1} f dz o ... o z^{b_k} f dz by binomially expanding the dz blocks,
// and those are pulled back along w = -1/z:
// z^b f(z) dz = (-1)^b w^{k-2-b} f(w) dw.
NCSeries lower_piece(const QExpansion& f, double ha, double hb, const Word& target, double tol)
{
    if (!f.is_cusp()) throw InvalidInput("vertical_transport: below height 1 f must be a cusp form");
    const int k = f.weight;
    const int degree = static_cast<int>(target.size());
    const int bmax = static_cast<int>(std::count(target.begin(), target.end(), 1));
    const int max_a = degree - bmax;
    if (k - 2 - bmax < 0) {
        throw InvalidInput("vertical_transport: word has more dz letters than weight - 2 allows");
    }

    std::vector<CuspLetter> moments;
    for (int b = 0; b <= bmax; ++b) {
        CuspLetter l;
        l.poly.assign(k - 1 - b, Complex{});
        l.poly.back() = (b % 2 == 0) ? 1.0 : -1.0;
        l.f = f;
        moments.push_back(std::move(l));
    }
    auto height_in_w = [](double h) { return h == 0.0 ? kCuspHeight : 1.0 / h; };
    const NCSeries mseries =
        max_a == 0 ? NCSeries::unit(bmax + 1, 0)
                   : segment_between(moments, height_in_w(ha), height_in_w(hb), max_a, tol);

    const Complex zs(0.0, ha), ze(0.0, hb);
    NCSeries out(2, degree);
    for (const auto& w : contiguous_subwords(target)) {
        // dz blocks around the f dz letters
        std::vector<int> blocks{0};
        for (int letter : w) {
            if (letter == 1) ++blocks.back();
            else blocks.push_back(0);
        }
        const int na = static_cast<int>(blocks.size()) - 1;
        if (na == 0) {
            out.set(w, ipow(ze - zs, blocks[0]) / factorial(blocks[0]));
            continue;
        }
        Complex total{};
        Word exps(na, 0);
        // factor j expands (z_{j+1} - z_j)^{n_j} / n_j!, with z_0 = zs and z_{na+1} = ze
        std::function<void(int, Complex)> expand = [&](int j, Complex coef) {
            if (j > na) {
                total += coef * mseries[exps];
                return;
            }
            const int n = blocks[j];
            for (int c = 0; c <= n; ++c) {
                Complex term = coef * binomial(n, c) / factorial(n);
                // c powers go to the upper variable, n - c to the lower with a sign
                if (j == 0) term *= ipow(-zs, n - c);
                else {
                    term *= ((n - c) % 2 == 0) ? 1.0 : -1.0;
                    exps[j - 1] += n - c;
                }
                if (j == na) term *= ipow(ze, c);
                else exps[j] += c;
                if (term != Complex{}) expand(j + 1, term);
                if (j > 0) exps[j - 1] -= n - c;
                if (j < na) exps[j] -= c;
            }
        };
        expand(0, Complex(1.0));
        out.set(w, total);
    }
    return out;
}

}  // namespace

QExpansion dz_qexp()
{
    QExpansion one;
    one.weight = 0;
    one.coefficients = {Complex(1.0)};
    return one;
}

NCSeries cusp_transport(const std::vector<CuspLetter>& letters, double height, int degree, double tol)
{
    if (!(height >= 0.5) || std::isinf(height)) {
        throw InvalidInput("cusp_transport: height must be finite and >= 0.5");
    }
    const int n = static_cast<int>(letters.size());
    int cap = 1;
    for (const auto& l : letters) {
        if (l.poly.empty()) throw InvalidInput("cusp_transport: empty polynomial factor");
        check_tail(l.f, height, tol);
        cap = std::max(cap, l.f.cutoff());
    }

    const auto words = words_up_to(n, degree);
    std::map<Word, Terms> table;
    table[Word{}] = Terms{{0, Poly{Complex(1.0)}}};
    NCSeries out(n, degree);
    out.set(Word{}, 1.0);
    for (const auto& w : words) {
        if (w.empty()) continue;
        const Word parent(w.begin(), w.end() - 1);
        const CuspLetter& l = letters[w.back()];
        Terms integrand;
        for (const auto& [m, p] : table.at(parent)) {
            const Poly pp = poly_mul(p, l.poly);
            for (int j = 0; j <= l.f.cutoff() && m + j <= cap; ++j) {
                const Complex a = l.f.coefficients[j];
                if (a == Complex{}) continue;
                poly_add_scaled(integrand[m + j], pp, a);
            }
        }
        Terms integral;
        for (const auto& [m, p] : integrand) integral[m] = antiderivative(p, m);
        out.set(w, evaluate(integral, height));
        table[w] = std::move(integral);
    }
    return out;
}

Complex vertical_transport(const QExpansion& f, const VerticalPath& path, const Word& word, double tol)
{
    const double ha = path.from_height, hb = path.to_height;
    if (!(ha >= 0.0) || !(hb >= 0.0) || ha == hb) {
        throw InvalidInput("vertical_transport: heights must be nonnegative and distinct");
    }
    for (int letter : word) {
        if (letter != 0 && letter != 1) throw InvalidInput("vertical_transport: letters are 0 (f dz) and 1 (dz)");
    }
    const int degree = static_cast<int>(word.size());

    std::vector<double> cuts{ha};
    if ((ha - 1.0) * (hb - 1.0) < 0.0) cuts.push_back(1.0);
    cuts.push_back(hb);

    NCSeries acc = NCSeries::unit(2, degree);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        const bool upper = std::min(a, b) >= 1.0;
        acc = concat_mul(acc, upper ? upper_piece(f, a, b, degree, tol) : lower_piece(f, a, b, word, tol));
    }
    return acc[word];
}

Complex multiple_lvalue_iterated(const QExpansion& f, const std::vector<int>& ns, double tol)
{
    if (ns.empty()) throw InvalidInput("multiple_lvalue_iterated: need at least one index");
    if (!f.is_cusp()) throw InvalidInput("multiple_lvalue_iterated: f must be a cusp form");
    Word w;
    double scale = 1.0;
    for (int n : ns) {
        if (n < 1) throw InvalidInput("multiple_lvalue_iterated: indices must be positive");
        w.push_back(0);
        w.insert(w.end(), n, 1);
        scale *= factorial(n + 1);
    }
    return scale * vertical_transport(f, VerticalPath{kCuspHeight, 0.0}, w, tol);
}

Complex lvalue_iterated(const QExpansion& f, int n, double tol)
{
    return multiple_lvalue_iterated(f, {n}, tol);
}

Complex completed_lvalue(const QExpansion& f, double s, double split)
{
    const int k = f.weight;
    if (!f.is_cusp()) throw InvalidInput("completed_lvalue: f must be a cusp form");
    if (!(s > 0.0 && s < k)) throw InvalidInput("completed_lvalue: need 0 < s < weight");
    if (!(split > 0.0)) throw InvalidInput("completed_lvalue: split must be positive");
    const Complex ik = ipow(kI, k);
    Complex acc{};
    for (int n = 1; n <= f.cutoff(); ++n) {
        const Complex a = f.coefficients[n];
        if (a == Complex{}) continue;
        const double x = kTwoPi * n;
        const double upper = std::pow(x, -s) * boost::math::tgamma(s, x * split);
        const double lower = std::pow(x, -(k - s)) * boost::math::tgamma(k - s, x / split);
        acc += a * (upper + ik * lower);
    }
    return acc;
}

CompletedLValue lvalue_oracle(const QExpansion& f, double s, double tol)
{
    CompletedLValue out;
    out.value = completed_lvalue(f, s, 1.0);
    const Complex mirrored = ipow(kI, f.weight) * completed_lvalue(f, f.weight - s, 1.25);
    out.self_check = std::abs(out.value - mirrored);
    if (out.self_check > tol) {
        throw ConvergenceFailure("lvalue_oracle: functional equation self-check " +
                                 std::to_string(out.self_check) + " exceeds tolerance");
    }
    return out;
}

Complex lvalue_iterated_oracle(const QExpansion& f, int n, double tol)
{
    if (n < 1) throw InvalidInput("lvalue_iterated_oracle: n must be positive");
    return static_cast<double>(n + 1) * ipow(-kI, n + 1) * lvalue_oracle(f, n + 1.0, tol).value;
}

NCSeries jsymbol_reg(const std::vector<QExpansion>& forms, const VerticalPath& path, int degree, double tol)
{
    const bool from_cusp = std::isinf(path.from_height);
    const bool to_cusp = std::isinf(path.to_height);
    if (from_cusp == to_cusp) throw InvalidInput("jsymbol_reg: exactly one endpoint must be the cusp i*infinity");
    std::vector<CuspLetter> letters;
    for (const auto& f : forms) letters.push_back(CuspLetter{{Complex(1.0)}, f});
    const double h = from_cusp ? path.to_height : path.from_height;
    NCSeries s = cusp_transport(letters, h, degree, tol);
    return from_cusp ? s : inverse(s);
}

NCSeries jsymbol_res(const std::vector<QExpansion>& forms, int degree)
{
    const int n = static_cast<int>(forms.size());
    NCSeries linear(n, degree);
    for (int j = 0; j < n; ++j) {
        if (!forms[j].coefficients.empty()) linear.set(Word{j}, forms[j].coefficients[0]);
    }
    return exp_series(linear);
}

}  // namespace chenrecip
