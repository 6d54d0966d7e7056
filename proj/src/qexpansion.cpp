#include "chenrecip/qexpansion.hpp"

#include "chenrecip/errors.hpp"

#include <boost/math/special_functions/bernoulli.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace chenrecip {

Complex QExpansion::operator()(Complex z) const
{
    const Complex q = std::exp(Complex(0.0, 2.0 * std::numbers::pi) * z);
    // Horner in q
    Complex acc{};
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * q + *it;
    return acc;
}

namespace {

using Int = __int128;

std::vector<Int> truncated_product(const std::vector<Int>& a, const std::vector<Int>& b, int cutoff)
{
    std::vector<Int> out(cutoff + 1, 0);
    for (int i = 0; i <= cutoff; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; i + j <= cutoff; ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

}  // namespace

std::vector<long long> ramanujan_tau(int cutoff)
{
    if (cutoff < 0) throw InvalidInput("ramanujan_tau: negative cutoff");
    // prod (1 - q^n) by Euler's pentagonal theorem
    std::vector<Int> euler(cutoff + 1, 0);
    euler[0] = 1;
    for (int k = 1;; ++k) {
        const int p1 = k * (3 * k - 1) / 2;
        const int p2 = k * (3 * k + 1) / 2;
        if (p1 > cutoff) break;
        const Int sign = (k % 2 == 0) ? 1 : -1;
        euler[p1] += sign;
        if (p2 <= cutoff) euler[p2] += sign;
    }
    // 24 = 16 + 8
    auto e2 = truncated_product(euler, euler, cutoff);
    auto e4 = truncated_product(e2, e2, cutoff);
    auto e8 = truncated_product(e4, e4, cutoff);
    auto e16 = truncated_product(e8, e8, cutoff);
    auto e24 = truncated_product(e16, e8, cutoff);

    std::vector<long long> tau(cutoff + 1, 0);
    for (int n = 1; n <= cutoff; ++n) tau[n] = static_cast<long long>(e24[n - 1]);
    return tau;
}

QExpansion delta_qexp(int cutoff)
{
    QExpansion f;
    f.weight = 12;
    for (long long t : ramanujan_tau(cutoff)) f.coefficients.emplace_back(static_cast<double>(t), 0.0);
    return f;
}

long double divisor_sigma(int power, int n)
{
    long double s = 0;
    for (int d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        s += std::pow(static_cast<long double>(d), power);
        const int e = n / d;
        if (e != d) s += std::pow(static_cast<long double>(e), power);
    }
    return s;
}

QExpansion eisenstein_qexp(int weight, int cutoff)
{
    if (weight < 4 || weight % 2 != 0) throw InvalidInput("eisenstein_qexp: weight must be even and >= 4");
    if (cutoff < 0) throw InvalidInput("eisenstein_qexp: negative cutoff");
    const long double bk = boost::math::bernoulli_b2n<long double>(weight / 2);
    const long double factor = -2.0L * weight / bk;
    QExpansion f;
    f.weight = weight;
    f.coefficients.assign(cutoff + 1, Complex{});
    f.coefficients[0] = 1.0;
    for (int n = 1; n <= cutoff; ++n) {
        f.coefficients[n] = static_cast<double>(factor * divisor_sigma(weight - 1, n));
    }
    return f;
}

QExpansion parse_qexpansion(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    QExpansion f;
    bool have_header = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        if (!have_header) {
            std::string w, c;
            int k = 0, m = 0;
            if (!(ls >> w)) continue;
            if (w != "weight" || !(ls >> k >> c >> m) || c != "cutoff" || m < 0) {
                throw InvalidInput("q-expansion: expected header 'weight k cutoff M'");
            }
            f.weight = k;
            f.coefficients.assign(m + 1, Complex{});
            have_header = true;
            continue;
        }
        long long n = 0;
        double re = 0, im = 0;
        if (!(ls >> n)) continue;
        if (!(ls >> re)) throw InvalidInput("q-expansion: missing coefficient on line " + std::to_string(lineno));
        ls >> im;
        if (n < 0 || n > f.cutoff()) {
            throw InvalidInput("q-expansion: index out of range on line " + std::to_string(lineno));
        }
        f.coefficients[n] = Complex(re, im);
    }
    if (!have_header) throw InvalidInput("q-expansion: empty input");
    return f;
}

QExpansion read_qexpansion(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InvalidInput("q-expansion: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_qexpansion(buf.str());
}

void write_qexpansion(const QExpansion& f, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw InvalidInput("q-expansion: cannot write " + path);
    out << "weight " << f.weight << " cutoff " << f.cutoff() << "\n" << std::setprecision(17);
    for (int n = 0; n <= f.cutoff(); ++n) {
        const Complex a = f.coefficients[n];
        if (a == Complex{}) continue;
        out << n << " " << a.real();
        if (a.imag() != 0.0) out << " " << a.imag();
        out << "\n";
    }
}

double tail_bound(const QExpansion& f, double height)
{
    const int m = f.cutoff();
    if (m < 0) return 0.0;
    return std::abs(f.coefficients[m]) * std::exp(-2.0 * std::numbers::pi * m * height);
}

}  // namespace chenrecip
