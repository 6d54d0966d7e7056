#pragma once

#include "chenrecip/ncseries.hpp"

#include <string>
#include <vector>

namespace chenrecip {

/// f(z) = sum_{n=0}^{M} a_n q^n, q = exp(2 pi i z), of the given weight on SL2(Z).
struct QExpansion {
    int weight = 0;
    std::vector<Complex> coefficients;  // a_0 .. a_M

    int cutoff() const { return static_cast<int>(coefficients.size()) - 1; }
    bool is_cusp() const { return coefficients.empty() || coefficients.front() == Complex{}; }
    Complex operator()(Complex z) const;
};

/// Ramanujan Delta = q prod (1 - q^n)^24, exact integer coefficients.
QExpansion delta_qexp(int cutoff);

/// tau(n) for n = 0..cutoff (tau(0) = 0).
std::vector<long long> ramanujan_tau(int cutoff);

/// Normalized Eisenstein series E_k = 1 - (2k / B_k) sum sigma_{k-1}(n) q^n, k >= 4 even.
QExpansion eisenstein_qexp(int weight, int cutoff);

/// sum of d^power over divisors d of n.
long double divisor_sigma(int power, int n);

/// Header "weight k cutoff M", then lines "n re [im]" (missing n means 0).
QExpansion read_qexpansion(const std::string& path);
QExpansion parse_qexpansion(const std::string& text);
void write_qexpansion(const QExpansion& f, const std::string& path);

/// |a_M| exp(-2 pi M y), the size of the last retained term at height y.
double tail_bound(const QExpansion& f, double height);

}  // namespace chenrecip
