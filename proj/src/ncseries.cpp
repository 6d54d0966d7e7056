#include "chenrecip/ncseries.hpp"

#include "chenrecip/errors.hpp"

#include <algorithm>
#include <cmath>

namespace chenrecip {

std::string format_word(const Word& w)
{
    if (w.empty()) {
        return "1";
    }
    std::string out;
    for (int letter : w) {
        out += "A" + std::to_string(letter + 1);
    }
    return out;
}

std::vector<Word> words_up_to(int n, int max_length)
{
    std::vector<Word> out{Word{}};
    std::size_t begin = 0;
    for (int len = 1; len <= max_length; ++len) {
        const std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i) {
            for (int letter = 0; letter < n; ++letter) {
                Word w = out[i];
                w.push_back(letter);
                out.push_back(std::move(w));
            }
        }
        begin = end;
    }
    return out;
}

NCSeries::NCSeries(int alphabet_size, int truncation) : n_(alphabet_size), degree_(truncation)
{
    if (alphabet_size < 1 || truncation < 0) {
        throw InvalidInput("NCSeries: alphabet size must be >= 1 and truncation >= 0");
    }
}

NCSeries NCSeries::unit(int alphabet_size, int truncation)
{
    NCSeries s(alphabet_size, truncation);
    s.set({}, 1.0);
    return s;
}

NCSeries NCSeries::letter(int alphabet_size, int truncation, int index, Complex coeff)
{
    NCSeries s(alphabet_size, truncation);
    if (truncation >= 1) {
        s.set({index}, coeff);
    }
    return s;
}

void NCSeries::check_word(const Word& w) const
{
    if (static_cast<int>(w.size()) > degree_) {
        throw InvalidInput("word " + format_word(w) + " exceeds truncation degree");
    }
    for (int letter : w) {
        if (letter < 0 || letter >= n_) {
            throw InvalidInput("letter index out of range in " + format_word(w));
        }
    }
}

Complex NCSeries::operator[](const Word& w) const
{
    auto it = coeffs_.find(w);
    return it == coeffs_.end() ? Complex{} : it->second;
}

void NCSeries::set(const Word& w, Complex value)
{
    check_word(w);
    if (value == Complex{}) {
        coeffs_.erase(w);
    } else {
        coeffs_[w] = value;
    }
}

void NCSeries::add(const Word& w, Complex value)
{
    set(w, (*this)[w] + value);
}

NCSeries& NCSeries::operator+=(const NCSeries& other)
{
    if (!compatible_with(other)) {
        throw InvalidInput("NCSeries: alphabet/truncation mismatch");
    }
    for (const auto& [w, c] : other.coeffs_) {
        add(w, c);
    }
    return *this;
}

NCSeries& NCSeries::operator-=(const NCSeries& other)
{
    if (!compatible_with(other)) {
        throw InvalidInput("NCSeries: alphabet/truncation mismatch");
    }
    for (const auto& [w, c] : other.coeffs_) {
        add(w, -c);
    }
    return *this;
}

NCSeries& NCSeries::operator*=(Complex s)
{
    if (s == Complex{}) {
        coeffs_.clear();
        return *this;
    }
    for (auto& entry : coeffs_) {
        entry.second *= s;
    }
    return *this;
}

NCSeries operator*(const NCSeries& a, const NCSeries& b)
{
    return concat_mul(a, b);
}

double NCSeries::max_abs_difference(const NCSeries& other) const
{
    if (!compatible_with(other)) {
        throw InvalidInput("NCSeries: alphabet/truncation mismatch");
    }
    double worst = 0.0;
    for (const auto& [w, c] : coeffs_) {
        worst = std::max(worst, std::abs(c - other[w]));
    }
    for (const auto& [w, c] : other.coeffs_) {
        if (!coeffs_.count(w)) {
            worst = std::max(worst, std::abs(c));
        }
    }
    return worst;
}

std::vector<double> NCSeries::max_abs_by_degree() const
{
    std::vector<double> out(degree_ + 1, 0.0);
    for (const auto& [w, c] : coeffs_) {
        out[w.size()] = std::max(out[w.size()], std::abs(c));
    }
    return out;
}

NCSeries NCSeries::truncated(int degree) const
{
    NCSeries out(n_, std::min(degree, degree_));
    for (const auto& [w, c] : coeffs_) {
        if (static_cast<int>(w.size()) <= out.degree_) {
            out.coeffs_.emplace(w, c);
        }
    }
    return out;
}

NCSeries concat_mul(const NCSeries& a, const NCSeries& b)
{
    if (!a.compatible_with(b)) {
        throw InvalidInput("concat_mul: alphabet/truncation mismatch");
    }
    const int max_len = a.truncation();
    NCSeries out(a.alphabet_size(), max_len);
    std::map<Word, Complex> acc;
    for (const auto& [u, cu] : a.terms()) {
        for (const auto& [v, cv] : b.terms()) {
            if (static_cast<int>(u.size() + v.size()) > max_len) {
                continue;
            }
            Word w = u;
            w.insert(w.end(), v.begin(), v.end());
            acc[w] += cu * cv;
        }
    }
    for (const auto& [w, c] : acc) {
        out.set(w, c);
    }
    return out;
}

NCSeries inverse(const NCSeries& a)
{
    if (a.constant_term() != Complex(1.0)) {
        throw InvalidInput("inverse: constant term must be 1 in the truncated algebra");
    }
    // (1 + x)^{-1} = sum_k (-x)^k, and x^k vanishes beyond the truncation degree.
    NCSeries x = a - NCSeries::unit(a.alphabet_size(), a.truncation());
    NCSeries result = NCSeries::unit(a.alphabet_size(), a.truncation());
    NCSeries power = result;
    for (int k = 1; k <= a.truncation(); ++k) {
        power = concat_mul(power, x) * Complex(-1.0);
        result += power;
    }
    return result;
}

NCSeries reverse_antipode(const NCSeries& a)
{
    NCSeries out(a.alphabet_size(), a.truncation());
    for (const auto& [w, c] : a.terms()) {
        Word r(w.rbegin(), w.rend());
        out.set(r, (w.size() % 2 == 0) ? c : -c);
    }
    return out;
}

NCSeries exp_series(const NCSeries& a)
{
    if (a.constant_term() != Complex{}) {
        throw InvalidInput("exp_series: constant term must be zero");
    }
    NCSeries result = NCSeries::unit(a.alphabet_size(), a.truncation());
    NCSeries power = result;
    for (int k = 1; k <= a.truncation(); ++k) {
        power = concat_mul(power, a) * Complex(1.0 / k);
        result += power;
    }
    return result;
}

namespace {

void shuffle_into(const Word& u, std::size_t i, const Word& v, std::size_t j, Word& prefix,
                  std::vector<Word>& out)
{
    if (i == u.size() && j == v.size()) {
        out.push_back(prefix);
        return;
    }
    if (i < u.size()) {
        prefix.push_back(u[i]);
        shuffle_into(u, i + 1, v, j, prefix, out);
        prefix.pop_back();
    }
    if (j < v.size()) {
        prefix.push_back(v[j]);
        shuffle_into(u, i, v, j + 1, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

std::vector<Word> shuffle_words(const Word& u, const Word& v)
{
    std::vector<Word> out;
    Word prefix;
    prefix.reserve(u.size() + v.size());
    shuffle_into(u, 0, v, 0, prefix, out);
    return out;
}

double grouplike_defect(const NCSeries& a)
{
    const int n = a.alphabet_size();
    const int max_len = a.truncation();
    const auto words = words_up_to(n, max_len);
    double worst = 0.0;
    for (const Word& u : words) {
        if (u.empty()) {
            continue;
        }
        for (const Word& v : words) {
            if (v.empty() || static_cast<int>(u.size() + v.size()) > max_len) {
                continue;
            }
            Complex sum{};
            for (const Word& w : shuffle_words(u, v)) {
                sum += a[w];
            }
            worst = std::max(worst, std::abs(a[u] * a[v] - sum));
        }
    }
    return worst;
}

}  // namespace chenrecip
