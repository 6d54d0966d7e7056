#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace chenrecip {

using Complex = std::complex<double>;

/// A word in the letters A_0..A_{n-1}; the empty word is the unit.
using Word = std::vector<int>;

std::string format_word(const Word& w);

/// All words of length <= max_length over an alphabet of size n, ordered by
/// length and then lexicographically.
std::vector<Word> words_up_to(int n, int max_length);

/// Truncated power series in non-commuting letters with complex coefficients.
///
/// Storage is sparse: absent words have coefficient zero. Words longer than
/// the truncation degree are never stored; products discard them.
class NCSeries {
public:
    NCSeries(int alphabet_size, int truncation);

    static NCSeries unit(int alphabet_size, int truncation);
    static NCSeries letter(int alphabet_size, int truncation, int index, Complex coeff = 1.0);

    int alphabet_size() const { return n_; }
    int truncation() const { return degree_; }

    Complex operator[](const Word& w) const;
    Complex constant_term() const { return (*this)[Word{}]; }

    /// Sets a coefficient. Zero values erase the entry.
    void set(const Word& w, Complex value);
    void add(const Word& w, Complex value);

    const std::map<Word, Complex>& terms() const { return coeffs_; }

    NCSeries& operator+=(const NCSeries& other);
    NCSeries& operator-=(const NCSeries& other);
    NCSeries& operator*=(Complex s);

    friend NCSeries operator+(NCSeries a, const NCSeries& b) { return a += b; }
    friend NCSeries operator-(NCSeries a, const NCSeries& b) { return a -= b; }
    friend NCSeries operator*(NCSeries a, Complex s) { return a *= s; }
    friend NCSeries operator*(Complex s, NCSeries a) { return a *= s; }
    friend NCSeries operator*(const NCSeries& a, const NCSeries& b);

    /// max_w |a(w) - b(w)|
    double max_abs_difference(const NCSeries& other) const;
    /// Entry d holds max |coefficient| over words of length d.
    std::vector<double> max_abs_by_degree() const;

    /// Same coefficients with a smaller truncation degree.
    NCSeries truncated(int degree) const;

    bool compatible_with(const NCSeries& other) const
    {
        return n_ == other.n_ && degree_ == other.degree_;
    }

private:
    void check_word(const Word& w) const;

    int n_;
    int degree_;
    std::map<Word, Complex> coeffs_;
};

/// Concatenation (Cauchy) product: (ab)(w) = sum over w = uv of a(u) b(v).
NCSeries concat_mul(const NCSeries& a, const NCSeries& b);

/// Multiplicative inverse; requires constant term exactly 1.
NCSeries inverse(const NCSeries& a);

/// Coefficient of w in the result is (-1)^|w| a(reversed w).
NCSeries reverse_antipode(const NCSeries& a);

/// Exponential of a series with zero constant term.
NCSeries exp_series(const NCSeries& a);

/// All shuffles of u and v, with multiplicity.
std::vector<Word> shuffle_words(const Word& u, const Word& v);

/// max over |u|+|v| <= N of |a(u) a(v) - sum_{w in u ш v} a(w)|.
double grouplike_defect(const NCSeries& a);

}  // namespace chenrecip
