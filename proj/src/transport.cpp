#include "chenrecip/transport.hpp"

#include "chenrecip/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace chenrecip {

namespace {

constexpr int kNodes = 17;
constexpr std::size_t kMaxIntervals = 200000;
// Relative disagreement attributable to rounding in the composition sums.
constexpr double kRoundoffFloor = 2048 * std::numeric_limits<double>::epsilon();

// Chebyshev-Lobatto nodes on [-1, 1] in increasing order, and the matrix
// mapping node values of f to node values of its integral from -1.
struct Spectral {
    std::array<double, kNodes> x{};
    Eigen::Matrix<double, kNodes, kNodes> q;

    Spectral()
    {
        using std::numbers::pi;
        for (int j = 0; j < kNodes; ++j) {
            x[j] = -std::cos(pi * j / (kNodes - 1));
        }
        Eigen::Matrix<double, kNodes, kNodes> vander;  // T_k(x_j)
        for (int j = 0; j < kNodes; ++j) {
            for (int k = 0; k < kNodes; ++k) {
                vander(j, k) = std::cos(k * std::acos(std::clamp(x[j], -1.0, 1.0)));
            }
        }
        // Antiderivatives of T_k, expressed in T_0..T_{kNodes}.
        Eigen::Matrix<double, kNodes + 1, kNodes> anti = Eigen::Matrix<double, kNodes + 1, kNodes>::Zero();
        anti(1, 0) = 1.0;
        if (kNodes > 1) {
            anti(2, 1) = 0.25;
        }
        for (int k = 2; k < kNodes; ++k) {
            anti(k + 1, k) = 1.0 / (2.0 * (k + 1));
            anti(k - 1, k) = -1.0 / (2.0 * (k - 1));
        }
        Eigen::Matrix<double, kNodes, kNodes + 1> eval;  // T_k(x_j) - T_k(-1)
        for (int j = 0; j < kNodes; ++j) {
            for (int k = 0; k <= kNodes; ++k) {
                const double tk = std::cos(k * std::acos(std::clamp(x[j], -1.0, 1.0)));
                eval(j, k) = tk - ((k % 2 == 0) ? 1.0 : -1.0);
            }
        }
        q = eval * anti * vander.inverse();
    }
};

const Spectral& spectral()
{
    static const Spectral s;
    return s;
}

// Words closed under taking contiguous subwords, ordered by length.
struct WordTable {
    std::vector<Word> words;
    std::vector<int> parent;  // index of the word minus its last letter
    std::vector<int> last;    // last letter
    std::vector<std::vector<std::pair<int, int>>> splits;  // (prefix, suffix) for each cut
    int max_length = 0;

    explicit WordTable(const std::vector<Word>& targets)
    {
        std::vector<Word> all{Word{}};
        for (const Word& w : targets) {
            for (std::size_t i = 0; i < w.size(); ++i) {
                for (std::size_t j = i + 1; j <= w.size(); ++j) {
                    all.emplace_back(w.begin() + static_cast<long>(i), w.begin() + static_cast<long>(j));
                }
            }
        }
        std::sort(all.begin(), all.end(), [](const Word& a, const Word& b) {
            return a.size() != b.size() ? a.size() < b.size() : a < b;
        });
        all.erase(std::unique(all.begin(), all.end()), all.end());
        words = std::move(all);
        auto find = [this](const Word& w) {
            auto it = std::lower_bound(words.begin(), words.end(), w, [](const Word& a, const Word& b) {
                return a.size() != b.size() ? a.size() < b.size() : a < b;
            });
            return static_cast<int>(it - words.begin());
        };
        parent.resize(words.size(), -1);
        last.resize(words.size(), -1);
        splits.resize(words.size());
        for (std::size_t k = 1; k < words.size(); ++k) {
            const Word& w = words[k];
            max_length = std::max(max_length, static_cast<int>(w.size()));
            parent[k] = find(Word(w.begin(), w.end() - 1));
            last[k] = w.back();
            for (std::size_t cut = 0; cut <= w.size(); ++cut) {
                splits[k].emplace_back(find(Word(w.begin(), w.begin() + static_cast<long>(cut))),
                                       find(Word(w.begin() + static_cast<long>(cut), w.end())));
            }
        }
    }

    std::size_t size() const { return words.size(); }
};

using Values = std::vector<Complex>;

Values identity_values(const WordTable& table)
{
    Values v(table.size());
    v[0] = 1.0;
    return v;
}

Values compose(const WordTable& table, const Values& left, const Values& right)
{
    Values out(table.size());
    out[0] = 1.0;
    for (std::size_t k = 1; k < table.size(); ++k) {
        Complex s{};
        for (const auto& [u, v] : table.splits[k]) {
            s += left[u] * right[v];
        }
        out[k] = s;
    }
    return out;
}

class SegmentSolver {
public:
    SegmentSolver(const FormAssignment& forms, const PathSegment& segment, const WordTable& table, double tol)
        : forms_(forms), segment_(segment), table_(table), tol_(tol),
          error_(static_cast<std::size_t>(table.max_length) + 1, 0.0)
    {
    }

    Values run()
    {
        Values whole = solve(0.0, 1.0);
        return adapt(0.0, 1.0, whole);
    }

    const std::vector<double>& error() const { return error_; }

private:
    Values solve(double a, double b)
    {
        if (++intervals_ > kMaxIntervals) {
            throw ConvergenceFailure("transport: interval budget exhausted");
        }
        const Spectral& sp = spectral();
        const std::size_t nf = forms_.size();
        std::vector<Eigen::Matrix<Complex, kNodes, 1>> h(nf);
        for (int j = 0; j < kNodes; ++j) {
            // Nodes in the upper half are placed relative to t = 1 so that
            // paths ending next to a pole keep full relative resolution.
            double t = 0.0;
            Complex z;
            if (a >= 0.5) {
                const double u = (1.0 - b) + (b - a) * (1.0 - sp.x[j]) / 2.0;
                t = 1.0 - u;
                z = segment_.point_from_end(u);
            } else {
                t = a + (b - a) * (sp.x[j] + 1.0) / 2.0;
                z = segment_.point(t);
            }
            const Complex dz = segment_.derivative(t);
            for (std::size_t i = 0; i < nf; ++i) {
                if (forms_[i].distance_to_nearest_pole(z) < kPoleProximityThreshold) {
                    std::ostringstream os;
                    os << "transport: path passes within " << kPoleProximityThreshold << " of a pole of form "
                       << i + 1 << " near " << z;
                    throw PoleProximity(os.str());
                }
                h[i](j) = forms_[i].coefficient(z) * dz;
            }
        }
        const double half = (b - a) / 2.0;
        std::vector<Eigen::Matrix<Complex, kNodes, 1>> vals(table_.size());
        vals[0].setOnes();
        Values end(table_.size());
        end[0] = 1.0;
        for (std::size_t k = 1; k < table_.size(); ++k) {
            const auto integrand = vals[table_.parent[k]].cwiseProduct(h[table_.last[k]]);
            vals[k] = half * (sp.q.cast<Complex>() * integrand);
            end[k] = vals[k](kNodes - 1);
        }
        return end;
    }

    Values adapt(double a, double b, const Values& whole)
    {
        const double mid = (a + b) / 2.0;
        Values left = solve(a, mid);
        Values right = solve(mid, b);
        Values joined = compose(table_, left, right);
        double worst = 0.0;
        std::vector<double> diff(error_.size(), 0.0);
        for (std::size_t k = 1; k < table_.size(); ++k) {
            const double d = std::abs(joined[k] - whole[k]);
            double scale = 1.0;
            for (const auto& [u, v] : table_.splits[k]) {
                scale = std::max(scale, std::abs(left[u] * right[v]));
            }
            const double rel = d / scale;
            worst = std::max(worst, rel);
            const std::size_t deg = table_.words[k].size();
            diff[deg] = std::max(diff[deg], d);
        }
        if (worst <= std::max(tol_ * (b - a), kRoundoffFloor) || !std::isfinite(worst)) {
            if (!std::isfinite(worst)) {
                throw ConvergenceFailure("transport: non-finite values");
            }
            for (std::size_t d = 0; d < diff.size(); ++d) {
                error_[d] += diff[d];
            }
            return joined;
        }
        if (b - a < kStepFloor) {
            throw ConvergenceFailure("transport: step size fell below the floor");
        }
        return compose(table_, adapt(a, mid, left), adapt(mid, b, right));
    }

    const FormAssignment& forms_;
    const PathSegment& segment_;
    const WordTable& table_;
    double tol_;
    std::vector<double> error_;
    std::size_t intervals_ = 0;
};

struct Run {
    Values values;
    std::vector<double> error;
};

Run run_table(const FormAssignment& forms, const Path& path, const WordTable& table, double tol)
{
    if (forms.empty()) {
        throw InvalidInput("transport: empty form assignment");
    }
    if (!(tol > 0.0)) {
        throw InvalidInput("transport: tolerance must be positive");
    }
    for (std::size_t k = 1; k < table.size(); ++k) {
        if (table.last[k] < 0 || table.last[k] >= static_cast<int>(forms.size())) {
            throw InvalidInput("transport: word uses a letter without a form");
        }
    }
    Run run{identity_values(table), std::vector<double>(static_cast<std::size_t>(table.max_length) + 1, 0.0)};
    for (const PathSegment& seg : path.segments()) {
        SegmentSolver solver(forms, seg, table, tol);
        run.values = compose(table, run.values, solver.run());
        for (std::size_t d = 0; d < run.error.size(); ++d) {
            run.error[d] += solver.error()[d];
        }
    }
    return run;
}

}  // namespace

TransportResult transport_series(const FormAssignment& forms, const Path& path, int degree, double tol)
{
    if (degree < 0) {
        throw InvalidInput("transport: negative truncation degree");
    }
    const int n = static_cast<int>(forms.size());
    std::vector<Word> targets;
    for (const Word& w : words_up_to(std::max(n, 1), degree)) {
        if (static_cast<int>(w.size()) == degree) {
            targets.push_back(w);
        }
    }
    const WordTable table(targets);
    const Run run = run_table(forms, path, table, tol);
    TransportResult out{NCSeries(std::max(n, 1), degree), run.error, path};
    out.estimated_error.resize(static_cast<std::size_t>(degree) + 1, 0.0);
    for (std::size_t k = 0; k < table.size(); ++k) {
        out.series.set(table.words[k], run.values[k]);
    }
    return out;
}

std::map<Word, Complex> transport_words(const FormAssignment& forms, const Path& path, const std::vector<Word>& words,
                                        double tol)
{
    const WordTable table(words);
    const Run run = run_table(forms, path, table, tol);
    std::map<Word, Complex> out;
    for (const Word& w : words) {
        const auto it = std::lower_bound(table.words.begin(), table.words.end(), w, [](const Word& a, const Word& b) {
            return a.size() != b.size() ? a.size() < b.size() : a < b;
        });
        out[w] = run.values[static_cast<std::size_t>(it - table.words.begin())];
    }
    return out;
}

Complex iterated_integral(const std::vector<MeromorphicForm>& forms, const Path& path, double tol)
{
    if (forms.empty()) {
        return 1.0;
    }
    Word w(forms.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = static_cast<int>(i);
    }
    return transport_words(forms, path, {w}, tol).at(w);
}

}  // namespace chenrecip
