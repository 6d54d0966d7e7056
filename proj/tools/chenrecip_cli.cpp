#include "chenrecip/errors.hpp"
#include "chenrecip/modular.hpp"
#include "chenrecip/report.hpp"
#include "chenrecip/scene.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace chenrecip;

namespace {

constexpr int kExitInputError = 2;

ReportFormat parse_format(const std::string& s)
{
    if (s == "json") return ReportFormat::Json;
    if (s == "text") return ReportFormat::Text;
    throw InvalidInput("--report must be json or text");
}

nlohmann::ordered_json complex_json(Complex z)
{
    return nlohmann::ordered_json::array({z.real(), z.imag()});
}

std::string complex_text(Complex z)
{
    std::ostringstream os;
    z += Complex(0.0, 0.0);  // no negative zeros in the output
    os << std::setprecision(17) << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return os.str();
}

struct VerifyArgs {
    std::string scene;
    std::string checks;
    int degree = 0;
    double tol = 0.0;
    std::string report = "text";
};

int run_verify(const VerifyArgs& a)
{
    SceneSpec spec = load_scene(a.scene);
    if (!a.checks.empty()) spec.checks = parse_check_list(a.checks);
    if (a.degree > 0) spec.truncation = a.degree;
    if (a.tol > 0.0) {
        spec.default_tolerance = a.tol;
        spec.check_tolerances.clear();
    }
    check_scene_preconditions(spec);
    const ReportFormat format = parse_format(a.report);
    const Report report = run_checks(spec, spec.checks);
    std::cout << emit_report(report, format);
    return exit_code(report);
}

struct LValueArgs {
    std::string qexp;
    std::vector<int> n;
    double tol = 1e-10;
    double agreement = 1e-6;
    std::string report = "text";
};

int run_lvalue(const LValueArgs& a)
{
    const QExpansion f = read_qexpansion(a.qexp);
    if (!f.is_cusp()) throw InvalidInput("lvalue: the q-expansion must be a cusp form");
    const ReportFormat format = parse_format(a.report);
    nlohmann::ordered_json doc;
    doc["weight"] = f.weight;
    doc["cutoff"] = f.cutoff();
    doc["results"] = nlohmann::ordered_json::array();
    bool ok = true;
    std::ostringstream text;
    if (a.n.size() == 1) {
        const int n = a.n.front();
        const Complex it = lvalue_iterated(f, n);
        const CompletedLValue lam = lvalue_oracle(f, n + 1.0, a.tol);
        const Complex oracle = lvalue_iterated_oracle(f, n, a.tol);
        const double rel = std::abs(it - oracle) / std::abs(oracle);
        ok = rel <= a.agreement;
        doc["results"].push_back({{"n", n},
                                  {"iterated", complex_json(it)},
                                  {"completed_lvalue", complex_json(lam.value)},
                                  {"oracle", complex_json(oracle)},
                                  {"relative_error", rel},
                                  {"self_check", lam.self_check},
                                  {"passed", ok}});
        text << "n = " << n << "\n  (n+1)! * iterated integral = " << complex_text(it)
             << "\n  Lambda(f, n+1)             = " << complex_text(lam.value)
             << "\n  oracle (n+1)(-i)^(n+1) Lambda = " << complex_text(oracle)
             << "\n  relative error " << rel << ", functional equation self-check " << lam.self_check << "\n";
    } else {
        const Complex it = multiple_lvalue_iterated(f, a.n);
        doc["results"].push_back({{"n", a.n}, {"iterated", complex_json(it)}});
        text << "multiple value for (";
        for (std::size_t i = 0; i < a.n.size(); ++i) text << (i ? "," : "") << a.n[i];
        text << ") = " << complex_text(it) << "\n";
    }
    doc["passed"] = ok;
    if (format == ReportFormat::Json) std::cout << std::setprecision(17) << doc.dump(2) << "\n";
    else {
        std::cout << std::setprecision(17) << text.str();
        // no second route for multiple values, so nothing to agree on
        if (a.n.size() == 1) std::cout << (ok ? "agreement ok\n" : "agreement FAILED\n");
    }
    return ok ? 0 : 1;
}

struct TameArgs {
    std::string scene;
    int pole = 0;
    int degree = 0;
    std::string report = "text";
};

int run_tame(const TameArgs& a)
{
    const SceneSpec spec = load_scene(a.scene);
    const SurfaceScene& s = spec.surface;
    const int degree = a.degree > 0 ? a.degree : spec.truncation;
    const auto poles = pole_set(s.forms);
    if (a.pole < 0 || a.pole >= static_cast<int>(poles.size())) {
        throw InvalidInput("--pole must be between 0 and " + std::to_string(poles.size() - 1));
    }
    const PoleEntry& target = poles[a.pole];
    const Layout layout = make_layout(s);
    const KeyholeEntry* entry = nullptr;
    for (const auto& e : layout.entries) {
        const bool same = target.at_infinity ? e.at_infinity
                                             : (!e.at_infinity && (s.lattice ? s.lattice->distance_to_class(e.pole, target.point)
                                                                             : std::abs(e.pole - target.point)) < 1e-7);
        if (same) entry = &e;
    }
    if (!entry) throw PreconditionError("pole not found in the keyhole layout");
    const RegularizedSeries reg = keyhole_regularization(s, layout, *entry, degree);
    const NCSeries tame = keyhole_tame_symbol(s, *entry, reg, degree);

    if (parse_format(a.report) == ReportFormat::Json) {
        nlohmann::ordered_json doc;
        doc["pole"] = target.at_infinity ? nlohmann::ordered_json("infinity") : complex_json(target.point);
        doc["degree"] = degree;
        doc["coefficients"] = nlohmann::ordered_json::object();
        for (const auto& [w, c] : tame.terms()) doc["coefficients"][format_word(w)] = complex_json(c);
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "tame symbol at " << (target.at_infinity ? std::string("infinity") : complex_text(target.point))
                  << " through degree " << degree << "\n";
        for (const auto& [w, c] : tame.terms()) {
            std::cout << "  " << std::left << std::setw(12) << (w.empty() ? std::string("1") : format_word(w))
                      << complex_text(c) << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Chen iterated integrals, tame symbols and reciprocity checks"};
    app.require_subcommand(1);

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "run reciprocity checks on a scene file");
    verify->add_option("--scene", va.scene, "scene JSON file")->required();
    verify->add_option("--checks", va.checks, "comma-separated: residue,riemann,weil,triple,global,shuffle");
    verify->add_option("--degree", va.degree, "truncation degree (overrides the scene)");
    verify->add_option("--tol", va.tol, "tolerance for every check (overrides the scene)");
    verify->add_option("--report", va.report, "json or text");

    LValueArgs la;
    auto* lvalue = app.add_subcommand("lvalue", "L-values of a cusp form from iterated integrals");
    lvalue->add_option("--qexp", la.qexp, "q-expansion file")->required();
    lvalue->add_option("--n", la.n, "n, or several for the multiple value")->required()->expected(1, -1);
    lvalue->add_option("--tol", la.tol, "functional equation self-check tolerance");
    lvalue->add_option("--agreement", la.agreement, "relative tolerance between the two routes");
    lvalue->add_option("--report", la.report, "json or text");

    TameArgs ta;
    auto* tame = app.add_subcommand("tame-symbol", "tame symbol at one pole of a scene");
    tame->add_option("--scene", ta.scene, "scene JSON file")->required();
    tame->add_option("--pole", ta.pole, "index into the pole list of the scene")->required();
    tame->add_option("--degree", ta.degree, "truncation degree (overrides the scene)");
    tame->add_option("--report", ta.report, "json or text");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInputError;
    }

    try {
        if (*verify) return run_verify(va);
        if (*lvalue) return run_lvalue(la);
        if (*tame) return run_tame(ta);
    } catch (const InvalidInput& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition failed: " << e.what() << "\n";
        return kExitInputError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitInputError;
}
