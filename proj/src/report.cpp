#include "chenrecip/report.hpp"

#include "chenrecip/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <iomanip>
#include <sstream>

namespace chenrecip {

using nlohmann::ordered_json;

namespace {

using Metrics = std::vector<std::pair<std::string, double>>;

double max_of(const std::vector<double>& v)
{
    return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

void identity_metrics(const IdentityReport& r, Metrics& m)
{
    m.emplace_back("residue_terms_re", r.residue_terms.real());
    m.emplace_back("residue_terms_im", r.residue_terms.imag());
    m.emplace_back("cycle_terms_re", r.cycle_terms.real());
    m.emplace_back("cycle_terms_im", r.cycle_terms.imag());
    m.emplace_back("ordering_correction_abs", std::abs(r.ordering_correction));
    m.emplace_back("contiguous", r.contiguous ? 1.0 : 0.0);
}

// Grouplike defect of the transport around the first keyhole and of every
// regularized keyhole series.
double shuffle_defect(const SceneSpec& spec, Metrics& m)
{
    const SurfaceScene& s = spec.surface;
    const int n = spec.truncation;
    const Layout layout = make_layout(s);
    double worst = 0.0;
    for (const auto& e : layout.entries) {
        if (e.at_infinity) continue;
        const Path loop = keyhole_loop({s.base, e.pole, spec.epsilon});
        const double d = grouplike_defect(transport_series(s.forms, loop, n, s.tol).series);
        m.emplace_back("keyhole_loop", d);
        worst = std::max(worst, d);
        break;
    }
    double reg = 0.0;
    for (const auto& e : layout.entries) {
        reg = std::max(reg, grouplike_defect(keyhole_regularization(s, layout, e, n).series));
    }
    m.emplace_back("regularized_series", reg);
    return std::max(worst, reg);
}

double compute(const SceneSpec& spec, const std::string& check, double tol, bool& passed, Metrics& m)
{
    const SurfaceScene& s = spec.surface;
    if (check == "residue") {
        const ResidueReport r = residue_linear_check(s, tol);
        for (std::size_t i = 0; i < r.per_form.size(); ++i) m.emplace_back("form_" + std::to_string(i), r.per_form[i]);
        passed = r.passed;
        return r.max_defect;
    }
    if (check == "riemann" || check == "triple") {
        const IdentityReport r = check == "riemann" ? riemann_bilinear_check(s, tol) : triple_check(s, tol);
        identity_metrics(r, m);
        passed = r.passed;
        return r.defect;
    }
    if (check == "global") {
        const DefectReport r = global_reciprocity(s, spec.truncation, tol);
        for (std::size_t d = 0; d < r.max_by_degree.size(); ++d) m.emplace_back("degree_" + std::to_string(d), r.max_by_degree[d]);
        passed = r.passed;
        return max_of(r.max_by_degree);
    }
    if (check == "weil") {
        if (spec.sources.size() < 2 || spec.sources[0].type != "dlog" || spec.sources[1].type != "dlog") {
            throw PreconditionError("weil needs forms[0] and forms[1] of type dlog");
        }
        const WeilReport r = weil_check({spec.sources[0].num, spec.sources[0].den},
                                        {spec.sources[1].num, spec.sources[1].den}, tol);
        m.emplace_back("product_re", r.product.real());
        m.emplace_back("product_im", r.product.imag());
        m.emplace_back("cross_defect", r.cross_defect);
        passed = r.passed;
        return std::max(r.defect, r.cross_defect);
    }
    if (check == "shuffle") {
        const double d = shuffle_defect(spec, m);
        passed = d <= tol;
        return d;
    }
    throw InvalidInput("unknown check '" + check + "'");
}

std::string fmt(double x)
{
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

}  // namespace

bool Report::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

int exit_code(const Report& report)
{
    return report.passed() ? 0 : 1;
}

CheckResult run_check(const SceneSpec& spec, const std::string& check)
{
    CheckResult out;
    out.name = check;
    out.tolerance = spec.tolerance_for(check);
    const auto start = std::chrono::steady_clock::now();
    try {
        bool passed = false;
        out.defect = compute(spec, check, out.tolerance, passed, out.metrics);
        out.passed = passed;
    } catch (const std::exception& e) {
        out.passed = false;
        out.error = e.what();
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

Report run_checks(const SceneSpec& spec, const std::vector<std::string>& checks)
{
    Report report;
    report.scene = spec.name;
    report.truncation = spec.truncation;
    report.transport_tolerance = spec.surface.tol;
    std::vector<std::future<CheckResult>> pending;
    for (const auto& c : checks) {
        pending.push_back(std::async(std::launch::async, [&spec, c] { return run_check(spec, c); }));
    }
    for (auto& f : pending) report.checks.push_back(f.get());
    return report;
}

std::string emit_report(const Report& report, ReportFormat format)
{
    if (format == ReportFormat::Json) {
        ordered_json doc;
        doc["tool_version"] = report.tool_version;
        doc["scene"] = report.scene;
        doc["truncation"] = report.truncation;
        doc["transport_tolerance"] = report.transport_tolerance;
        doc["passed"] = report.passed();
        doc["checks"] = ordered_json::array();
        for (const auto& c : report.checks) {
            ordered_json jc;
            jc["name"] = c.name;
            jc["passed"] = c.passed;
            if (c.error.empty()) jc["defect"] = c.defect;
            else jc["defect"] = nullptr;
            jc["tolerance"] = c.tolerance;
            jc["seconds"] = c.seconds;
            if (!c.error.empty()) jc["error"] = c.error;
            ordered_json jm = ordered_json::object();
            for (const auto& [k, v] : c.metrics) jm[k] = v;
            jc["metrics"] = jm;
            doc["checks"].push_back(jc);
        }
        return doc.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "scene " << report.scene << "  truncation " << report.truncation << "  chenrecip "
       << report.tool_version << "\n";
    for (const auto& c : report.checks) {
        os << (c.passed ? "PASS " : "FAIL ") << std::left << std::setw(8) << c.name;
        if (c.error.empty()) os << " defect " << fmt(c.defect);
        else os << " error: " << c.error;
        os << "  tol " << fmt(c.tolerance) << "\n";
        for (const auto& [k, v] : c.metrics) os << "    " << k << " = " << fmt(v) << "\n";
    }
    os << (report.passed() ? "all checks passed" : "some checks failed") << " (" << report.checks.size()
       << " run)\n";
    return os.str();
}

Report report_from_json(const std::string& text)
{
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw InvalidInput(std::string("report: not valid JSON: ") + e.what());
    }
    Report r;
    r.tool_version = doc.value("tool_version", std::string());
    r.scene = doc.value("scene", std::string());
    r.truncation = doc.value("truncation", 0);
    r.transport_tolerance = doc.value("transport_tolerance", 0.0);
    for (const auto& jc : doc.value("checks", ordered_json::array())) {
        CheckResult c;
        c.name = jc.value("name", std::string());
        c.passed = jc.value("passed", false);
        if (jc.contains("defect") && jc["defect"].is_number()) c.defect = jc["defect"].get<double>();
        c.tolerance = jc.value("tolerance", 0.0);
        c.seconds = jc.value("seconds", 0.0);
        c.error = jc.value("error", std::string());
        if (jc.contains("metrics")) {
            for (const auto& [k, v] : jc["metrics"].items()) c.metrics.emplace_back(k, v.get<double>());
        }
        r.checks.push_back(std::move(c));
    }
    return r;
}

}  // namespace chenrecip
