#include "chenrecip/scene.hpp"

#include "chenrecip/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace chenrecip {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& field, const std::string& what)
{
    throw InvalidInput("scene: " + field + ": " + what);
}

Complex read_complex(const json& j, const std::string& field)
{
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    schema_error(field, "expected a number or an [re, im] pair");
}

Polynomial read_polynomial(const json& j, const std::string& field)
{
    if (!j.is_array() || j.empty()) schema_error(field, "expected a nonempty coefficient array, constant term first");
    std::vector<Complex> c;
    for (std::size_t i = 0; i < j.size(); ++i) c.push_back(read_complex(j[i], field + "[" + std::to_string(i) + "]"));
    Polynomial p(std::move(c));
    if (p.is_zero()) schema_error(field, "polynomial is zero");
    return p;
}

double read_positive(const json& j, const std::string& field)
{
    if (!j.is_number() || !(j.get<double>() > 0.0)) schema_error(field, "expected a positive number");
    return j.get<double>();
}

bool poles_disjoint(const MeromorphicForm& f, const MeromorphicForm& g)
{
    for (const auto& e : pole_set({f, g})) {
        if (std::abs(e.residues[0]) > 1e-12 && std::abs(e.residues[1]) > 1e-12) return false;
    }
    return true;
}

}  // namespace

void check_scene_preconditions(const SceneSpec& spec)
{
    const auto& forms = spec.surface.forms;
    auto wants = [&](const char* name) {
        return std::find(spec.checks.begin(), spec.checks.end(), name) != spec.checks.end();
    };
    if (wants("riemann")) {
        if (forms.size() < 2) throw PreconditionError("scene: check riemann needs two forms");
        if (!poles_disjoint(forms[0], forms[1])) {
            throw PreconditionError("scene: check riemann needs forms[0] and forms[1] without a common pole");
        }
    }
    if (wants("triple")) {
        if (forms.size() < 3) throw PreconditionError("scene: check triple needs three forms");
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                if (!poles_disjoint(forms[i], forms[j])) {
                    throw PreconditionError("scene: check triple needs pairwise disjoint poles (forms[" +
                                            std::to_string(i) + "], forms[" + std::to_string(j) + "])");
                }
    }
    if (wants("weil")) {
        if (spec.sources.size() < 2 || spec.sources[0].type != "dlog" || spec.sources[1].type != "dlog") {
            throw PreconditionError("scene: check weil needs forms[0] and forms[1] of type dlog");
        }
    }
    if (wants("global") || wants("shuffle")) {
        make_layout(spec.surface);  // surfaces layout failures at load time
    }
}

double SceneSpec::tolerance_for(const std::string& check) const
{
    const auto it = check_tolerances.find(check);
    return it == check_tolerances.end() ? default_tolerance : it->second;
}

std::vector<std::string> parse_check_list(const std::string& list)
{
    std::vector<std::string> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        if (std::find(kKnownChecks.begin(), kKnownChecks.end(), item) == kKnownChecks.end()) {
            throw InvalidInput("unknown check '" + item + "'");
        }
        if (std::find(out.begin(), out.end(), item) == out.end()) out.push_back(item);
    }
    return out;
}

SceneSpec parse_scene(const std::string& json_text)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("scene: not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) schema_error("(root)", "expected an object");

    SceneSpec spec;
    spec.name = doc.value("name", std::string("scene"));

    // surface
    if (!doc.contains("surface") || !doc["surface"].is_object()) schema_error("surface", "missing");
    const json& surf = doc["surface"];
    if (!surf.contains("genus") || !surf["genus"].is_number_integer()) schema_error("surface.genus", "expected 0 or 1");
    spec.surface.genus = surf["genus"].get<int>();
    if (spec.surface.genus == 1) {
        if (!surf.contains("tau")) schema_error("surface.tau", "required for genus 1");
        const Complex tau = read_complex(surf["tau"], "surface.tau");
        if (!(tau.imag() > 0.0)) schema_error("surface.tau", "Im tau must be positive");
        spec.surface.lattice = Lattice(tau);
    } else if (spec.surface.genus != 0) {
        schema_error("surface.genus", "expected 0 or 1");
    }

    // forms
    if (!doc.contains("forms") || !doc["forms"].is_array() || doc["forms"].empty()) {
        schema_error("forms", "expected a nonempty array");
    }
    for (std::size_t i = 0; i < doc["forms"].size(); ++i) {
        const std::string field = "forms[" + std::to_string(i) + "]";
        const json& jf = doc["forms"][i];
        if (!jf.is_object() || !jf.contains("type") || !jf["type"].is_string()) {
            schema_error(field + ".type", "expected rational, dlog or elliptic3k");
        }
        FormSource src;
        src.type = jf["type"].get<std::string>();
        try {
            if (src.type == "rational" || src.type == "dlog") {
                if (spec.surface.genus != 0) schema_error(field + ".type", "sphere forms need genus 0");
                if (!jf.contains("num")) schema_error(field + ".num", "missing");
                if (!jf.contains("den")) schema_error(field + ".den", "missing");
                src.num = read_polynomial(jf["num"], field + ".num");
                src.den = read_polynomial(jf["den"], field + ".den");
                spec.surface.forms.push_back(src.type == "rational" ? MeromorphicForm::rational(src.num, src.den)
                                                                    : MeromorphicForm::dlog(src.num, src.den));
            } else if (src.type == "elliptic3k") {
                if (spec.surface.genus != 1) schema_error(field + ".type", "elliptic3k forms need genus 1");
                if (!jf.contains("a")) schema_error(field + ".a", "missing");
                if (!jf.contains("b")) schema_error(field + ".b", "missing");
                src.a = read_complex(jf["a"], field + ".a");
                src.b = read_complex(jf["b"], field + ".b");
                if (jf.contains("scale")) src.scale = read_complex(jf["scale"], field + ".scale");
                spec.surface.forms.push_back(
                    MeromorphicForm::elliptic(*spec.surface.lattice, src.a, src.b, src.scale));
            } else {
                schema_error(field + ".type", "unknown form type '" + src.type + "'");
            }
        } catch (const InvalidInput& e) {
            const std::string msg = e.what();
            if (msg.rfind("scene:", 0) == 0) throw;
            schema_error(field, msg);
        }
        spec.sources.push_back(std::move(src));
    }

    // base point
    if (!doc.contains("basepoint")) schema_error("basepoint", "missing");
    spec.surface.base = read_complex(doc["basepoint"], "basepoint");
    for (std::size_t i = 0; i < spec.surface.forms.size(); ++i) {
        if (spec.surface.forms[i].distance_to_nearest_pole(spec.surface.base) < 1e-6) {
            schema_error("basepoint", "lies on a pole of forms[" + std::to_string(i) + "]");
        }
    }

    if (doc.contains("truncation")) {
        if (!doc["truncation"].is_number_integer()) schema_error("truncation", "expected an integer");
        spec.truncation = doc["truncation"].get<int>();
        if (spec.truncation < 1 || spec.truncation > 6) schema_error("truncation", "expected 1..6");
    }
    if (doc.contains("epsilon")) spec.epsilon = read_positive(doc["epsilon"], "epsilon");

    if (doc.contains("tolerances")) {
        const json& jt = doc["tolerances"];
        if (!jt.is_object()) schema_error("tolerances", "expected an object");
        for (const auto& [key, value] : jt.items()) {
            const double t = read_positive(value, "tolerances." + key);
            if (key == "default") spec.default_tolerance = t;
            else if (key == "transport") spec.surface.tol = t;
            else if (std::find(kKnownChecks.begin(), kKnownChecks.end(), key) != kKnownChecks.end()) {
                spec.check_tolerances[key] = t;
            } else {
                schema_error("tolerances." + key, "unknown key");
            }
        }
    }

    if (doc.contains("checks")) {
        const json& jc = doc["checks"];
        if (!jc.is_array()) schema_error("checks", "expected an array of names");
        for (std::size_t i = 0; i < jc.size(); ++i) {
            const std::string field = "checks[" + std::to_string(i) + "]";
            if (!jc[i].is_string()) schema_error(field, "expected a string");
            const std::string name = jc[i].get<std::string>();
            if (std::find(kKnownChecks.begin(), kKnownChecks.end(), name) == kKnownChecks.end()) {
                schema_error(field, "unknown check '" + name + "'");
            }
            if (std::find(spec.checks.begin(), spec.checks.end(), name) == spec.checks.end()) {
                spec.checks.push_back(name);
            }
        }
    }

    check_scene_preconditions(spec);
    return spec;
}

SceneSpec load_scene(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InvalidInput("scene: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scene(buf.str());
}

}  // namespace chenrecip
