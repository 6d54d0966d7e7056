#include "doctest.h"

#include "chenrecip/errors.hpp"
#include "chenrecip/report.hpp"
#include "chenrecip/scene.hpp"

#include <string>

using namespace chenrecip;

namespace {

const std::string kScenes = CHENRECIP_TEST_DATA;

std::string minimal(const std::string& extra = "")
{
    return R"({"surface": {"genus": 0}, "forms": [{"type": "rational", "num": [1], "den": [0, 1]}], "basepoint": [0.7, 0.4])" +
           extra + "}";
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("minimal scene loads")
{
    const auto spec = parse_scene(minimal());
    CHECK(spec.surface.genus == 0);
    CHECK(spec.surface.forms.size() == 1);
    CHECK(spec.truncation == 3);
    CHECK(spec.checks.empty());
    CHECK(load_scene(kScenes + "/dz_over_z.json").name == "dz_over_z");
}

TEST_CASE("schema errors name the field")
{
    auto message = [](const std::string& text) {
        try {
            parse_scene(text);
        } catch (const InvalidInput& e) {
            return std::string(e.what());
        }
        return std::string("accepted");
    };
    CHECK(message(R"({"surface": {"genus": 1, "tau": [0.5, -1]}, "forms": [], "basepoint": 0})").find("surface.tau") !=
          std::string::npos);
    CHECK(message(R"({"surface": {"genus": 0}, "forms": [{"type": "rational", "num": [1]}], "basepoint": 0})")
              .find("forms[0].den") != std::string::npos);
    CHECK(message(minimal(R"(, "truncation": 9)")).find("truncation") != std::string::npos);
    CHECK(message(minimal(R"(, "checks": ["residue", "bogus"])")).find("checks[1]") != std::string::npos);
    CHECK(message(R"({"surface": {"genus": 0}, "forms": [{"type": "rational", "num": [1], "den": [0, 1]}], "basepoint": 0})")
              .find("basepoint") != std::string::npos);
    CHECK(message("{not json").find("JSON") != std::string::npos);
    CHECK(message(R"({"surface": {"genus": 0}, "forms": [{"type": "elliptic3k", "a": 0, "b": 1}], "basepoint": 2})")
              .find("forms[0].type") != std::string::npos);
}

TEST_CASE("requested checks surface their preconditions at load time")
{
    SceneSpec shared = load_scene(kScenes + "/shared_pole.json");
    shared.checks = {"riemann"};
    CHECK_THROWS_AS(check_scene_preconditions(shared), PreconditionError);
    CHECK_THROWS_AS(parse_scene(minimal(R"(, "checks": ["triple"])")), PreconditionError);
    CHECK_NOTHROW(parse_scene(minimal(R"(, "checks": ["residue", "global"])")));
}

TEST_CASE("check lists")
{
    CHECK(parse_check_list("residue,weil,residue") == std::vector<std::string>{"residue", "weil"});
    CHECK(parse_check_list("").empty());
    CHECK_THROWS_AS(parse_check_list("residue,nope"), InvalidInput);
}

TEST_CASE("residue, shuffle and weil on a genus 0 scene")
{
    const auto spec = load_scene(kScenes + "/two_dlog_genus0.json");
    const auto report = run_checks(spec, {"residue", "shuffle", "weil"});
    REQUIRE(report.checks.size() == 3);
    CHECK(report.checks[0].name == "residue");
    CHECK(report.checks[2].name == "weil");
    for (const auto& c : report.checks) {
        CAPTURE(c.name);
        CAPTURE(c.error);
        CHECK(c.passed);
    }
    CHECK(exit_code(report) == 0);
}

TEST_CASE("empty check list gives an empty passing report")
{
    const auto report = run_checks(parse_scene(minimal()), {});
    CHECK(report.checks.empty());
    CHECK(exit_code(report) == 0);
    const auto back = report_from_json(emit_report(report, ReportFormat::Json));
    CHECK(back.checks.empty());
}

TEST_CASE("impossible tolerance fails with the defect recorded")
{
    auto spec = load_scene(kScenes + "/two_dlog_genus0.json");
    spec.default_tolerance = 1e-300;
    spec.check_tolerances.clear();
    const auto report = run_checks(spec, {"global"});
    CHECK_FALSE(report.passed());
    CHECK(exit_code(report) == 1);
    CHECK(report.checks[0].error.empty());
    CHECK(report.checks[0].defect > 0.0);
}

TEST_CASE("errors inside a check stay inside that check")
{
    const auto spec = parse_scene(minimal());
    const auto report = run_checks(spec, {"weil", "residue"});
    REQUIRE(report.checks.size() == 2);
    CHECK_FALSE(report.checks[0].passed);
    CHECK_FALSE(report.checks[0].error.empty());
    CHECK(report.checks[1].passed);
}

TEST_CASE("json reports round-trip with full precision")
{
    const auto spec = load_scene(kScenes + "/two_dlog_genus0.json");
    const auto report = run_checks(spec, {"residue", "global"});
    const auto back = report_from_json(emit_report(report, ReportFormat::Json));
    REQUIRE(back.checks.size() == report.checks.size());
    for (std::size_t i = 0; i < back.checks.size(); ++i) {
        CHECK(back.checks[i].name == report.checks[i].name);
        CHECK(back.checks[i].passed == report.checks[i].passed);
        CHECK(back.checks[i].defect == report.checks[i].defect);
        CHECK(back.checks[i].metrics == report.checks[i].metrics);
    }
    const std::string text = emit_report(back, ReportFormat::Text);
    CHECK(text.find("PASS global") != std::string::npos);
    CHECK(text.find("all checks passed") != std::string::npos);
}

TEST_CASE("same scene, same verdicts")
{
    const auto spec = load_scene(kScenes + "/triple_genus0.json");
    const auto a = run_checks(spec, spec.checks);
    const auto b = run_checks(spec, spec.checks);
    REQUIRE(a.checks.size() == b.checks.size());
    for (std::size_t i = 0; i < a.checks.size(); ++i) {
        CHECK(a.checks[i].passed == b.checks[i].passed);
        CHECK(a.checks[i].defect == b.checks[i].defect);
    }
}

}
