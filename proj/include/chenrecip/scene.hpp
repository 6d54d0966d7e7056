#pragma once

#include "chenrecip/reciprocity.hpp"

#include <map>
#include <string>
#include <vector>

namespace chenrecip {

/// Check names accepted in scene files and on the command line.
inline const std::vector<std::string> kKnownChecks{"residue", "riemann", "weil", "triple", "global", "shuffle"};

/// How a form was written in the scene file; kept for checks that need the
/// underlying function (Weil reciprocity reads f and g back from dlog forms).
struct FormSource {
    std::string type;  // "rational", "dlog" or "elliptic3k"
    Polynomial num, den;
    Complex a, b, scale{1.0};
};

struct SceneSpec {
    std::string name;
    SurfaceScene surface;
    std::vector<FormSource> sources;
    int truncation = 3;
    double default_tolerance = 1e-6;
    std::map<std::string, double> check_tolerances;  // overrides by check name
    std::vector<std::string> checks;
    double epsilon = 1e-3;  // keyhole radius for loop-based checks

    double tolerance_for(const std::string& check) const;
};

/// Reads and validates a scene file. InvalidInput names the offending field
/// ("forms[1].den"); PreconditionError when a requested check's hypotheses
/// (disjoint poles, keyhole layout) fail.
SceneSpec load_scene(const std::string& path);
SceneSpec parse_scene(const std::string& json_text);

/// Hypotheses of the requested checks; run by parse_scene and again after
/// the check list is overridden.
void check_scene_preconditions(const SceneSpec& spec);

/// Splits "a,b,c" and validates each name.
std::vector<std::string> parse_check_list(const std::string& list);

}  // namespace chenrecip
