#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "coupled_fp/coupled_map.hpp"
#include "coupled_fp/expression.hpp"
#include "coupled_fp/space.hpp"

namespace cfp {

struct ProblemSpec {
    std::string name;
    SpaceDescriptor space;
    CoupledMapDef map;
    Point x0;
    Point y0;
    std::optional<ContractionParams> suggested_params;
    std::optional<PairPoint> expected_fixed_pair;
    /// Comparable pairs always included when certifying this problem.
    std::vector<ComparablePair> adversarial_pairs;
};

/// Names accepted by make_builtin, in catalog order.
const std::vector<std::string>& builtin_names();

/// One-line description of a builtin, for listings.
std::string_view builtin_description(std::string_view name);

/// Builtin problems:
///   linear_demo    d = 1, F(x,y) = (x - y)/4 on [-2, 2]
///   affine_demo    d = 1, F(x,y) = x/3 - y/4 + 1 on [-4, 4]
///   integral_demo  d = N (default 16), a discretized Hammerstein-type
///                  operator on [-1, 2]^N, max metric
/// `dim` is only accepted for integral_demo. Throws InputError for unknown
/// names.
ProblemSpec make_builtin(std::string_view name, std::optional<std::size_t> dim = std::nullopt);

/// F_i(x, y) given by one expression per output coordinate.
CoupledMapDef expression_map(std::string name, Box domain_box,
                             const std::vector<std::string>& components);

/// Builds and validates a problem from a config document; see README for
/// the schema. Unknown fields are rejected with InputError.
ProblemSpec build_problem(const nlohmann::json& config);

/// Parses JSON text and calls build_problem. Throws InputError on bad JSON.
ProblemSpec build_problem_from_text(std::string_view text);

}  // namespace cfp
