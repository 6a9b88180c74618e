#include "coupled_fp/problems.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "coupled_fp/errors.hpp"

namespace cfp {

namespace {

using nlohmann::json;

ProblemSpec linear_demo() {
    CoupledMapDef map("linear_demo", Box::cube(1, -2.0, 2.0),
                      [](std::span<const double> x, std::span<const double> y) {
                          return std::vector<double>{(x[0] - y[0]) / 4.0};
                      });
    ProblemSpec p{"linear_demo",
                  SpaceDescriptor(1, Metric::euclidean),
                  std::move(map),
                  Point{-1.0},
                  Point{1.0},
                  ContractionParams(0.1, 0.5),
                  PairPoint(Point{0.0}, Point{0.0}),
                  {}};
    // M vanishes near y = -3x, where beta < 1/2 first fails
    p.adversarial_pairs.push_back(
        {PairPoint(Point{0.1}, Point{-0.29}), PairPoint(Point{0.01}, Point{-0.02})});
    return p;
}

ProblemSpec affine_demo() {
    CoupledMapDef map("affine_demo", Box::cube(1, -4.0, 4.0),
                      [](std::span<const double> x, std::span<const double> y) {
                          return std::vector<double>{x[0] / 3.0 - y[0] / 4.0 + 1.0};
                      });
    const double c = 12.0 / 11.0;
    return ProblemSpec{"affine_demo",
                       SpaceDescriptor(1, Metric::euclidean),
                       std::move(map),
                       Point{0.0},
                       Point{3.0},
                       ContractionParams(0.1, 2.0 / 3.0),
                       PairPoint(Point{c}, Point{c}),
                       {}};
}

// F(x,y)_i = 1/4 + (1/(4N)) sum_j K(t_i,t_j) [s(x_j) - s(y_j)] with
// K(s,t) = exp(-|s-t|), s(t) = t/(1+|t|), t_i = i/N.
ProblemSpec integral_demo(std::size_t n) {
    if (n == 0) throw InputError("integral_demo needs dim >= 1");
    auto kernel = std::make_shared<std::vector<double>>(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double ti = static_cast<double>(i) / static_cast<double>(n);
            const double tj = static_cast<double>(j) / static_cast<double>(n);
            (*kernel)[i * n + j] = std::exp(-std::abs(ti - tj));
        }
    }
    const double weight = 1.0 / (4.0 * static_cast<double>(n));
    CoupledMapDef map("integral_demo", Box::cube(n, -1.0, 2.0),
                      [kernel, n, weight](std::span<const double> x, std::span<const double> y) {
                          std::vector<double> diff(n);
                          for (std::size_t j = 0; j < n; ++j) {
                              diff[j] = x[j] / (1.0 + std::abs(x[j])) -
                                        y[j] / (1.0 + std::abs(y[j]));
                          }
                          std::vector<double> out(n);
                          for (std::size_t i = 0; i < n; ++i) {
                              double acc = 0.0;
                              for (std::size_t j = 0; j < n; ++j) acc += (*kernel)[i * n + j] * diff[j];
                              out[i] = 0.25 + weight * acc;
                          }
                          return out;
                      });
    return ProblemSpec{"integral_demo",
                       SpaceDescriptor(n, Metric::max),
                       std::move(map),
                       Point::filled(n, 0.0),
                       Point::filled(n, 1.0),
                       ContractionParams(0.05, 0.5),
                       std::nullopt,
                       {}};
}

constexpr std::size_t kIntegralDefaultDim = 16;

}  // namespace

const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names{"linear_demo", "affine_demo", "integral_demo"};
    return names;
}

std::string_view builtin_description(std::string_view name) {
    if (name == "linear_demo") return "d=1, F(x,y) = (x-y)/4, seed (-1,1), fixed pair (0,0)";
    if (name == "affine_demo") return "d=1, F(x,y) = x/3 - y/4 + 1, seed (0,3), fixed pair (12/11,12/11)";
    if (name == "integral_demo") {
        return "d=N (default 16), discretized kernel operator exp(-|s-t|) with t/(1+|t|), max metric";
    }
    return "";
}

ProblemSpec make_builtin(std::string_view name, std::optional<std::size_t> dim) {
    if (name == "integral_demo") return integral_demo(dim.value_or(kIntegralDefaultDim));
    if (dim && *dim != 1 && (name == "linear_demo" || name == "affine_demo")) {
        throw InputError("builtin '" + std::string(name) + "' has fixed dimension 1");
    }
    if (name == "linear_demo") return linear_demo();
    if (name == "affine_demo") return affine_demo();
    throw InputError("unknown builtin '" + std::string(name) + "'");
}

CoupledMapDef expression_map(std::string name, Box domain_box,
                             const std::vector<std::string>& components) {
    const std::size_t d = domain_box.dim();
    if (components.size() != d) {
        throw InputError("expected " + std::to_string(d) + " component expressions, got " +
                         std::to_string(components.size()));
    }
    std::vector<Expression> exprs;
    exprs.reserve(d);
    for (std::size_t i = 0; i < d; ++i) {
        try {
            exprs.push_back(parse_expression(components[i], d));
        } catch (const ParseError& e) {
            throw ParseError(e.kind(), e.offset(),
                             "components_F[" + std::to_string(i) + "]: " + e.detail());
        }
    }
    return CoupledMapDef(std::move(name), std::move(domain_box),
                         [exprs = std::move(exprs)](std::span<const double> x,
                                                    std::span<const double> y) {
                             std::vector<double> out(exprs.size());
                             for (std::size_t i = 0; i < exprs.size(); ++i) out[i] = exprs[i].evaluate(x, y);
                             return out;
                         });
}

namespace {

double number_field(const json& j, const std::string& what) {
    if (!j.is_number()) throw InputError(what + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw InputError(what + " must be finite");
    return v;
}

Point point_field(const json& j, const std::string& what, std::size_t dim) {
    if (!j.is_array()) throw InputError(what + " must be an array of numbers");
    if (j.size() != dim) {
        throw InputError(what + " must have " + std::to_string(dim) + " entries");
    }
    std::vector<double> v;
    for (std::size_t i = 0; i < j.size(); ++i) {
        v.push_back(number_field(j[i], what + "[" + std::to_string(i) + "]"));
    }
    return Point(std::move(v));
}

PairPoint pair_field(const json& j, const std::string& what, std::size_t dim) {
    if (!j.is_array() || j.size() != 2) throw InputError(what + " must be [first, second]");
    return PairPoint(point_field(j[0], what + ".first", dim), point_field(j[1], what + ".second", dim));
}

Box box_field(const json& j, std::size_t dim) {
    if (!j.is_array() || j.empty()) throw InputError("domain_box must be a nonempty array");
    auto side = [](const json& s, std::size_t i) {
        const std::string what = "domain_box[" + std::to_string(i) + "]";
        if (!s.is_array() || s.size() != 2) throw InputError(what + " must be [lo, hi]");
        return Interval{number_field(s[0], what + ".lo"), number_field(s[1], what + ".hi")};
    };
    std::vector<Interval> sides;
    // a single [lo, hi] applies to every coordinate
    if (j.size() == 2 && j[0].is_number()) {
        sides.assign(dim, side(j, 0));
    } else {
        if (j.size() != dim) throw InputError("domain_box must have one [lo, hi] per coordinate");
        for (std::size_t i = 0; i < j.size(); ++i) sides.push_back(side(j[i], i));
    }
    return Box(std::move(sides));
}

void reject_unknown_fields(const json& config) {
    static const std::set<std::string> known{"builtin",     "name",       "dim",
                                             "metric",      "order_slack", "components_F",
                                             "domain_box",  "seed",       "params",
                                             "adversarial_pairs"};
    for (const auto& [key, value] : config.items()) {
        if (!known.count(key)) throw InputError("unknown config field '" + key + "'");
    }
}

}  // namespace

ProblemSpec build_problem(const json& config) {
    if (!config.is_object()) throw InputError("problem config must be a JSON object");
    reject_unknown_fields(config);

    std::optional<std::size_t> dim;
    if (config.contains("dim")) {
        const auto& d = config["dim"];
        if (!d.is_number_integer() || d.get<long long>() < 1) {
            throw InputError("dim must be a positive integer");
        }
        dim = d.get<std::size_t>();
    }

    std::optional<ProblemSpec> spec;
    if (config.contains("builtin")) {
        if (!config["builtin"].is_string()) throw InputError("builtin must be a string");
        if (config.contains("components_F")) {
            throw InputError("config cannot give both builtin and components_F");
        }
        spec = make_builtin(config["builtin"].get<std::string>(), dim);
        if (config.contains("domain_box")) {
            spec->map = spec->map.with_domain(box_field(config["domain_box"], spec->space.dim));
        }
    } else {
        if (!config.contains("components_F")) {
            throw InputError("config must name a builtin or give components_F");
        }
        const auto& comps = config["components_F"];
        if (!comps.is_array() || comps.empty()) {
            throw InputError("components_F must be a nonempty array of strings");
        }
        std::vector<std::string> texts;
        for (const auto& c : comps) {
            if (!c.is_string()) throw InputError("components_F entries must be strings");
            texts.push_back(c.get<std::string>());
        }
        const std::size_t d = dim.value_or(texts.size());
        if (d != texts.size()) throw InputError("dim does not match the number of components_F");
        if (!config.contains("domain_box")) throw InputError("expression maps need a domain_box");
        if (!config.contains("seed")) throw InputError("expression maps need a seed");
        Box box = box_field(config["domain_box"], d);
        std::string name = "expression";
        if (config.contains("name")) {
            if (!config["name"].is_string()) throw InputError("name must be a string");
            name = config["name"].get<std::string>();
        }
        CoupledMapDef map = expression_map(name, std::move(box), texts);
        spec = ProblemSpec{std::move(name), SpaceDescriptor(d, Metric::euclidean), std::move(map),
                           Point::filled(d, 0.0), Point::filled(d, 0.0), std::nullopt,
                           std::nullopt, {}};
    }

    ProblemSpec& p = *spec;
    const std::size_t d = p.space.dim;
    if (config.contains("name") && config.contains("builtin")) {
        if (!config["name"].is_string()) throw InputError("name must be a string");
        p.name = config["name"].get<std::string>();
    }
    if (config.contains("metric")) {
        if (!config["metric"].is_string()) throw InputError("metric must be a string");
        p.space.metric = parse_metric(config["metric"].get<std::string>());
    }
    if (config.contains("order_slack")) {
        p.space = SpaceDescriptor(d, p.space.metric, number_field(config["order_slack"], "order_slack"));
    }
    if (config.contains("seed")) {
        const auto& s = config["seed"];
        if (!s.is_object()) throw InputError("seed must be an object {x0, y0}");
        for (const auto& [key, value] : s.items()) {
            if (key != "x0" && key != "y0") throw InputError("unknown seed field '" + key + "'");
        }
        if (!s.contains("x0") || !s.contains("y0")) throw InputError("seed needs x0 and y0");
        p.x0 = point_field(s["x0"], "seed.x0", d);
        p.y0 = point_field(s["y0"], "seed.y0", d);
    }
    if (config.contains("params")) {
        const auto& pr = config["params"];
        if (!pr.is_object()) throw InputError("params must be an object {alpha, beta}");
        for (const auto& [key, value] : pr.items()) {
            if (key != "alpha" && key != "beta") throw InputError("unknown params field '" + key + "'");
        }
        if (!pr.contains("alpha") || !pr.contains("beta")) {
            throw InputError("params needs alpha and beta");
        }
        p.suggested_params = ContractionParams(number_field(pr["alpha"], "params.alpha"),
                                               number_field(pr["beta"], "params.beta"));
    }
    if (config.contains("adversarial_pairs")) {
        const auto& list = config["adversarial_pairs"];
        if (!list.is_array()) throw InputError("adversarial_pairs must be an array");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string what = "adversarial_pairs[" + std::to_string(i) + "]";
            const auto& item = list[i];
            if (!item.is_object() || !item.contains("a") || !item.contains("b") || item.size() != 2) {
                throw InputError(what + " must be an object {a, b}");
            }
            ComparablePair cp{pair_field(item["a"], what + ".a", d), pair_field(item["b"], what + ".b", d)};
            if (!product_leq(p.space, cp.b, cp.a)) {
                throw InputError(what + " is not comparable with b <= a");
            }
            if (!p.map.domain_box().contains(cp.a.first) || !p.map.domain_box().contains(cp.a.second) ||
                !p.map.domain_box().contains(cp.b.first) || !p.map.domain_box().contains(cp.b.second)) {
                throw InputError(what + " lies outside the domain box");
            }
            p.adversarial_pairs.push_back(std::move(cp));
        }
    }
    if (!p.map.domain_box().contains(p.x0) || !p.map.domain_box().contains(p.y0)) {
        throw InputError("seed outside the domain box of map '" + p.map.name() + "'");
    }
    return std::move(p);
}

ProblemSpec build_problem_from_text(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("malformed problem config: ") + e.what());
    }
    return build_problem(doc);
}

}  // namespace cfp
