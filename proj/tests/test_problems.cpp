#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "coupled_fp/certificate.hpp"
#include "coupled_fp/errors.hpp"
#include "coupled_fp/iteration.hpp"
#include "coupled_fp/problems.hpp"
#include "test_support.hpp"

using namespace cfp;

namespace {

// Direct evaluation of the discretized kernel operator.
std::vector<double> integral_oracle(const Point& x, const Point& y) {
    const std::size_t n = x.dim();
    auto sigma = [](double t) { return t / (1.0 + std::abs(t)); };
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double k = std::exp(-std::abs(double(i + 1) / n - double(j + 1) / n));
            acc += k * (sigma(x[j]) - sigma(y[j]));
        }
        out[i] = 0.25 + acc / (4.0 * n);
    }
    return out;
}

double sup_dist(const Point& a, const Point& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST(Builtins, Catalog) {
    const auto& names = builtin_names();
    ASSERT_EQ(names.size(), 3u);
    for (const auto& n : names) {
        EXPECT_FALSE(builtin_description(n).empty());
        EXPECT_EQ(make_builtin(n).name, n);
    }
    EXPECT_THROW(make_builtin("nonexistent"), InputError);
    EXPECT_THROW(make_builtin("linear_demo", 2), InputError);
    EXPECT_THROW(make_builtin("integral_demo", 0), InputError);
}

TEST(Builtins, LinearAndAffine) {
    const ProblemSpec lin = make_builtin("linear_demo");
    ASSERT_TRUE(lin.expected_fixed_pair.has_value());
    EXPECT_EQ(*lin.expected_fixed_pair, PairPoint(Point{0}, Point{0}));
    EXPECT_EQ(lin.x0, Point{-1});
    EXPECT_EQ(lin.y0, Point{1});
    EXPECT_EQ(*lin.suggested_params, ContractionParams(0.1, 0.5));
    EXPECT_EQ(lin.adversarial_pairs.size(), 1u);

    const ProblemSpec aff = make_builtin("affine_demo");
    const double c = 12.0 / 11.0;
    EXPECT_DOUBLE_EQ(aff.expected_fixed_pair->first[0], c);
    EXPECT_DOUBLE_EQ(aff.expected_fixed_pair->second[0], c);
    // x = x/12 + 1 at the diagonal
    EXPECT_NEAR(eval_map(aff.map, Point{c}, Point{c})[0], c, 1e-15);
    EXPECT_NEAR(aff.suggested_params->beta(), 2.0 / 3.0, 1e-15);
}

TEST(Builtins, IntegralDemoMatchesDirectFormula) {
    const ProblemSpec p = make_builtin("integral_demo");
    EXPECT_EQ(p.space.dim, 16u);
    EXPECT_EQ(p.space.metric, Metric::max);
    EXPECT_FALSE(p.expected_fixed_pair.has_value());
    std::mt19937_64 gen(1);
    for (int k = 0; k < 200; ++k) {
        const Point x = cfp::testing::random_point(gen, 16, -1, 2);
        const Point y = cfp::testing::random_point(gen, 16, -1, 2);
        const Point f = eval_map(p.map, x, y);
        const auto o = integral_oracle(x, y);
        for (std::size_t i = 0; i < 16; ++i) EXPECT_NEAR(f[i], o[i], 1e-15);
    }
}

TEST(Builtins, IntegralSeedBounds) {
    const ProblemSpec p = make_builtin("integral_demo");
    const Point lo = eval_map(p.map, p.x0, p.y0);
    const Point hi = eval_map(p.map, p.y0, p.x0);
    for (std::size_t i = 0; i < 16; ++i) {
        EXPECT_GE(lo[i], 1.0 / 8.0);
        EXPECT_LE(hi[i], 3.0 / 8.0);
    }
    EXPECT_TRUE(check_seed_condition(p.space, p.map, p.x0, p.y0));
}

TEST(Builtins, SeedConditionAndMonotoneCheck) {
    for (const auto& n : builtin_names()) {
        const ProblemSpec p = make_builtin(n);
        EXPECT_TRUE(check_seed_condition(p.space, p.map, p.x0, p.y0)) << n;
        EXPECT_EQ(mixed_monotone_check(p.space, p.map, 1000, 2024).violations, 0u) << n;
        EXPECT_TRUE(p.map.domain_box().contains(p.x0) && p.map.domain_box().contains(p.y0)) << n;
    }
}

TEST(Builtins, IntegralLipschitzBound) {
    const ProblemSpec p = make_builtin("integral_demo", 10);
    for (const auto& s : sample_comparable_pairs(p.space, p.map, p.map.domain_box(), 2000, 6)) {
        const Point fa = eval_map(p.map, s.a.first, s.a.second);
        const Point fb = eval_map(p.map, s.b.first, s.b.second);
        const double lhs = sup_dist(fa, fb);
        const double rhs = 0.25 * (sup_dist(s.a.first, s.b.first) + sup_dist(s.a.second, s.b.second));
        EXPECT_LE(lhs, rhs * (1 + 1e-12));
        EXPECT_GE(margin_from_terms(ContractionParams(0.01, 0.5), s.terms), 0.0);
    }
}

TEST(Config, Builtin) {
    const ProblemSpec p = build_problem_from_text(R"({"builtin": "affine_demo"})");
    EXPECT_EQ(p.name, "affine_demo");
    EXPECT_EQ(p.x0, Point{0});

    const ProblemSpec q = build_problem_from_text(
        R"({"builtin": "integral_demo", "dim": 4, "seed": {"x0": [0,0,0,0], "y0": [1,1,1,0.5]},
            "params": {"alpha": 0.1, "beta": 0.4}, "domain_box": [-2, 3]})");
    EXPECT_EQ(q.space.dim, 4u);
    EXPECT_EQ(q.y0[3], 0.5);
    EXPECT_EQ(*q.suggested_params, ContractionParams(0.1, 0.4));
    EXPECT_EQ(q.map.domain_box()[2].lo, -2.0);
}

TEST(Config, ExpressionMap) {
    const ProblemSpec p = build_problem_from_text(R"({
        "components_F": ["(x1 - y2)/4", "(x2 - y1)/4"],
        "dim": 2,
        "metric": "l1",
        "domain_box": [[-2, 2], [-1, 1]],
        "seed": {"x0": [-1, -1], "y0": [1, 1]},
        "params": {"alpha": 0.1, "beta": 0.5},
        "adversarial_pairs": [{"a": [[0.5, 0.5], [0, 0]], "b": [[0, 0], [0.5, 0.5]]}]
    })");
    EXPECT_EQ(p.space.metric, Metric::l1);
    EXPECT_EQ(p.map.domain_box()[1].hi, 1.0);
    const Point f = eval_map(p.map, Point{1, 0.5}, Point{-1, 0});
    EXPECT_DOUBLE_EQ(f[0], 0.25);
    EXPECT_DOUBLE_EQ(f[1], 0.375);
    EXPECT_EQ(p.adversarial_pairs.size(), 1u);
    auto [res, trace] = iterate(p.space, p.map, p.x0, p.y0, IterationConfig{});
    EXPECT_TRUE(res.converged);
}

TEST(Config, Errors) {
    const char* bad[] = {
        R"({"builtin": "linear_demo", "colour": 1})",
        R"({"builtin": "nope"})",
        R"({"builtin": "linear_demo", "seed": {"x0": [5], "y0": [1]}})",
        R"({"builtin": "linear_demo", "seed": {"x0": [0]}})",
        R"({"builtin": "linear_demo", "params": {"alpha": 0.6, "beta": 0.6}})",
        R"({"components_F": ["x1"], "domain_box": [[0, 1]]})",
        R"({"components_F": ["x1 +"], "domain_box": [[0, 1]], "seed": {"x0": [0], "y0": [1]}})",
        R"({"components_F": ["x1", "x2"], "dim": 1, "domain_box": [[0, 1]], "seed": {"x0": [0], "y0": [1]}})",
        R"({"components_F": ["x1"], "domain_box": [[0, 1]], "seed": {"x0": [0], "y0": [1]}, "metric": "taxi"})",
        R"({"builtin": "linear_demo", "components_F": ["x1"]})",
        R"([1, 2])",
        R"({"builtin": )",
        R"({})",
    };
    for (const char* text : bad) EXPECT_THROW(build_problem_from_text(text), InputError) << text;
}

TEST(Config, ParseErrorNamesComponent) {
    try {
        build_problem_from_text(
            R"({"components_F": ["x1", "x1 +"], "dim": 2, "domain_box": [0, 1], "seed": {"x0": [0, 0], "y0": [1, 1]}})");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 4u);
        EXPECT_NE(std::string(e.what()).find("components_F[1]"), std::string::npos);
    }
}
