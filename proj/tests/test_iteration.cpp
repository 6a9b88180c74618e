#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "coupled_fp/errors.hpp"
#include "coupled_fp/iteration.hpp"
#include "coupled_fp/problems.hpp"
#include "test_support.hpp"

using namespace cfp;
using cfp::testing::affine_map;
using cfp::testing::line;
using cfp::testing::linear_map;

namespace {

IterationConfig with_params(double alpha, double beta, double tol = 1e-10) {
    IterationConfig c;
    c.tol = tol;
    c.params = ContractionParams(alpha, beta);
    return c;
}

// Step-by-step count of the smallest n with r^n D0 / (1 - r) <= eps.
std::size_t brute_count(double r, double d0, double eps) {
    std::size_t n = 0;
    double t = d0 / (1.0 - r);
    while (t > eps) {
        t *= r;
        ++n;
    }
    return n;
}

}  // namespace

TEST(SeedCondition, Examples) {
    const auto F = linear_map();
    EXPECT_TRUE(check_seed_condition(line(), F, Point{-1}, Point{1}));
    EXPECT_FALSE(check_seed_condition(line(), F, Point{1}, Point{-1}));
    EXPECT_TRUE(check_seed_condition(line(), affine_map(), Point{0}, Point{3}));
    EXPECT_TRUE(check_seed_condition(line(), F, Point{0}, Point{0}));
}

TEST(Iterate, LinearClosedForm) {
    auto [res, trace] = iterate(line(), linear_map(), Point{-1}, Point{1}, with_params(0.1, 0.5));
    EXPECT_TRUE(res.converged);
    EXPECT_TRUE(res.seed_condition_held);
    EXPECT_TRUE(res.components_equal);
    EXPECT_LE(res.final_residual, 1e-10);
    EXPECT_NEAR(res.fixed_pair.first[0], 0.0, 1e-10);
    EXPECT_NEAR(res.fixed_pair.second[0], 0.0, 1e-10);
    ASSERT_EQ(trace.size(), res.iterations_used);
    for (const auto& e : trace.entries) {
        const double p = std::ldexp(1.0, -static_cast<int>(e.n));
        EXPECT_DOUBLE_EQ(e.x[0], -p);
        EXPECT_DOUBLE_EQ(e.y[0], p);
        EXPECT_DOUBLE_EQ(e.gap_x, p / 2.0);
        EXPECT_DOUBLE_EQ(e.gap_y, p / 2.0);
    }
    // last recorded gap r/(1-r) = 1.25 scaled is the first one under tol
    const auto& last = trace.entries.back();
    EXPECT_LE(last.gap_x * 1.25, 1e-10);
    EXPECT_GT(trace.entries[trace.size() - 2].gap_x * 1.25, 1e-10);
}

TEST(Iterate, FixedStartTakesOneStep) {
    auto [res, trace] = iterate(line(), linear_map(), Point{0}, Point{0}, IterationConfig{});
    EXPECT_TRUE(res.converged);
    EXPECT_EQ(res.iterations_used, 1u);
    EXPECT_EQ(res.final_residual, 0.0);
    EXPECT_EQ(trace.size(), 1u);
}

TEST(Iterate, AffineReachesClosedFormLimit) {
    auto [res, trace] = iterate(line(), affine_map(), Point{0}, Point{3}, with_params(0.1, 2.0 / 3.0, 1e-12));
    ASSERT_TRUE(res.converged);
    const double c = 12.0 / 11.0;
    EXPECT_NEAR(res.fixed_pair.first[0], c, 1e-11);
    EXPECT_NEAR(res.fixed_pair.second[0], c, 1e-11);
    EXPECT_TRUE(res.components_equal);
    EXPECT_TRUE(verify_coupled_fixed_point(line(), affine_map(), res.fixed_pair, 1e-11).is_fixed);
}

TEST(Iterate, WithoutParamsUsesGapRule) {
    IterationConfig cfg;
    cfg.tol = 1e-6;
    auto [res, trace] = iterate(line(), linear_map(), Point{-1}, Point{1}, cfg);
    EXPECT_TRUE(res.converged);
    EXPECT_LE(trace.entries.back().gap_x, 1e-6);
    EXPECT_GT(trace.entries[trace.size() - 2].gap_x, 1e-6);
    for (const auto& e : trace.entries) EXPECT_FALSE(e.bound.has_value());
}

TEST(Iterate, MaxIterReachedIsNotAnError) {
    IterationConfig cfg;
    cfg.max_iter = 5;
    auto [res, trace] = iterate(line(), linear_map(), Point{-1}, Point{1}, cfg);
    EXPECT_FALSE(res.converged);
    EXPECT_EQ(res.iterations_used, 5u);
    EXPECT_DOUBLE_EQ(res.fixed_pair.first[0], -1.0 / 32.0);
    // residual of x_5
    EXPECT_DOUBLE_EQ(res.final_residual, 1.0 / 64.0);
}

TEST(Iterate, RejectsBadConfig) {
    IterationConfig cfg;
    cfg.max_iter = 0;
    EXPECT_THROW(iterate(line(), linear_map(), Point{0}, Point{0}, cfg), InputError);
    cfg = IterationConfig{};
    cfg.tol = 0.0;
    EXPECT_THROW(iterate(line(), linear_map(), Point{0}, Point{0}, cfg), InputError);
    EXPECT_THROW(iterate(line(), linear_map(), Point{5}, Point{0}, IterationConfig{}), DomainError);
}

TEST(Iterate, DivergenceLeavingPaddedBox) {
    const auto F = expression_map("double", Box::cube(1, -1, 1), {"2 * x1"});
    try {
        iterate(line(), F, Point{0.5}, Point{-0.5}, IterationConfig{});
        FAIL() << "expected divergence";
    } catch (const DivergenceError& e) {
        // 0.5, 1, 2, 4: the third step leaves [-2, 2]
        EXPECT_EQ(e.step(), 3u);
    }
}

TEST(Iterate, DivergenceOnEvaluationFailure) {
    const auto F = expression_map("log", Box::cube(1, -1, 1), {"ln(x1)"});
    EXPECT_THROW(iterate(line(), F, Point{0.5}, Point{0.5}, IterationConfig{}), DivergenceError);
}

TEST(Iterate, Deterministic) {
    const ProblemSpec p = make_builtin("integral_demo", 8);
    auto [r1, t1] = iterate(p.space, p.map, p.x0, p.y0, IterationConfig{});
    auto [r2, t2] = iterate(p.space, p.map, p.x0, p.y0, IterationConfig{});
    EXPECT_EQ(r1.fixed_pair, r2.fixed_pair);
    ASSERT_EQ(t1.size(), t2.size());
    for (std::size_t i = 0; i < t1.size(); ++i) {
        EXPECT_EQ(t1.entries[i].x, t2.entries[i].x);
        EXPECT_EQ(t1.entries[i].gap_y, t2.entries[i].gap_y);
    }
}

TEST(Iterate, SummedGapsContractByRatio) {
    // d(x_{n+2},x_{n+1}) + d(y_{n+2},y_{n+1}) <= r [d(x_{n+1},x_n) + d(y_{n+1},y_n)]
    struct Case {
        CoupledMapDef F;
        Point x0, y0;
        double alpha, beta;
    };
    const std::vector<Case> cases{
        {linear_map(), Point{-1}, Point{1}, 0.1, 0.5},
        {affine_map(), Point{0}, Point{3}, 0.1, 2.0 / 3.0},
    };
    for (const auto& c : cases) {
        auto [res, trace] = iterate(line(), c.F, c.x0, c.y0, with_params(c.alpha, c.beta, 1e-13));
        const double r = ContractionParams(c.alpha, c.beta).ratio();
        for (std::size_t n = 0; n + 1 < trace.size(); ++n) {
            const auto& a = trace.entries[n];
            const auto& b = trace.entries[n + 1];
            EXPECT_LE(b.gap_x + b.gap_y, r * (a.gap_x + a.gap_y) * (1 + 1e-12) + 1e-300)
                << c.F.name() << " n=" << n;
        }
    }
}

TEST(Iterate, IteratesStayOrderedBelowUpperComponent) {
    auto [res, trace] = iterate(line(), affine_map(), Point{0}, Point{3}, IterationConfig{});
    EXPECT_FALSE(first_unordered_entry(line(), trace).has_value());
    auto [res2, trace2] = iterate(line(), linear_map(), Point{1}, Point{-1}, IterationConfig{});
    ASSERT_TRUE(first_unordered_entry(line(), trace2).has_value());
    EXPECT_EQ(*first_unordered_entry(line(), trace2), 0u);
}

TEST(GapBound, Examples) {
    const ContractionParams p(0.1, 0.5);
    EXPECT_DOUBLE_EQ(apriori_gap_bound(p, 0.5, 0), 0.5);
    EXPECT_NEAR(apriori_gap_bound(p, 0.5, 1), 0.27778, 1e-5);
    EXPECT_NEAR(apriori_gap_bound(p, 0.5, 2), 0.15432, 1e-5);
    EXPECT_THROW(apriori_gap_bound(p, -1.0, 0), InputError);
}

TEST(GapBound, TraceCarriesBounds) {
    auto [res, trace] = iterate(line(), linear_map(), Point{-1}, Point{1}, with_params(0.1, 0.5));
    for (const auto& e : trace.entries) {
        ASSERT_TRUE(e.bound.has_value());
        EXPECT_DOUBLE_EQ(*e.bound, apriori_gap_bound(ContractionParams(0.1, 0.5), 0.5, e.n));
        if (e.n >= 1) {
            EXPECT_LE(e.gap_x, *e.bound);
            EXPECT_LE(e.gap_y, *e.bound);
        }
    }
}

TEST(IterationCount, Examples) {
    EXPECT_EQ(apriori_iteration_count(ContractionParams(0.1, 0.5), 0.5, 1e-6), 24u);
    EXPECT_EQ(apriori_iteration_count(ContractionParams(0.1, 2.0 / 3.0), 0.625, 1e-6), 49u);
    EXPECT_EQ(apriori_iteration_count(ContractionParams(0.1, 0.5), 0.0, 1e-6), 0u);
    EXPECT_THROW(apriori_iteration_count(ContractionParams(0.1, 0.5), 0.5, 0.0), InputError);
}

TEST(IterationCount, MatchesStepwiseCount) {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 2000; ++k) {
        const double alpha = 0.5 * u(gen);
        const double beta = (1.0 - alpha) * (0.01 + 0.98 * u(gen));
        if (!(alpha + beta < 1.0)) continue;
        const ContractionParams p(alpha, beta);
        const double d0 = std::pow(10.0, -3.0 + 6.0 * u(gen));
        const double eps = std::pow(10.0, -12.0 + 10.0 * u(gen));
        const std::size_t n = apriori_iteration_count(p, d0, eps);
        EXPECT_EQ(n, brute_count(p.ratio(), d0, eps)) << alpha << " " << beta << " " << d0 << " " << eps;
    }
}

TEST(VerifyFixedPoint, Examples) {
    const auto F = linear_map();
    auto c = verify_coupled_fixed_point(line(), F, PairPoint(Point{0}, Point{0}), 1e-12);
    EXPECT_TRUE(c.is_fixed);
    EXPECT_EQ(c.residual, 0.0);
    c = verify_coupled_fixed_point(line(), affine_map(), PairPoint(Point{1}, Point{1}), 1e-12);
    EXPECT_FALSE(c.is_fixed);
    // F(1,1) = 13/12
    EXPECT_NEAR(c.residual, 1.0 / 12.0, 1e-15);
    c = verify_coupled_fixed_point(line(), F, PairPoint(Point{-1}, Point{1}), 1e-12);
    EXPECT_DOUBLE_EQ(c.residual, 0.5);
}

TEST(MonotoneChain, PassesForOrderedSeed) {
    auto [res, trace] = iterate(line(), linear_map(), Point{-1}, Point{1}, IterationConfig{});
    const ChainReport r = check_monotone_chain(line(), trace, res.fixed_pair);
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.checks, 4 * trace.size() - 2);
}

TEST(MonotoneChain, FailsForReversedSeed) {
    auto [res, trace] = iterate(line(), linear_map(), Point{1}, Point{-1}, IterationConfig{});
    const ChainReport r = check_monotone_chain(line(), trace, res.fixed_pair);
    EXPECT_FALSE(r.passed);
    EXPECT_EQ(r.failure, ChainReport::Failure::x_not_nondecreasing);
    EXPECT_EQ(r.at, 0u);
}

TEST(MonotoneChain, SingleEntryAndEmpty) {
    IterationTrace t;
    const PairPoint lim(Point{0}, Point{0});
    EXPECT_THROW(check_monotone_chain(line(), t, lim), InputError);
    t.entries.push_back(TraceEntry{0, Point{-1}, Point{1}, 0.5, 0.5, std::nullopt});
    auto r = check_monotone_chain(line(), t, lim);
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.checks, 2u);
    r = check_monotone_chain(line(), t, PairPoint(Point{-2}, Point{0}));
    EXPECT_FALSE(r.passed);
    EXPECT_EQ(r.failure, ChainReport::Failure::x_above_limit);
}

TEST(Uniqueness, LinearSeedsAgree) {
    std::vector<PairPoint> seeds{PairPoint(Point{-1}, Point{1}), PairPoint(Point{1.5}, Point{-2}),
                                 PairPoint(Point{0.3}, Point{0.3})};
    const auto r = uniqueness_probe(line(), linear_map(), seeds, IterationConfig{});
    EXPECT_TRUE(r.all_agree);
    EXPECT_TRUE(r.bridges_hold);
    EXPECT_EQ(r.bridges.size(), 3u);
    EXPECT_LE(r.max_pairwise_distance, 2e-10);
    EXPECT_TRUE(r.runs[0].seed_condition_held);
    EXPECT_FALSE(r.runs[1].seed_condition_held);
}

TEST(Uniqueness, NonuniqueMapDisagrees) {
    // F(x, y) = x: every pair is a coupled fixed point
    const auto F = expression_map("ident", Box::cube(1, -1, 1), {"x1"});
    std::vector<PairPoint> seeds{PairPoint(Point{0}, Point{1}), PairPoint(Point{0.5}, Point{0.7})};
    const auto r = uniqueness_probe(line(), F, seeds, IterationConfig{});
    EXPECT_FALSE(r.all_agree);
    EXPECT_DOUBLE_EQ(r.max_pairwise_distance, 0.5);
    // bridge (0.5, 0.7) is comparable to both limits
    ASSERT_EQ(r.bridges.size(), 1u);
    EXPECT_EQ(r.bridges[0].bridge, PairPoint(Point{0.5}, Point{0.7}));
    EXPECT_TRUE(r.bridges_hold);
}

TEST(Uniqueness, FailedRunsAreRecorded) {
    const auto F = expression_map("double", Box::cube(1, -1, 1), {"2 * x1"});
    std::vector<PairPoint> seeds{PairPoint(Point{0}, Point{0}), PairPoint(Point{0.5}, Point{0.5})};
    const auto r = uniqueness_probe(line(), F, seeds, IterationConfig{});
    EXPECT_TRUE(r.runs[0].result.has_value());
    EXPECT_FALSE(r.runs[1].result.has_value());
    EXPECT_FALSE(r.runs[1].error.empty());
    EXPECT_FALSE(r.all_agree);
    EXPECT_THROW(uniqueness_probe(line(), F, {}, IterationConfig{}), InputError);
}

TEST(Uniqueness, ThreadIndependent) {
    const ProblemSpec p = make_builtin("integral_demo", 6);
    std::mt19937_64 gen(3);
    std::vector<PairPoint> seeds;
    for (int k = 0; k < 6; ++k) seeds.push_back(cfp::testing::random_pair(gen, 6, -1, 2));
    const auto a = uniqueness_probe(p.space, p.map, seeds, IterationConfig{}, 1);
    const auto b = uniqueness_probe(p.space, p.map, seeds, IterationConfig{}, 4);
    EXPECT_EQ(a.max_pairwise_distance, b.max_pairwise_distance);
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        ASSERT_TRUE(a.runs[i].result && b.runs[i].result);
        EXPECT_EQ(a.runs[i].result->fixed_pair, b.runs[i].result->fixed_pair);
    }
    EXPECT_TRUE(a.all_agree);
}

TEST(TraceCsv, Format) {
    IterationConfig cfg;
    cfg.max_iter = 2;
    auto [res, trace] = iterate(line(), linear_map(), Point{-1}, Point{1}, cfg);
    std::ostringstream out;
    write_trace_csv(out, trace, 1);
    EXPECT_EQ(out.str(), "n,x_0,y_0,gap_x,gap_y,bound\n"
                         "0,-1,1,0.5,0.5,\n"
                         "1,-0.5,0.5,0.25,0.25,\n");

    cfg.params = ContractionParams(0.1, 0.5);
    auto [res2, trace2] = iterate(line(), linear_map(), Point{-1}, Point{1}, cfg);
    std::ostringstream out2;
    write_trace_csv(out2, trace2, 1);
    EXPECT_NE(out2.str().find("1,-0.5,0.5,0.25,0.25,0.27777777777777779\n"), std::string::npos);
}
