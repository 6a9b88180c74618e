#include "coupled_fp/iteration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "coupled_fp/errors.hpp"
#include "coupled_fp/parallel.hpp"

namespace cfp {

bool check_seed_condition(const SpaceDescriptor& space, const CoupledMapDef& F, const Point& x0,
                          const Point& y0) {
    require_dim(space, x0, "x0");
    require_dim(space, y0, "y0");
    return leq(space, x0, eval_map(F, x0, y0)) && leq(space, eval_map(F, y0, x0), y0);
}

namespace {

Point guarded_step(const CoupledMapDef& F, const Box& guard, const Point& a, const Point& b,
                   std::size_t step) {
    Point next;
    try {
        next = F.evaluate_unchecked(a, b);
    } catch (const DomainError& e) {
        throw DivergenceError("iterate " + std::to_string(step) + " could not be evaluated: " +
                                  e.what(),
                              step);
    }
    if (!guard.contains(next)) {
        throw DivergenceError("iterate " + std::to_string(step) +
                                  " left the padded domain box of map '" + F.name() + "'",
                              step);
    }
    return next;
}

// Residual of a pair that may sit slightly outside the domain box but inside
// the guard.
double guarded_residual(const SpaceDescriptor& space, const CoupledMapDef& F, const Box& guard,
                        const Point& x, const Point& y, std::size_t step) {
    const Point fx = guarded_step(F, guard, x, y, step);
    const Point fy = guarded_step(F, guard, y, x, step);
    return std::max(distance(space, fx, x), distance(space, fy, y));
}

}  // namespace

std::pair<SolveResult, IterationTrace> iterate(const SpaceDescriptor& space,
                                               const CoupledMapDef& F, const Point& x0,
                                               const Point& y0, const IterationConfig& config) {
    if (config.max_iter < 1) throw InputError("max_iter must be at least 1");
    if (!(config.tol > 0.0)) throw InputError("tol must be positive");
    if (F.dim() != space.dim) throw InputError("map dimension does not match the space");

    SolveResult result;
    result.seed_condition_held = check_seed_condition(space, F, x0, y0);

    const Box guard = F.domain_box().scaled(2.0);
    const double tail_factor =
        config.params ? config.params->ratio() / (1.0 - config.params->ratio()) : 1.0;

    IterationTrace trace;
    Point x = x0;
    Point y = y0;
    double d0 = 0.0;
    bool have_residual = false;
    for (std::size_t n = 0; n < config.max_iter; ++n) {
        Point x_next = guarded_step(F, guard, x, y, n + 1);
        Point y_next = guarded_step(F, guard, y, x, n + 1);
        const double gx = distance(space, x_next, x);
        const double gy = distance(space, y_next, y);
        if (n == 0) d0 = 0.5 * (gx + gy);

        if (config.record_trace) {
            TraceEntry e{n, std::move(x), std::move(y), gx, gy, std::nullopt};
            if (config.params) e.bound = apriori_gap_bound(*config.params, d0, n);
            trace.entries.push_back(std::move(e));
        }
        x = std::move(x_next);
        y = std::move(y_next);
        result.iterations_used = n + 1;

        if (std::max(gx, gy) * tail_factor <= config.tol) {
            result.final_residual = guarded_residual(space, F, guard, x, y, n + 2);
            have_residual = true;
            if (result.final_residual <= config.tol) {
                result.converged = true;
                break;
            }
        } else {
            have_residual = false;
        }
    }
    if (!have_residual) {
        result.final_residual =
            guarded_residual(space, F, guard, x, y, result.iterations_used + 1);
    }
    // each component is resolved to tol, so their distance to 2 tol
    result.components_equal = distance(space, x, y) <= 2.0 * config.tol;
    result.fixed_pair = PairPoint(std::move(x), std::move(y));
    return {std::move(result), std::move(trace)};
}

double apriori_gap_bound(const ContractionParams& params, double d0, std::size_t n) {
    if (!(d0 >= 0.0)) throw InputError("D0 must be nonnegative");
    return std::pow(params.ratio(), static_cast<double>(n)) * d0;
}

std::size_t apriori_iteration_count(const ContractionParams& params, double d0, double eps) {
    if (!(eps > 0.0)) throw InputError("eps must be positive");
    if (!(d0 >= 0.0)) throw InputError("D0 must be nonnegative");
    const double r = params.ratio();
    auto tail = [&](std::size_t n) {
        return std::pow(r, static_cast<double>(n)) * d0 / (1.0 - r);
    };
    if (tail(0) <= eps) return 0;
    // closed form, then correct for rounding in log/pow
    const double guess = std::ceil(std::log(eps * (1.0 - r) / d0) / std::log(r));
    std::size_t n = guess > 0.0 ? static_cast<std::size_t>(guess) : 0;
    while (n > 0 && tail(n - 1) <= eps) --n;
    while (tail(n) > eps) ++n;
    return n;
}

FixedPointCheck verify_coupled_fixed_point(const SpaceDescriptor& space, const CoupledMapDef& F,
                                           const PairPoint& pair, double tol) {
    require_dim(space, pair.first, "pair component");
    require_dim(space, pair.second, "pair component");
    const Point fx = eval_map(F, pair.first, pair.second);
    const Point fy = eval_map(F, pair.second, pair.first);
    FixedPointCheck check;
    check.residual = std::max(distance(space, fx, pair.first), distance(space, fy, pair.second));
    check.is_fixed = check.residual <= tol;
    return check;
}

std::string_view to_string(ChainReport::Failure f) {
    switch (f) {
        case ChainReport::Failure::none: return "none";
        case ChainReport::Failure::x_not_nondecreasing: return "x_n <= x_{n+1} violated";
        case ChainReport::Failure::y_not_nonincreasing: return "y_{n+1} <= y_n violated";
        case ChainReport::Failure::x_above_limit: return "x_n <= x violated";
        case ChainReport::Failure::y_below_limit: return "y <= y_n violated";
    }
    return "unknown";
}

ChainReport check_monotone_chain(const SpaceDescriptor& space, const IterationTrace& trace,
                                 const PairPoint& limit) {
    if (trace.empty()) throw InputError("monotone chain check needs a nonempty trace");
    ChainReport report;
    auto fail = [&](ChainReport::Failure f, std::size_t at) {
        report.passed = false;
        report.failure = f;
        report.at = at;
    };
    const auto& es = trace.entries;
    for (std::size_t i = 0; i < es.size(); ++i) {
        if (i + 1 < es.size()) {
            ++report.checks;
            if (!leq(space, es[i].x, es[i + 1].x)) {
                fail(ChainReport::Failure::x_not_nondecreasing, i);
                return report;
            }
            ++report.checks;
            if (!leq(space, es[i + 1].y, es[i].y)) {
                fail(ChainReport::Failure::y_not_nonincreasing, i);
                return report;
            }
        }
        ++report.checks;
        if (!leq(space, es[i].x, limit.first)) {
            fail(ChainReport::Failure::x_above_limit, i);
            return report;
        }
        ++report.checks;
        if (!leq(space, limit.second, es[i].y)) {
            fail(ChainReport::Failure::y_below_limit, i);
            return report;
        }
    }
    return report;
}

std::optional<std::size_t> first_unordered_entry(const SpaceDescriptor& space,
                                                 const IterationTrace& trace) {
    for (std::size_t i = 0; i < trace.entries.size(); ++i) {
        if (!leq(space, trace.entries[i].x, trace.entries[i].y)) return i;
    }
    return std::nullopt;
}

UniquenessReport uniqueness_probe(const SpaceDescriptor& space, const CoupledMapDef& F,
                                  const std::vector<PairPoint>& seeds,
                                  const IterationConfig& config, std::size_t threads) {
    if (seeds.empty()) throw InputError("uniqueness probe needs at least one seed");
    UniquenessReport report;
    report.runs.resize(seeds.size());

    IterationConfig run_config = config;
    run_config.record_trace = false;
    parallel_for(seeds.size(), threads, [&](std::size_t i) {
        SeedOutcome& out = report.runs[i];
        out.seed = seeds[i];
        try {
            auto [res, trace] = iterate(space, F, seeds[i].first, seeds[i].second, run_config);
            out.seed_condition_held = res.seed_condition_held;
            out.result = std::move(res);
        } catch (const Error& e) {
            out.error = e.what();
        }
    });

    bool all_converged = true;
    for (const auto& run : report.runs) {
        if (!run.result || !run.result->converged) all_converged = false;
    }
    for (std::size_t i = 0; i < report.runs.size(); ++i) {
        if (!report.runs[i].result) continue;
        const PairPoint& pi = report.runs[i].result->fixed_pair;
        for (std::size_t j = i + 1; j < report.runs.size(); ++j) {
            if (!report.runs[j].result) continue;
            const PairPoint& pj = report.runs[j].result->fixed_pair;
            const double dist = std::max(distance(space, pi.first, pj.first),
                                         distance(space, pi.second, pj.second));
            report.max_pairwise_distance = std::max(report.max_pairwise_distance, dist);

            BridgeWitness w{i, j, find_bridge(space, pi, pj), false};
            w.comparable_to_both = comparable(space, w.bridge, pi) && comparable(space, w.bridge, pj);
            report.bridges_hold = report.bridges_hold && w.comparable_to_both;
            report.bridges.push_back(std::move(w));
        }
    }
    report.all_agree = all_converged && report.max_pairwise_distance <= 2.0 * config.tol;
    return report;
}

namespace {

void put_number(std::ostream& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

}  // namespace

void write_trace_csv(std::ostream& out, const IterationTrace& trace, std::size_t dim) {
    out << 'n';
    for (std::size_t i = 0; i < dim; ++i) out << ",x_" << i;
    for (std::size_t i = 0; i < dim; ++i) out << ",y_" << i;
    out << ",gap_x,gap_y,bound\n";
    for (const auto& e : trace.entries) {
        out << e.n;
        for (double v : e.x.coords()) { out << ','; put_number(out, v); }
        for (double v : e.y.coords()) { out << ','; put_number(out, v); }
        out << ','; put_number(out, e.gap_x);
        out << ','; put_number(out, e.gap_y);
        out << ',';
        if (e.bound) put_number(out, *e.bound);
        out << '\n';
    }
}

}  // namespace cfp
