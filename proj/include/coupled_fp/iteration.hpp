#pragma once

// Coupled Picard iteration x_{n+1} = F(x_n, y_n), y_{n+1} = F(y_n, x_n) and
// the diagnostics that turn the existence, uniqueness and equality
// conclusions into runtime checks.

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coupled_fp/coupled_map.hpp"
#include "coupled_fp/space.hpp"

namespace cfp {

struct IterationConfig {
    std::size_t max_iter = 1000;
    double tol = 1e-10;
    /// When set, the stopping rule uses the geometric tail bound
    /// max(gap_x, gap_y) r / (1 - r) <= tol and the trace carries a priori gap
    /// bounds.
    std::optional<ContractionParams> params;
    bool record_trace = true;
};

struct TraceEntry {
    std::size_t n = 0;
    Point x;
    Point y;
    double gap_x = 0.0;  ///< d(x_{n+1}, x_n)
    double gap_y = 0.0;  ///< d(y_{n+1}, y_n)
    std::optional<double> bound;  ///< r^n D0 when params were given
};

struct IterationTrace {
    std::vector<TraceEntry> entries;

    bool empty() const noexcept { return entries.empty(); }
    std::size_t size() const noexcept { return entries.size(); }
};

struct SolveResult {
    PairPoint fixed_pair;
    std::size_t iterations_used = 0;
    double final_residual = 0.0;
    bool converged = false;
    bool seed_condition_held = false;
    /// d(x, y) <= 2 tol for the returned pair (each component is resolved to
    /// tol).
    bool components_equal = false;
};

/// x0 <= F(x0, y0) and F(y0, x0) <= y0.
bool check_seed_condition(const SpaceDescriptor& space, const CoupledMapDef& F, const Point& x0,
                          const Point& y0);

/// Runs the coupled iteration from (x0, y0).
///
/// Stops after step n when the stop rule holds and the new pair's residual
/// is at most `tol`; the returned pair is then (x_{n+1}, y_{n+1}) and
/// `iterations_used` is n + 1. Reaching `max_iter` is not an error.
/// A failing seed condition is reported, not fatal.
///
/// Throws DomainError if the seed lies outside the domain box and
/// DivergenceError when an iterate is non-finite, fails to evaluate, or
/// leaves the domain box scaled by 2 about its center.
std::pair<SolveResult, IterationTrace> iterate(const SpaceDescriptor& space,
                                               const CoupledMapDef& F, const Point& x0,
                                               const Point& y0, const IterationConfig& config);

/// r^n D0 with r = beta / (1 - alpha); bounds d(x_{n+1}, x_n) and
/// d(y_{n+1}, y_n) for n >= 1 when D0 = [d(x1,x0) + d(y1,y0)] / 2.
double apriori_gap_bound(const ContractionParams& params, double d0, std::size_t n);

/// Smallest n with r^n D0 / (1 - r) <= eps, the number of steps after which
/// the geometric tail guarantees d(x*, x_n) <= eps.
std::size_t apriori_iteration_count(const ContractionParams& params, double d0, double eps);

struct FixedPointCheck {
    bool is_fixed = false;
    /// max(d(F(x,y), x), d(F(y,x), y))
    double residual = 0.0;
};

FixedPointCheck verify_coupled_fixed_point(const SpaceDescriptor& space, const CoupledMapDef& F,
                                           const PairPoint& pair, double tol);

struct ChainReport {
    enum class Failure { none, x_not_nondecreasing, y_not_nonincreasing, x_above_limit, y_below_limit };

    bool passed = true;
    std::size_t checks = 0;
    Failure failure = Failure::none;
    /// Trace index of the first violation.
    std::size_t at = 0;
};

std::string_view to_string(ChainReport::Failure f);

/// Checks x_n <= x_{n+1}, y_{n+1} <= y_n along the trace and x_n <= x,
/// y <= y_n against the limit (x, y). Throws InputError on an empty trace.
ChainReport check_monotone_chain(const SpaceDescriptor& space, const IterationTrace& trace,
                                 const PairPoint& limit);

/// Index of the first entry with x_n <= y_n failing, or nullopt when every
/// entry is ordered.
std::optional<std::size_t> first_unordered_entry(const SpaceDescriptor& space,
                                                 const IterationTrace& trace);

struct SeedOutcome {
    PairPoint seed;
    bool seed_condition_held = false;
    std::optional<SolveResult> result;
    /// Set when the run threw (divergence or domain error).
    std::string error;
};

struct BridgeWitness {
    std::size_t i = 0;
    std::size_t j = 0;
    PairPoint bridge;
    bool comparable_to_both = false;
};

struct UniquenessReport {
    std::vector<SeedOutcome> runs;
    /// Max over converged pairs of max(d(x_i, x_j), d(y_i, y_j)).
    double max_pairwise_distance = 0.0;
    bool all_agree = false;
    std::vector<BridgeWitness> bridges;
    bool bridges_hold = true;
};

/// Solves from every seed and compares the limits. Runs that throw are
/// recorded and do not abort the probe. `all_agree` requires every run to
/// converge and all limits within 2 tol of each other. Seeds run on up to
/// `threads` workers (0 selects default_thread_count()); the report does not
/// depend on the worker count.
UniquenessReport uniqueness_probe(const SpaceDescriptor& space, const CoupledMapDef& F,
                                  const std::vector<PairPoint>& seeds,
                                  const IterationConfig& config, std::size_t threads = 1);

/// Writes the trace as CSV: n,x_0..x_{d-1},y_0..y_{d-1},gap_x,gap_y,bound
/// with 17 significant digits; `bound` is empty when absent. `dim` sizes the
/// header.
void write_trace_csv(std::ostream& out, const IterationTrace& trace, std::size_t dim);

}  // namespace cfp
