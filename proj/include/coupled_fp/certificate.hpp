#pragma once

// Falsification-style certificates for the rational contraction inequality:
// sample comparable pairs, estimate the smallest admissible ratio
// r = beta / (1 - alpha), and check a given (alpha, beta) over a region.
//
// Sampling can never prove the universally quantified hypothesis. A report
// with zero violations means "not falsified at N samples".

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "coupled_fp/coupled_map.hpp"
#include "coupled_fp/space.hpp"

namespace cfp {

/// A comparable pair (b <= a in the product order) with its cached
/// contraction terms.
struct SamplePair {
    PairPoint a;
    PairPoint b;
    ContractionTerms terms;
};

/// Builds a SamplePair; throws PreconditionError unless product_leq(b, a).
SamplePair make_sample(const SpaceDescriptor& space, const CoupledMapDef& F, PairPoint a,
                       PairPoint b);

/// `count` comparable pairs drawn from `region`: b = (u, v) uniform, then
/// x = u + offset and y = v - offset per coordinate with offsets uniform in
/// [0, side width], clipped to the region. Deterministic given `rng_seed`
/// and independent of `threads`.
///
/// Throws InputError if `region` is not contained in F's domain box.
std::vector<SamplePair> sample_comparable_pairs(const SpaceDescriptor& space,
                                                const CoupledMapDef& F, const Box& region,
                                                std::size_t count, std::uint64_t rng_seed,
                                                std::size_t threads = 1);

/// Deterministic samples that uniform sampling tends to miss: identical
/// pairs a = b and all comparable combinations built from the region's lower
/// corner, center and upper corner, followed by `adversarial` pairs.
std::vector<SamplePair> directed_samples(const SpaceDescriptor& space, const CoupledMapDef& F,
                                         const Box& region,
                                         const std::vector<ComparablePair>& adversarial);

struct ParamEstimate {
    bool feasible = false;
    std::size_t sample_count = 0;
    /// Smallest feasible ratio found (within `kRatioTolerance`).
    double ratio = 0.0;
    /// A witnessing parameter pair for `ratio`; absent when infeasible.
    std::optional<ContractionParams> params;
    /// True when r hit the bisection floor, i.e. every tested ratio was
    /// feasible.
    bool at_floor = false;
};

inline constexpr double kRatioTolerance = 1e-6;

/// Finds (alpha, beta) with d_F <= alpha m + (beta/2) s on every sample,
/// alpha >= 0, beta > 0, alpha + beta < 1, minimizing r = beta / (1 - alpha).
///
/// For fixed r, substituting beta = r(1 - alpha) makes every constraint
/// linear in alpha alone, so feasibility is an interval intersection over
/// alpha in [0, 1); feasibility is monotone in r, which is then bisected.
/// Throws InputError on an empty sample list.
ParamEstimate estimate_params(const std::vector<SamplePair>& samples);

/// The alpha interval [lo, hi] feasible at ratio r, or nullopt if empty.
/// `hi` is capped at 1 (exclusive bound of the parameter simplex).
struct AlphaInterval {
    double lo = 0.0;
    double hi = 1.0;
};
std::optional<AlphaInterval> feasible_alpha(const std::vector<SamplePair>& samples, double r);

struct CertificateReport {
    std::size_t sample_count = 0;    ///< random + directed
    std::size_t directed_count = 0;
    std::size_t violations = 0;      ///< samples with margin < 0
    std::optional<double> worst_margin;
    std::optional<SamplePair> min_margin_pair;
    ContractionParams params;

    explicit CertificateReport(ContractionParams p) : params(p) {}
};

/// Margins of `params` at each sample, aggregated. Ties for the minimum
/// keep the earliest sample.
CertificateReport certify_samples(const std::vector<SamplePair>& samples,
                                  const ContractionParams& params);

/// `count` random samples from `region` plus the directed samples, checked
/// against `params`.
CertificateReport certify_region(const SpaceDescriptor& space, const CoupledMapDef& F,
                                 const ContractionParams& params, const Box& region,
                                 std::size_t count, std::uint64_t rng_seed,
                                 const std::vector<ComparablePair>& adversarial = {},
                                 std::size_t threads = 1);

}  // namespace cfp
