#include "coupled_fp/certificate.hpp"

#include <algorithm>
#include <cmath>

#include "coupled_fp/errors.hpp"
#include "coupled_fp/parallel.hpp"

namespace cfp {

SamplePair make_sample(const SpaceDescriptor& space, const CoupledMapDef& F, PairPoint a,
                       PairPoint b) {
    ContractionTerms terms = contraction_terms(space, F, a, b);
    return SamplePair{std::move(a), std::move(b), terms};
}

std::vector<SamplePair> sample_comparable_pairs(const SpaceDescriptor& space,
                                                const CoupledMapDef& F, const Box& region,
                                                std::size_t count, std::uint64_t rng_seed,
                                                std::size_t threads) {
    if (region.dim() != space.dim) throw InputError("region dimension does not match the space");
    if (!F.domain_box().contains(region)) {
        throw InputError("sampling region is not inside the domain box of map '" + F.name() + "'");
    }
    std::vector<std::optional<SamplePair>> slots(count);
    const std::size_t blocks = (count + kSampleBlock - 1) / kSampleBlock;
    const std::size_t d = space.dim;
    parallel_for(blocks, threads, [&](std::size_t blk) {
        auto gen = block_stream(rng_seed, blk);
        const std::size_t begin = blk * kSampleBlock;
        const std::size_t end = std::min(count, begin + kSampleBlock);
        for (std::size_t k = begin; k < end; ++k) {
            std::vector<double> u(d), v(d), x(d), y(d);
            for (std::size_t i = 0; i < d; ++i) {
                u[i] = uniform(gen, region[i].lo, region[i].hi);
                v[i] = uniform(gen, region[i].lo, region[i].hi);
            }
            for (std::size_t i = 0; i < d; ++i) {
                const double w = region[i].width();
                x[i] = std::min(u[i] + w * uniform01(gen), region[i].hi);
                y[i] = std::max(v[i] - w * uniform01(gen), region[i].lo);
            }
            PairPoint a(Point(std::move(x)), Point(std::move(y)));
            PairPoint b(Point(std::move(u)), Point(std::move(v)));
            slots[k] = make_sample(space, F, std::move(a), std::move(b));
        }
    });
    std::vector<SamplePair> out;
    out.reserve(count);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

std::vector<SamplePair> directed_samples(const SpaceDescriptor& space, const CoupledMapDef& F,
                                         const Box& region,
                                         const std::vector<ComparablePair>& adversarial) {
    if (region.dim() != space.dim) throw InputError("region dimension does not match the space");
    if (!F.domain_box().contains(region)) {
        throw InputError("region is not inside the domain box of map '" + F.name() + "'");
    }
    // lower <= center <= upper, so every (lo_idx <= hi_idx) choice is ordered
    std::vector<Point> anchors;
    for (Point p : {region.lower(), region.center(), region.upper()}) {
        if (std::find(anchors.begin(), anchors.end(), p) == anchors.end()) {
            anchors.push_back(std::move(p));
        }
    }
    std::vector<SamplePair> out;
    const std::size_t k = anchors.size();
    for (std::size_t iu = 0; iu < k; ++iu) {
        for (std::size_t ix = iu; ix < k; ++ix) {
            for (std::size_t iy = 0; iy < k; ++iy) {
                for (std::size_t iv = iy; iv < k; ++iv) {
                    out.push_back(make_sample(space, F, PairPoint(anchors[ix], anchors[iy]),
                                              PairPoint(anchors[iu], anchors[iv])));
                }
            }
        }
    }
    for (const auto& p : adversarial) out.push_back(make_sample(space, F, p.a, p.b));
    return out;
}

std::optional<AlphaInterval> feasible_alpha(const std::vector<SamplePair>& samples, double r) {
    AlphaInterval iv{0.0, 1.0};
    bool hi_inclusive = false;
    for (const auto& s : samples) {
        // d_F <= alpha m + r (1 - alpha) s / 2  <=>  alpha c >= e
        const double half_spread = 0.5 * r * s.terms.spread;
        const double c = s.terms.m - half_spread;
        const double e = s.terms.image_distance - half_spread;
        if (c > 0.0) {
            iv.lo = std::max(iv.lo, e / c);
        } else if (c < 0.0) {
            const double bound = e / c;
            if (bound < iv.hi) {
                iv.hi = bound;
                hi_inclusive = true;
            }
        } else if (e > 0.0) {
            return std::nullopt;
        }
    }
    const bool ok = hi_inclusive ? iv.lo <= iv.hi : iv.lo < iv.hi;
    if (!ok) return std::nullopt;
    return iv;
}

namespace {

bool all_hold(const std::vector<SamplePair>& samples, const ContractionParams& params) {
    return std::all_of(samples.begin(), samples.end(), [&](const SamplePair& s) {
        return margin_from_terms(params, s.terms) >= 0.0;
    });
}

// A parameter pair realizing ratio r, centered in the feasible alpha interval.
std::optional<ContractionParams> witness(const std::vector<SamplePair>& samples, double r) {
    const auto iv = feasible_alpha(samples, r);
    if (!iv) return std::nullopt;
    const double alpha = 0.5 * (iv->lo + std::min(iv->hi, 1.0));
    if (!(alpha < 1.0)) return std::nullopt;
    const ContractionParams params(alpha, r * (1.0 - alpha));
    if (!all_hold(samples, params)) return std::nullopt;
    return params;
}

}  // namespace

ParamEstimate estimate_params(const std::vector<SamplePair>& samples) {
    if (samples.empty()) throw InputError("parameter estimation needs at least one sample");
    ParamEstimate est;
    est.sample_count = samples.size();

    constexpr double floor_r = kRatioTolerance;
    constexpr double ceil_r = 1.0 - kRatioTolerance;
    if (!feasible_alpha(samples, ceil_r)) return est;

    double lo = floor_r;
    double hi = ceil_r;
    if (feasible_alpha(samples, floor_r)) {
        hi = floor_r;
        est.at_floor = true;
    } else {
        while (hi - lo > kRatioTolerance) {
            const double mid = 0.5 * (lo + hi);
            if (feasible_alpha(samples, mid)) hi = mid;
            else lo = mid;
        }
    }
    // The interval test is exact in real arithmetic; nudge r upward if the
    // recomputed margins at the witness lose a rounding error.
    for (int attempt = 0; attempt < 64 && hi <= ceil_r; ++attempt) {
        if (auto p = witness(samples, hi)) {
            est.feasible = true;
            est.ratio = hi;
            est.params = p;
            return est;
        }
        hi += kRatioTolerance * 1e-3 * (1 << std::min(attempt, 20));
    }
    return est;
}

CertificateReport certify_samples(const std::vector<SamplePair>& samples,
                                  const ContractionParams& params) {
    CertificateReport report(params);
    report.sample_count = samples.size();
    for (const auto& s : samples) {
        const double m = margin_from_terms(params, s.terms);
        if (m < 0.0) ++report.violations;
        if (!report.worst_margin || m < *report.worst_margin) {
            report.worst_margin = m;
            report.min_margin_pair = s;
        }
    }
    return report;
}

CertificateReport certify_region(const SpaceDescriptor& space, const CoupledMapDef& F,
                                 const ContractionParams& params, const Box& region,
                                 std::size_t count, std::uint64_t rng_seed,
                                 const std::vector<ComparablePair>& adversarial,
                                 std::size_t threads) {
    std::vector<SamplePair> samples =
        sample_comparable_pairs(space, F, region, count, rng_seed, threads);
    std::vector<SamplePair> directed = directed_samples(space, F, region, adversarial);
    const std::size_t directed_count = directed.size();
    samples.insert(samples.end(), std::make_move_iterator(directed.begin()),
                   std::make_move_iterator(directed.end()));
    CertificateReport report = certify_samples(samples, params);
    report.directed_count = directed_count;
    return report;
}

}  // namespace cfp
