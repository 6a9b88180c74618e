#include "coupled_fp/coupled_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coupled_fp/errors.hpp"
#include "coupled_fp/parallel.hpp"

namespace cfp {

CoupledMapDef::CoupledMapDef(std::string name, Box domain_box, Evaluator evaluator)
    : name_(std::move(name)), domain_(std::move(domain_box)), evaluator_(std::move(evaluator)) {
    if (domain_.dim() == 0) throw InputError("map '" + name_ + "' has an empty domain box");
    if (!evaluator_) throw InputError("map '" + name_ + "' has no evaluator");
}

Point CoupledMapDef::evaluate_unchecked(const Point& x, const Point& y) const {
    if (x.dim() != dim() || y.dim() != dim()) {
        throw InputError("map '" + name_ + "' expects arguments of dimension " +
                         std::to_string(dim()));
    }
    std::vector<double> out = evaluator_(x.coords(), y.coords());
    if (out.size() != dim()) {
        throw DomainError("map '" + name_ + "' returned " + std::to_string(out.size()) +
                          " coordinates, expected " + std::to_string(dim()));
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!std::isfinite(out[i])) {
            throw DomainError("map '" + name_ + "' produced a non-finite coordinate " +
                              std::to_string(i));
        }
    }
    return Point(std::move(out));
}

CoupledMapDef CoupledMapDef::with_domain(Box domain_box) const {
    if (domain_box.dim() != dim()) {
        throw InputError("replacement domain box for map '" + name_ + "' has the wrong dimension");
    }
    return CoupledMapDef(name_, std::move(domain_box), evaluator_);
}

Point eval_map(const CoupledMapDef& F, const Point& x, const Point& y) {
    if (!F.domain_box().contains(x) || !F.domain_box().contains(y)) {
        if (x.dim() != F.dim() || y.dim() != F.dim()) {
            throw InputError("map '" + F.name() + "' expects arguments of dimension " +
                             std::to_string(F.dim()));
        }
        throw DomainError("argument outside the domain box of map '" + F.name() + "'");
    }
    return F.evaluate_unchecked(x, y);
}

ContractionParams::ContractionParams(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    if (!std::isfinite(alpha) || !std::isfinite(beta)) {
        throw InputError("contraction parameters must be finite");
    }
    if (alpha < 0.0) throw InputError("alpha must be nonnegative");
    if (!(beta > 0.0)) throw InputError("beta must be positive");
    if (!(alpha + beta < 1.0)) throw InputError("alpha + beta must be less than 1");
}

namespace {

// Displacements d(x,F(x,y)), d(y,F(y,x)) of one pair and the image F(x,y).
struct PairImage {
    Point fx;  // F(x, y)
    double dx = 0.0;
    double dy = 0.0;
};

PairImage image_of(const SpaceDescriptor& space, const CoupledMapDef& F, const PairPoint& p) {
    PairImage img;
    img.fx = eval_map(F, p.first, p.second);
    const Point fy = eval_map(F, p.second, p.first);
    img.dx = distance(space, p.first, img.fx);
    img.dy = distance(space, p.second, fy);
    return img;
}

double rational_min(const PairImage& ia, const PairImage& ib, double spread) {
    const double denom = 2.0 + spread;
    const double t1 = ia.dx * (2.0 + ib.dx + ib.dy) / denom;
    const double t2 = ib.dx * (2.0 + ia.dx + ia.dy) / denom;
    return std::min(t1, t2);
}

void check_pair_dims(const SpaceDescriptor& space, const PairPoint& p) {
    require_dim(space, p.first, "pair component");
    require_dim(space, p.second, "pair component");
}

}  // namespace

double rational_min_M(const SpaceDescriptor& space, const CoupledMapDef& F, const PairPoint& a,
                      const PairPoint& b) {
    check_pair_dims(space, a);
    check_pair_dims(space, b);
    const PairImage ia = image_of(space, F, a);
    const PairImage ib = image_of(space, F, b);
    const double spread = distance(space, a.first, b.first) + distance(space, a.second, b.second);
    return rational_min(ia, ib, spread);
}

ContractionTerms contraction_terms(const SpaceDescriptor& space, const CoupledMapDef& F,
                                   const PairPoint& a, const PairPoint& b) {
    check_pair_dims(space, a);
    check_pair_dims(space, b);
    if (!product_leq(space, b, a)) {
        throw PreconditionError(
            "contraction inequality requires x >= u and y <= v for a = (x,y), b = (u,v)");
    }
    const PairImage ia = image_of(space, F, a);
    const PairImage ib = image_of(space, F, b);
    ContractionTerms t;
    t.spread = distance(space, a.first, b.first) + distance(space, a.second, b.second);
    t.m = rational_min(ia, ib, t.spread);
    t.image_distance = distance(space, ia.fx, ib.fx);
    return t;
}

double contraction_margin(const SpaceDescriptor& space, const CoupledMapDef& F,
                          const ContractionParams& params, const PairPoint& a,
                          const PairPoint& b) {
    return margin_from_terms(params, contraction_terms(space, F, a, b));
}

namespace {

// Largest amount by which p <= q fails (<= 0 when it holds).
double order_excess(const SpaceDescriptor& space, const Point& p, const Point& q) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.dim(); ++i) {
        worst = std::max(worst, p[i] - q[i] - space.order_slack);
    }
    return worst;
}

Point sample_in(const Box& box, std::mt19937_64& gen) {
    std::vector<double> v(box.dim());
    for (std::size_t i = 0; i < box.dim(); ++i) v[i] = uniform(gen, box[i].lo, box[i].hi);
    return Point(std::move(v));
}

void ordered_pair(const Box& box, std::mt19937_64& gen, Point& lo, Point& hi) {
    const Point p = sample_in(box, gen);
    const Point q = sample_in(box, gen);
    std::vector<double> l(box.dim()), h(box.dim());
    for (std::size_t i = 0; i < box.dim(); ++i) {
        l[i] = std::min(p[i], q[i]);
        h[i] = std::max(p[i], q[i]);
    }
    lo = Point(std::move(l));
    hi = Point(std::move(h));
}

struct BlockFindings {
    std::size_t violations = 0;
    double worst = 0.0;
    std::optional<MonotoneWitness> witness;
};

}  // namespace

MonotoneReport mixed_monotone_check(const SpaceDescriptor& space, const CoupledMapDef& F,
                                    std::size_t sample_count, std::uint64_t rng_seed,
                                    std::size_t threads) {
    if (sample_count == 0) throw InputError("mixed monotone check needs at least one sample");
    if (F.dim() != space.dim) throw InputError("map dimension does not match the space");
    const Box& box = F.domain_box();

    const std::size_t blocks = (sample_count + kSampleBlock - 1) / kSampleBlock;
    std::vector<BlockFindings> found(blocks);
    parallel_for(blocks, threads, [&](std::size_t blk) {
        auto gen = block_stream(rng_seed, blk);
        const std::size_t begin = blk * kSampleBlock;
        const std::size_t end = std::min(sample_count, begin + kSampleBlock);
        BlockFindings& out = found[blk];
        auto record = [&](double excess, MonotoneWitness::Argument arg, const Point& lo,
                          const Point& hi, const Point& other) {
            if (excess <= 0.0) return;
            ++out.violations;
            if (excess > out.worst) {
                out.worst = excess;
                out.witness = MonotoneWitness{arg, lo, hi, other};
            }
        };
        for (std::size_t i = begin; i < end; ++i) {
            Point lo, hi;
            ordered_pair(box, gen, lo, hi);
            const Point other = sample_in(box, gen);
            // F(lo, other) <= F(hi, other)
            record(order_excess(space, eval_map(F, lo, other), eval_map(F, hi, other)),
                   MonotoneWitness::Argument::first, lo, hi, other);

            Point lo2, hi2;
            ordered_pair(box, gen, lo2, hi2);
            const Point other2 = sample_in(box, gen);
            // F(other, lo) >= F(other, hi)
            record(order_excess(space, eval_map(F, other2, hi2), eval_map(F, other2, lo2)),
                   MonotoneWitness::Argument::second, lo2, hi2, other2);
        }
    });

    MonotoneReport report;
    report.samples = sample_count;
    report.checks = 2 * sample_count;
    for (const auto& f : found) {
        report.violations += f.violations;
        // strict comparison keeps the earliest block on ties
        if (f.witness && f.worst > report.worst_violation) {
            report.worst_violation = f.worst;
            report.worst = f.witness;
        }
    }
    return report;
}

double dass_gupta_margin(const SpaceDescriptor& space, const CoupledMapDef& F,
                         const ContractionParams& params, const Point& x_hat,
                         const Point& y_hat) {
    require_dim(space, x_hat, "x_hat");
    require_dim(space, y_hat, "y_hat");
    const Point fx = eval_map(F, x_hat, x_hat);
    const Point fy = eval_map(F, y_hat, y_hat);
    const double dxy = distance(space, x_hat, y_hat);
    const double rational =
        distance(space, y_hat, fy) * (1.0 + distance(space, x_hat, fx)) / (1.0 + dxy);
    return params.alpha() * rational + params.beta() * dxy - distance(space, fx, fy);
}

}  // namespace cfp
