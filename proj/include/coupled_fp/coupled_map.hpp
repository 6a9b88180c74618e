#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coupled_fp/space.hpp"

namespace cfp {

/// F : X x X -> X restricted to a domain box on which its hypotheses are
/// claimed. The evaluator must be deterministic; it receives coordinates of
/// x and y and returns the coordinates of F(x, y).
class CoupledMapDef {
public:
    using Evaluator =
        std::function<std::vector<double>(std::span<const double> x, std::span<const double> y)>;

    CoupledMapDef(std::string name, Box domain_box, Evaluator evaluator);

    const std::string& name() const noexcept { return name_; }
    const Box& domain_box() const noexcept { return domain_; }
    std::size_t dim() const noexcept { return domain_.dim(); }

    /// F(x, y) without the domain-box check. Still throws DomainError if the
    /// evaluator reports a domain failure or returns a non-finite or
    /// wrongly sized result.
    Point evaluate_unchecked(const Point& x, const Point& y) const;

    /// The same evaluator over a different box of equal dimension.
    CoupledMapDef with_domain(Box domain_box) const;

private:
    std::string name_;
    Box domain_;
    Evaluator evaluator_;
};

/// F(x, y); throws DomainError when x or y lies outside the domain box.
Point eval_map(const CoupledMapDef& F, const Point& x, const Point& y);

/// The pair (alpha, beta) of the rational contraction inequality, with
/// alpha >= 0, beta > 0, alpha + beta < 1.
///
/// alpha = 0 is accepted (the inequality only gets harder to satisfy as
/// alpha shrinks because M >= 0) but flagged by `alpha_is_zero()`.
class ContractionParams {
public:
    ContractionParams(double alpha, double beta);

    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    /// r = beta / (1 - alpha), the geometric rate of the iterate gaps.
    double ratio() const noexcept { return beta_ / (1.0 - alpha_); }
    bool alpha_is_zero() const noexcept { return alpha_ == 0.0; }

    friend bool operator==(const ContractionParams&, const ContractionParams&) = default;

private:
    double alpha_;
    double beta_;
};

/// Two pairs a = (x, y), b = (u, v) with b <= a in the product order, i.e.
/// x >= u and y <= v. These are the pairs the contraction inequality
/// quantifies over.
struct ComparablePair {
    PairPoint a;
    PairPoint b;
};

/// The pieces of the contraction inequality at one comparable pair.
struct ContractionTerms {
    double image_distance = 0.0;  ///< d(F(x,y), F(u,v))
    double m = 0.0;               ///< M((x,y),(u,v))
    double spread = 0.0;          ///< d(x,u) + d(y,v)
};

/// M((x,y),(u,v)) = min of
///   d(x,F(x,y)) (2 + d(u,F(u,v)) + d(v,F(v,u))) / (2 + d(x,u) + d(y,v)) and
///   d(u,F(u,v)) (2 + d(x,F(x,y)) + d(y,F(y,x))) / (2 + d(x,u) + d(y,v)).
/// Defined for any two pairs; the common denominator is at least 2.
double rational_min_M(const SpaceDescriptor& space, const CoupledMapDef& F, const PairPoint& a,
                      const PairPoint& b);

/// Terms of the inequality at (a, b). Requires product_leq(b, a), otherwise
/// throws PreconditionError.
ContractionTerms contraction_terms(const SpaceDescriptor& space, const CoupledMapDef& F,
                                   const PairPoint& a, const PairPoint& b);

/// alpha M(a,b) + (beta/2)[d(x,u) + d(y,v)] - d(F(x,y), F(u,v)).
/// Nonnegative iff the contraction inequality holds at this pair.
/// Requires product_leq(b, a), otherwise throws PreconditionError.
double contraction_margin(const SpaceDescriptor& space, const CoupledMapDef& F,
                          const ContractionParams& params, const PairPoint& a,
                          const PairPoint& b);

/// Margin of the inequality from its precomputed terms.
inline double margin_from_terms(const ContractionParams& params, const ContractionTerms& t) {
    return params.alpha() * t.m + 0.5 * params.beta() * t.spread - t.image_distance;
}

/// Witness of a mixed-monotone violation: with `argument == first` the
/// triple was (lower, upper, other) with F(lower, other) <= F(upper, other)
/// failing; with `argument == second` it was (other, lower, upper) with
/// F(other, lower) >= F(other, upper) failing.
struct MonotoneWitness {
    enum class Argument { first, second };
    Argument argument = Argument::first;
    Point lower;
    Point upper;
    Point other;
};

struct MonotoneReport {
    std::size_t samples = 0;
    /// Two checks per sample, one per argument.
    std::size_t checks = 0;
    std::size_t violations = 0;
    /// Largest amount by which an ordering failed (0 when none did).
    double worst_violation = 0.0;
    std::optional<MonotoneWitness> worst;

    bool falsified() const noexcept { return violations > 0; }
};

/// Seeded Monte Carlo falsification of the mixed monotone property on the
/// map's domain box. The result depends only on (F, sample_count, rng_seed),
/// not on `threads` (0 selects default_thread_count()).
MonotoneReport mixed_monotone_check(const SpaceDescriptor& space, const CoupledMapDef& F,
                                    std::size_t sample_count, std::uint64_t rng_seed,
                                    std::size_t threads = 1);

/// Margin of the single-variable rational contraction obtained on the
/// diagonal f(x) = F(x, x):
///   alpha d(y,f(y)) (1 + d(x,f(x))) / (1 + d(x,y)) + beta d(x,y) - d(f(x), f(y))
/// with x = x_hat, y = y_hat.
double dass_gupta_margin(const SpaceDescriptor& space, const CoupledMapDef& F,
                         const ContractionParams& params, const Point& x_hat,
                         const Point& y_hat);

}  // namespace cfp
