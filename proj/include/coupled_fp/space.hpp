#pragma once

// Finite-dimensional partially ordered metric spaces: R^d with a complete
// norm metric and the coordinatewise order, plus the product order on X x X.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cfp {

/// A point of R^d. Every coordinate is finite.
class Point {
public:
    Point() = default;
    explicit Point(std::vector<double> coords);
    Point(std::initializer_list<double> coords);

    /// `n` copies of `value`.
    static Point filled(std::size_t n, double value);

    std::size_t dim() const noexcept { return coords_.size(); }
    double operator[](std::size_t i) const { return coords_[i]; }
    std::span<const double> coords() const noexcept { return coords_; }
    const std::vector<double>& values() const noexcept { return coords_; }

    friend bool operator==(const Point&, const Point&) = default;

private:
    std::vector<double> coords_;
};

/// An element (first, second) of X x X.
struct PairPoint {
    Point first;
    Point second;

    PairPoint() = default;
    PairPoint(Point first, Point second);

    std::size_t dim() const noexcept { return first.dim(); }

    friend bool operator==(const PairPoint&, const PairPoint&) = default;
};

enum class Metric { euclidean, max, l1 };

std::string_view to_string(Metric m);
/// Throws InputError for anything other than "euclidean", "max" or "l1".
Metric parse_metric(std::string_view name);

/// (X, d, <=) realized as R^dim with the chosen norm metric and the
/// coordinatewise order p <= q iff p_i <= q_i + order_slack.
///
/// A nonzero slack is a diagnostic knob only: the relation is then no longer
/// antisymmetric or transitive.
struct SpaceDescriptor {
    std::size_t dim = 1;
    Metric metric = Metric::euclidean;
    double order_slack = 0.0;

    SpaceDescriptor() = default;
    SpaceDescriptor(std::size_t dim, Metric metric, double order_slack = 0.0);
};

/// Closed interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const noexcept { return hi - lo; }
    bool contains(double v) const noexcept { return lo <= v && v <= hi; }
};

/// Axis-aligned box, one interval per coordinate.
class Box {
public:
    Box() = default;
    explicit Box(std::vector<Interval> sides);
    /// The cube [lo, hi]^dim.
    static Box cube(std::size_t dim, double lo, double hi);

    std::size_t dim() const noexcept { return sides_.size(); }
    const Interval& operator[](std::size_t i) const { return sides_[i]; }
    std::span<const Interval> sides() const noexcept { return sides_; }

    bool contains(const Point& p) const;
    bool contains(const Box& inner) const;
    /// Degenerate if every side has zero width.
    bool is_point() const;

    Point lower() const;
    Point upper() const;
    Point center() const;

    /// The box with every side's width multiplied by `factor` about its
    /// center.
    Box scaled(double factor) const;

private:
    std::vector<Interval> sides_;
};

/// Norm of p - q in the space's metric.
double distance(const SpaceDescriptor& space, const Point& p, const Point& q);

/// Coordinatewise order: p_i <= q_i + order_slack for all i.
bool leq(const SpaceDescriptor& space, const Point& p, const Point& q);

/// Product order on X x X. With a = (u, v) and b = (x, y):
/// a <= b iff u <= x and y <= v (the second component is reversed).
bool product_leq(const SpaceDescriptor& space, const PairPoint& a, const PairPoint& b);

bool comparable(const SpaceDescriptor& space, const PairPoint& a, const PairPoint& b);

/// A pair comparable to both inputs: coordinatewise max of the first
/// components, coordinatewise min of the second. The result is >= a and >= b
/// in the product order, so it always exists in R^d.
PairPoint find_bridge(const SpaceDescriptor& space, const PairPoint& a, const PairPoint& b);

/// Throws InputError unless `p` has dimension `space.dim`.
void require_dim(const SpaceDescriptor& space, const Point& p, std::string_view what);

}  // namespace cfp
