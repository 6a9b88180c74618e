#include "coupled_fp/space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "coupled_fp/errors.hpp"

namespace cfp {

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (!std::isfinite(coords_[i])) {
            throw InputError("point coordinate " + std::to_string(i) + " is not finite");
        }
    }
}

Point::Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}

Point Point::filled(std::size_t n, double value) {
    return Point(std::vector<double>(n, value));
}

PairPoint::PairPoint(Point first_, Point second_)
    : first(std::move(first_)), second(std::move(second_)) {
    if (first.dim() != second.dim()) {
        throw InputError("pair components have different dimensions (" +
                         std::to_string(first.dim()) + " vs " +
                         std::to_string(second.dim()) + ")");
    }
}

std::string_view to_string(Metric m) {
    switch (m) {
        case Metric::euclidean: return "euclidean";
        case Metric::max: return "max";
        case Metric::l1: return "l1";
    }
    return "unknown";
}

Metric parse_metric(std::string_view name) {
    if (name == "euclidean") return Metric::euclidean;
    if (name == "max") return Metric::max;
    if (name == "l1") return Metric::l1;
    throw InputError("unknown metric '" + std::string(name) + "' (expected euclidean, max or l1)");
}

SpaceDescriptor::SpaceDescriptor(std::size_t dim_, Metric metric_, double order_slack_)
    : dim(dim_), metric(metric_), order_slack(order_slack_) {
    if (dim == 0) throw InputError("space dimension must be at least 1");
    if (!(order_slack >= 0.0) || !std::isfinite(order_slack)) {
        throw InputError("order slack must be finite and nonnegative");
    }
}

Box::Box(std::vector<Interval> sides) : sides_(std::move(sides)) {
    for (std::size_t i = 0; i < sides_.size(); ++i) {
        const auto& s = sides_[i];
        if (!std::isfinite(s.lo) || !std::isfinite(s.hi) || s.lo > s.hi) {
            throw InputError("box side " + std::to_string(i) + " is empty or not finite");
        }
    }
}

Box Box::cube(std::size_t dim, double lo, double hi) {
    return Box(std::vector<Interval>(dim, Interval{lo, hi}));
}

bool Box::contains(const Point& p) const {
    if (p.dim() != dim()) return false;
    for (std::size_t i = 0; i < dim(); ++i) {
        if (!sides_[i].contains(p[i])) return false;
    }
    return true;
}

bool Box::contains(const Box& inner) const {
    if (inner.dim() != dim()) return false;
    for (std::size_t i = 0; i < dim(); ++i) {
        if (inner.sides_[i].lo < sides_[i].lo || inner.sides_[i].hi > sides_[i].hi) return false;
    }
    return true;
}

bool Box::is_point() const {
    return std::all_of(sides_.begin(), sides_.end(),
                       [](const Interval& s) { return s.width() == 0.0; });
}

Point Box::lower() const {
    std::vector<double> v(dim());
    for (std::size_t i = 0; i < dim(); ++i) v[i] = sides_[i].lo;
    return Point(std::move(v));
}

Point Box::upper() const {
    std::vector<double> v(dim());
    for (std::size_t i = 0; i < dim(); ++i) v[i] = sides_[i].hi;
    return Point(std::move(v));
}

Point Box::center() const {
    std::vector<double> v(dim());
    for (std::size_t i = 0; i < dim(); ++i) v[i] = 0.5 * (sides_[i].lo + sides_[i].hi);
    return Point(std::move(v));
}

Box Box::scaled(double factor) const {
    std::vector<Interval> out(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
        const double c = 0.5 * (sides_[i].lo + sides_[i].hi);
        const double half = 0.5 * factor * sides_[i].width();
        out[i] = Interval{c - half, c + half};
    }
    return Box(std::move(out));
}

void require_dim(const SpaceDescriptor& space, const Point& p, std::string_view what) {
    if (p.dim() != space.dim) {
        throw InputError(std::string(what) + " has dimension " + std::to_string(p.dim()) +
                         ", expected " + std::to_string(space.dim));
    }
}

double distance(const SpaceDescriptor& space, const Point& p, const Point& q) {
    require_dim(space, p, "first point");
    require_dim(space, q, "second point");
    double acc = 0.0;
    switch (space.metric) {
        case Metric::euclidean: {
            for (std::size_t i = 0; i < p.dim(); ++i) {
                const double t = p[i] - q[i];
                acc += t * t;
            }
            return std::sqrt(acc);
        }
        case Metric::max:
            for (std::size_t i = 0; i < p.dim(); ++i) acc = std::max(acc, std::abs(p[i] - q[i]));
            return acc;
        case Metric::l1:
            for (std::size_t i = 0; i < p.dim(); ++i) acc += std::abs(p[i] - q[i]);
            return acc;
    }
    return acc;
}

bool leq(const SpaceDescriptor& space, const Point& p, const Point& q) {
    require_dim(space, p, "first point");
    require_dim(space, q, "second point");
    for (std::size_t i = 0; i < p.dim(); ++i) {
        if (!(p[i] <= q[i] + space.order_slack)) return false;
    }
    return true;
}

bool product_leq(const SpaceDescriptor& space, const PairPoint& a, const PairPoint& b) {
    return leq(space, a.first, b.first) && leq(space, b.second, a.second);
}

bool comparable(const SpaceDescriptor& space, const PairPoint& a, const PairPoint& b) {
    return product_leq(space, a, b) || product_leq(space, b, a);
}

PairPoint find_bridge(const SpaceDescriptor& space, const PairPoint& a, const PairPoint& b) {
    require_dim(space, a.first, "first pair");
    require_dim(space, a.second, "first pair");
    require_dim(space, b.first, "second pair");
    require_dim(space, b.second, "second pair");
    std::vector<double> hi(space.dim), lo(space.dim);
    for (std::size_t i = 0; i < space.dim; ++i) {
        hi[i] = std::max(a.first[i], b.first[i]);
        lo[i] = std::min(a.second[i], b.second[i]);
    }
    return PairPoint(Point(std::move(hi)), Point(std::move(lo)));
}

}  // namespace cfp
