#include "ramify/herbrand.hpp"

#include <algorithm>

#include "ramify/errors.hpp"

namespace ramify {

Filtration::Filtration(std::vector<std::int64_t> orders) : orders_(std::move(orders)) {
    if (orders_.empty()) throw input_error("bad_filtration", "filtration needs at least g_0");
    for (std::size_t i = 0; i < orders_.size(); ++i) {
        if (orders_[i] < 1) throw input_error("bad_filtration", "group orders must be positive");
        if (i > 0 && orders_[i - 1] % orders_[i] != 0)
            throw input_error("bad_filtration",
                              "g_" + std::to_string(i) + " = " + std::to_string(orders_[i]) +
                                  " does not divide g_" + std::to_string(i - 1) + " = " +
                                  std::to_string(orders_[i - 1]));
    }
    while (orders_.size() > 1 && orders_.back() == 1) orders_.pop_back();
}

std::int64_t Filtration::g(std::int64_t i) const noexcept {
    if (i < 0) i = 0;
    return static_cast<std::size_t>(i) < orders_.size() ? orders_[static_cast<std::size_t>(i)] : 1;
}

std::int64_t Filtration::last_nontrivial() const noexcept {
    return orders_.back() == 1 ? -1 : static_cast<std::int64_t>(orders_.size()) - 1;
}

std::vector<std::int64_t> Filtration::lower_jumps() const {
    std::vector<std::int64_t> jumps;
    for (std::int64_t b = 0; b <= last_nontrivial(); ++b)
        if (g(b) > g(b + 1)) jumps.push_back(b);
    return jumps;
}

// ---------------------------------------------------------------------------

HerbrandMap::HerbrandMap(std::vector<Segment> segments, HerbrandTag tag) : tag_(tag) {
    if (segments.size() < 2 || segments[0].start != Rational(-1) || segments[1].start != Rational(0))
        throw input_error("bad_herbrand_map", "segments must start at -1 and 0");
    if (segments[0].slope != Rational(1))
        throw input_error("bad_herbrand_map", "slope on [-1, 0] must be 1");
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (segments[i].slope <= Rational(0))
            throw input_error("bad_herbrand_map", "slopes must be positive");
        if (i > 0 && segments[i].start <= segments[i - 1].start)
            throw input_error("bad_herbrand_map", "breakpoints must increase strictly");
    }
    segments_.reserve(segments.size());
    segments_.push_back(segments[0]);
    segments_.push_back(segments[1]);
    for (std::size_t i = 2; i < segments.size(); ++i)
        if (segments[i].slope != segments_.back().slope) segments_.push_back(segments[i]);

    for (std::size_t i = 2; i < segments_.size(); ++i) {
        bool concave = segments_[i].slope < segments_[i - 1].slope;
        if (tag_ == HerbrandTag::phi ? !concave : concave)
            throw input_error("bad_herbrand_map", tag_ == HerbrandTag::phi
                                                      ? "phi must have decreasing slopes on [0, oo)"
                                                      : "psi must have increasing slopes on [0, oo)");
    }

    values_.resize(segments_.size());
    values_[0] = Rational(-1);
    values_[1] = Rational(0);
    for (std::size_t i = 2; i < segments_.size(); ++i)
        values_[i] = values_[i - 1] + segments_[i - 1].slope * (segments_[i].start - segments_[i - 1].start);
}

HerbrandMap HerbrandMap::identity(HerbrandTag tag) {
    return HerbrandMap({{Rational(-1), Rational(1)}, {Rational(0), Rational(1)}}, tag);
}

namespace {

// Index of the segment containing x (the last one whose start is <= x).
std::size_t segment_index(const std::vector<HerbrandMap::Segment>& segs, const Rational& x) {
    auto it = std::upper_bound(segs.begin(), segs.end(), x,
                               [](const Rational& v, const HerbrandMap::Segment& s) { return v < s.start; });
    return static_cast<std::size_t>(it - segs.begin()) - 1;
}

}  // namespace

Rational HerbrandMap::slope_at(const Rational& x) const {
    if (x < Rational(-1)) throw input_error("out_of_domain", "x = " + x.to_string() + " is below -1");
    return segments_[segment_index(segments_, x)].slope;
}

HerbrandMap phi_from_filtration(const Filtration& filt) {
    std::vector<HerbrandMap::Segment> segs{{Rational(-1), Rational(1)}};
    const std::int64_t g0 = filt.g0();
    const auto& orders = filt.orders();
    // slope on [i, i+1] is g_{i+1}/g0; past the stored list it is 1/g0
    for (std::size_t i = 0; i < orders.size(); ++i)
        segs.push_back({Rational(static_cast<std::int64_t>(i)), Rational(filt.g(static_cast<std::int64_t>(i) + 1), g0)});
    return HerbrandMap(std::move(segs), HerbrandTag::phi);
}

HerbrandMap psi_from_filtration(const Filtration& filt) { return invert(phi_from_filtration(filt)); }

HerbrandMap invert(const HerbrandMap& map) {
    std::vector<HerbrandMap::Segment> segs;
    segs.reserve(map.segments().size());
    for (std::size_t i = 0; i < map.segments().size(); ++i)
        segs.push_back({map.value_at_start(i), Rational(1) / map.segments()[i].slope});
    return HerbrandMap(std::move(segs), map.tag() == HerbrandTag::phi ? HerbrandTag::psi : HerbrandTag::phi);
}

Rational evaluate(const HerbrandMap& map, const Rational& x) {
    if (x < Rational(-1)) throw input_error("out_of_domain", "x = " + x.to_string() + " is below -1");
    std::size_t i = segment_index(map.segments(), x);
    const auto& s = map.segments()[i];
    return map.value_at_start(i) + s.slope * (x - s.start);
}

HerbrandMap compose(const HerbrandMap& outer, const HerbrandMap& inner) {
    if (outer.tag() != inner.tag())
        throw input_error("tag_mismatch", "compose needs two phi maps or two psi maps");
    std::vector<Rational> points;
    for (const auto& s : inner.segments()) points.push_back(s.start);
    // pull the outer breakpoints back through inner
    HerbrandMap inner_inv = invert(inner);
    for (const auto& s : outer.segments()) points.push_back(evaluate(inner_inv, s.start));
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    std::vector<HerbrandMap::Segment> segs;
    segs.reserve(points.size());
    for (const auto& x : points)
        segs.push_back({x, outer.slope_at(evaluate(inner, x)) * inner.slope_at(x)});
    return HerbrandMap(std::move(segs), outer.tag());
}

std::vector<Rational> upper_jumps(const Filtration& filt) {
    HerbrandMap phi = phi_from_filtration(filt);
    std::vector<Rational> out;
    for (std::int64_t b : filt.lower_jumps()) out.push_back(evaluate(phi, Rational(b)));
    return out;
}

std::int64_t group_order_at_upper(const Filtration& filt, const Rational& y) {
    if (y < Rational(0)) throw input_error("out_of_domain", "upper index must be >= 0");
    return filt.g(evaluate(psi_from_filtration(filt), y).ceil());
}

}  // namespace ramify
