#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ramify/rational.hpp"

namespace ramify {

/// Orders g_0 >= g_1 >= ... of the lower-numbering ramification groups at one
/// prime. Each order divides the previous one; trailing 1s are trimmed, so the
/// unramified filtration is the single entry [1]. g(i) for i past the stored
/// list is 1.
class Filtration {
public:
    explicit Filtration(std::vector<std::int64_t> orders);

    static Filtration unramified() { return Filtration({1}); }

    const std::vector<std::int64_t>& orders() const noexcept { return orders_; }
    std::int64_t g(std::int64_t i) const noexcept;
    std::int64_t g0() const noexcept { return orders_.front(); }
    /// Largest index with g_i > 1, or -1 when unramified.
    std::int64_t last_nontrivial() const noexcept;
    /// Lower indices b with g_b > g_{b+1}, ascending.
    std::vector<std::int64_t> lower_jumps() const;

    friend bool operator==(const Filtration&, const Filtration&) = default;

private:
    std::vector<std::int64_t> orders_;
};

/// Which Herbrand function a map represents. Inversion swaps the tag.
enum class HerbrandTag { phi, psi };

/// Exact continuous piecewise-linear map on [-1, oo) with f(0) = 0 and slope 1
/// on [-1, 0]. Stored with mandatory breakpoints at -1 and 0 and every other
/// run of equal slopes merged, so two maps compare equal iff they agree as
/// functions.
class HerbrandMap {
public:
    struct Segment {
        Rational start;
        Rational slope;
        friend bool operator==(const Segment&, const Segment&) = default;
    };

    /// Validates and canonicalises; throws input_error on a malformed list.
    HerbrandMap(std::vector<Segment> segments, HerbrandTag tag);

    static HerbrandMap identity(HerbrandTag tag = HerbrandTag::phi);

    const std::vector<Segment>& segments() const noexcept { return segments_; }
    HerbrandTag tag() const noexcept { return tag_; }
    /// Value of the map at the start of segment i.
    const Rational& value_at_start(std::size_t i) const { return values_[i]; }

    /// Right derivative at x.
    Rational slope_at(const Rational& x) const;

    friend bool operator==(const HerbrandMap&, const HerbrandMap&) = default;

private:
    std::vector<Segment> segments_;
    std::vector<Rational> values_;
    HerbrandTag tag_;
};

/// phi with slope g_{i+1}/g_0 on [i, i+1] for i >= 0.
HerbrandMap phi_from_filtration(const Filtration& filt);
HerbrandMap psi_from_filtration(const Filtration& filt);

/// Compositional inverse; invert(invert(m)) == m.
HerbrandMap invert(const HerbrandMap& map);

/// Exact value; x must be >= -1.
Rational evaluate(const HerbrandMap& map, const Rational& x);

/// outer o inner. Both maps must carry the same tag.
HerbrandMap compose(const HerbrandMap& outer, const HerbrandMap& inner);

/// Upper-numbering jumps phi(b) over the lower jumps b, ascending.
std::vector<Rational> upper_jumps(const Filtration& filt);

/// |D^y| = g_{ceil(psi(y))}, using D_x = D_{ceil x} for non-integral x.
std::int64_t group_order_at_upper(const Filtration& filt, const Rational& y);

}  // namespace ramify
