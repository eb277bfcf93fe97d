#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace ramify {

/// Invariant factors n_1, n_2, ... of a finite abelian group with n_{i+1} | n_i
/// (largest first, 1s dropped). The trivial group has an empty list.
class AbelianGroupStructure {
public:
    AbelianGroupStructure() = default;
    /// Accepts any list of cyclic orders and normalises to invariant factors.
    explicit AbelianGroupStructure(const std::vector<std::int64_t>& cyclic_orders);

    const std::vector<std::int64_t>& invariants() const noexcept { return invariants_; }
    std::int64_t order() const;
    bool is_trivial() const noexcept { return invariants_.empty(); }

    AbelianGroupStructure p_part(std::int64_t p) const;
    /// dim over F_p of G/G^p.
    int p_rank(std::int64_t p) const;

    friend bool operator==(const AbelianGroupStructure&, const AbelianGroupStructure&) = default;

private:
    std::vector<std::int64_t> invariants_;
};

/// A finite abelian group handed over as a dense index set {0..size-1} with a
/// multiplication callback. On construction a basis is extracted greedily:
/// repeatedly take the element of largest order modulo the span so far
/// (smallest index on ties), then correct it so that its order equals its
/// order in the quotient. The resulting orders are the invariant factors, and
/// every element gets a discrete log against the basis.
class EnumeratedGroup {
public:
    using Element = std::uint32_t;
    using Mul = std::function<Element(Element, Element)>;

    EnumeratedGroup(std::size_t size, Element identity, Mul mul);

    std::size_t size() const noexcept { return size_; }
    Element identity() const noexcept { return identity_; }
    Element mul(Element a, Element b) const { return mul_(a, b); }
    Element power(Element x, std::int64_t k) const;
    std::int64_t order_of(Element x) const;

    const std::vector<Element>& generators() const noexcept { return generators_; }
    const std::vector<std::int64_t>& generator_orders() const noexcept { return orders_; }
    AbelianGroupStructure structure() const { return AbelianGroupStructure(orders_); }

    /// Exponent vector e with x = prod generators[i]^e[i], 0 <= e[i] < orders[i].
    std::vector<std::int64_t> log(Element x) const;

private:
    std::size_t size_;
    Element identity_;
    Mul mul_;
    std::vector<Element> generators_;
    std::vector<std::int64_t> orders_;
    std::vector<std::int64_t> code_;  // mixed-radix exponent code per element
    std::vector<std::pair<std::int64_t, std::vector<Element>>> power_tables_;

    Element smooth_power(Element x, std::int64_t k) const;
};

/// Invariant factors of Z^ncols / (row span of `relations`). Throws
/// input_error if the quotient is infinite.
AbelianGroupStructure structure_from_relations(const std::vector<std::vector<std::int64_t>>& relations,
                                               std::size_t ncols);

}  // namespace ramify
