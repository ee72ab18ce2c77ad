#pragma once

#include <functional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "epc/error.hpp"

namespace epc::partitions {

/// Elements are rendered values or rendered traces; either way the carrier
/// is a finite set of strings and the algebra is identical.
using Element = std::string;
using ElementSet = std::set<Element>;

/// An equivalence relation on a finite carrier, stored as its canonical
/// partition: blocks sorted by least element, elements sorted within blocks.
/// IdV is all singletons, AllV a single block.
class Partition {
public:
    Partition() = default; // empty carrier, no blocks

    /// Validates disjointness, non-emptiness and exact cover of the implied
    /// carrier, then canonicalizes.
    static Partition from_blocks(std::vector<std::vector<Element>> blocks);

    /// Blocks are the non-empty fibers of `label` over the carrier.
    static Partition from_classifier(const ElementSet& carrier,
                                     const std::function<std::string(const Element&)>& label);

    static Partition identity(const ElementSet& carrier);
    static Partition total(const ElementSet& carrier); // carrier may not be empty

    const std::vector<std::vector<Element>>& blocks() const { return blocks_; }
    const ElementSet& carrier() const { return carrier_; }
    size_t block_count() const { return blocks_.size(); }

    bool contains(const Element& v) const { return carrier_.count(v) != 0; }

    /// The unique block containing v.
    const std::vector<Element>& class_of(const Element& v) const;

    bool same_block(const Element& a, const Element& b) const;

    /// Meet of a non-empty family over a common carrier: blockwise
    /// intersection, empty intersections dropped.
    static Partition meet(std::span<const Partition> rels);
    static Partition meet(const Partition& a, const Partition& b);

    /// [R1] ⪯ER [R2]: every block of `fine` lies inside a block of `coarse`.
    static bool er_leq(const Partition& fine, const Partition& coarse);

    /// Extends a relation on a sub-carrier W to `full` by adding one block
    /// of all missing elements (when any are missing).
    Partition dagger(const ElementSet& full) const;

    /// `{a b} {c}` in canonical order.
    std::string to_string() const;

    bool operator==(const Partition&) const = default;

private:
    std::vector<std::vector<Element>> blocks_;
    ElementSet carrier_;
    // element -> block index
    std::vector<std::pair<Element, size_t>> index_;

    void build_index();
    size_t block_index(const Element& v) const;
};

} // namespace epc::partitions
