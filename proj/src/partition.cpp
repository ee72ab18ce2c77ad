#include "epc/partition.hpp"

#include <algorithm>
#include <map>

namespace epc::partitions {

void Partition::build_index() {
    index_.clear();
    for (size_t i = 0; i < blocks_.size(); ++i)
        for (const Element& v : blocks_[i]) index_.emplace_back(v, i);
    std::sort(index_.begin(), index_.end());
}

size_t Partition::block_index(const Element& v) const {
    auto it = std::lower_bound(index_.begin(), index_.end(), v,
                               [](const auto& p, const Element& e) { return p.first < e; });
    if (it == index_.end() || it->first != v)
        fail(ErrorKind::NotInCarrier, "'" + v + "' is not in the carrier");
    return it->second;
}

Partition Partition::from_blocks(std::vector<std::vector<Element>> blocks) {
    Partition p;
    for (auto& block : blocks) {
        if (block.empty())
            fail(ErrorKind::CarrierMismatch, "partition block may not be empty");
        std::sort(block.begin(), block.end());
        block.erase(std::unique(block.begin(), block.end()), block.end());
        for (const Element& v : block)
            if (!p.carrier_.insert(v).second)
                fail(ErrorKind::CarrierMismatch, "blocks are not disjoint at '" + v + "'");
    }
    std::sort(blocks.begin(), blocks.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    p.blocks_ = std::move(blocks);
    p.build_index();
    return p;
}

Partition Partition::from_classifier(const ElementSet& carrier,
                                     const std::function<std::string(const Element&)>& label) {
    std::map<std::string, std::vector<Element>> fibers;
    for (const Element& v : carrier) fibers[label(v)].push_back(v);
    std::vector<std::vector<Element>> blocks;
    blocks.reserve(fibers.size());
    for (auto& [_, block] : fibers) blocks.push_back(std::move(block));
    return from_blocks(std::move(blocks));
}

Partition Partition::identity(const ElementSet& carrier) {
    std::vector<std::vector<Element>> blocks;
    for (const Element& v : carrier) blocks.push_back({v});
    return from_blocks(std::move(blocks));
}

Partition Partition::total(const ElementSet& carrier) {
    if (carrier.empty())
        fail(ErrorKind::EmptyDomain, "total relation over an empty carrier");
    return from_blocks({{carrier.begin(), carrier.end()}});
}

const std::vector<Element>& Partition::class_of(const Element& v) const {
    return blocks_[block_index(v)];
}

bool Partition::same_block(const Element& a, const Element& b) const {
    return block_index(a) == block_index(b);
}

Partition Partition::meet(std::span<const Partition> rels) {
    if (rels.empty())
        fail(ErrorKind::CarrierMismatch, "meet of an empty family");
    const Partition& first = rels.front();
    for (const Partition& r : rels.subspan(1))
        if (r.carrier() != first.carrier())
            fail(ErrorKind::CarrierMismatch, "meet over mismatched carriers");
    // Elements are equivalent in the meet iff equivalent in every member:
    // group by the tuple of block indices.
    return from_classifier(first.carrier(), [&](const Element& v) {
        std::string key;
        for (const Partition& r : rels) {
            key += std::to_string(r.block_index(v));
            key += ',';
        }
        return key;
    });
}

Partition Partition::meet(const Partition& a, const Partition& b) {
    const Partition rels[] = {a, b};
    return meet(std::span<const Partition>(rels));
}

bool Partition::er_leq(const Partition& fine, const Partition& coarse) {
    if (fine.carrier() != coarse.carrier())
        fail(ErrorKind::CarrierMismatch, "er_leq over mismatched carriers");
    for (const auto& block : fine.blocks_) {
        size_t target = coarse.block_index(block.front());
        for (const Element& v : block)
            if (coarse.block_index(v) != target) return false;
    }
    return true;
}

Partition Partition::dagger(const ElementSet& full) const {
    std::vector<Element> missing;
    for (const Element& v : full)
        if (!carrier_.count(v)) missing.push_back(v);
    if (missing.size() + carrier_.size() != full.size())
        fail(ErrorKind::CarrierNotSuperset, "dagger target does not contain the carrier");
    std::vector<std::vector<Element>> blocks = blocks_;
    if (!missing.empty()) blocks.push_back(std::move(missing));
    return from_blocks(std::move(blocks));
}

std::string Partition::to_string() const {
    std::string out;
    for (size_t i = 0; i < blocks_.size(); ++i) {
        if (i) out += ' ';
        out += '{';
        for (size_t j = 0; j < blocks_[i].size(); ++j) {
            if (j) out += ' ';
            out += blocks_[i][j];
        }
        out += '}';
    }
    return out;
}

} // namespace epc::partitions
