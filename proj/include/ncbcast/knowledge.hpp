#pragma once

#include <optional>
#include <vector>

#include "ncbcast/gf3.hpp"

namespace ncbcast {

// Union-find over 0..n-1 with path compression.
class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) {
        for (std::size_t i = 0; i < n; ++i) parent_[i] = i;
    }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

private:
    std::vector<std::size_t> parent_;
};

// One receiver's accumulated knowledge, mirrored exactly at the sender via
// perfect per-slot feedback.
class ReceiverState {
public:
    ReceiverState() = default;
    explicit ReceiverState(int id) : id_(id) {}

    struct ReceiveResult {
        bool innovative = false;
        std::vector<PacketId> newly_decoded;
    };

    ReceiveResult receive(const CoeffVector& v) {
        auto r = basis_.insert(v);
        return {r.grew, std::move(r.newly_decoded)};
    }

    int id() const { return id_; }
    std::size_t rank() const { return basis_.rank(); }

    bool decoded(PacketId p) const { return basis_.decoded(p); }
    bool heard(PacketId p) const { return basis_.heard(p); }
    bool seen(PacketId p) const { return basis_.pivot(p); }
    bool in_span(const CoeffVector& v) const { return basis_.contains(v); }

    const std::set<PacketId>& heard_undecoded() const { return basis_.mixed(); }
    std::optional<PacketId> oldest_heard_undecoded() const {
        if (basis_.mixed().empty()) return std::nullopt;
        return *basis_.mixed().begin();
    }

    const KnowledgeBasis& basis() const { return basis_; }
    std::set<PacketId> seen_set() const { return basis_.seen_set(); }
    std::set<PacketId> decoded_set() const { return basis_.decoded_set(); }
    std::set<PacketId> heard_set() const { return basis_.heard_set(); }

private:
    int id_ = 0;
    KnowledgeBasis basis_;
};

// Equivalence classes of the relation x~y iff the receiver knows e_x + e_y or
// e_x + 2 e_y, with a fictitious zero packet related to every decoded packet.
// Unheard packets are trivially singletons and are not stored.
struct ClassPartition {
    std::vector<PacketId> decoded_class;            // class of the zero packet, ascending
    std::vector<std::vector<PacketId>> classes;     // remaining heard classes, by smallest member
    int deficit = 0;                                // classes that are neither singletons nor decoded
};

ClassPartition class_partition(const ReceiverState& state, const std::vector<PacketId>& ground);
int deficit(const ReceiverState& state, const std::vector<PacketId>& ground);

}  // namespace ncbcast
