#include "ncbcast/knowledge.hpp"

#include <algorithm>
#include <map>

namespace ncbcast {

ClassPartition class_partition(const ReceiverState& state, const std::vector<PacketId>& ground) {
    std::vector<PacketId> hs;
    for (PacketId p : ground) {
        if (state.heard(p)) hs.push_back(p);
    }
    std::sort(hs.begin(), hs.end());
    hs.erase(std::unique(hs.begin(), hs.end()), hs.end());

    // Node 0 is the fictitious zero packet; node i+1 is hs[i].
    DisjointSets dsu(hs.size() + 1);
    for (std::size_t i = 0; i < hs.size(); ++i) {
        if (state.decoded(hs[i])) dsu.unite(i + 1, 0);
        for (std::size_t j = i + 1; j < hs.size(); ++j) {
            CoeffVector sum1 = CoeffVector::unit(hs[i]);
            sum1.add_scaled(Gf3(1), CoeffVector::unit(hs[j]));
            CoeffVector sum2 = CoeffVector::unit(hs[i]);
            sum2.add_scaled(Gf3(2), CoeffVector::unit(hs[j]));
            if (state.in_span(sum1) || state.in_span(sum2)) dsu.unite(i + 1, j + 1);
        }
    }

    ClassPartition out;
    std::size_t zero_root = dsu.find(0);
    std::map<std::size_t, std::vector<PacketId>> groups;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        std::size_t root = dsu.find(i + 1);
        if (root == zero_root) {
            out.decoded_class.push_back(hs[i]);
        } else {
            groups[root].push_back(hs[i]);
        }
    }
    for (auto& kv : groups) {
        std::sort(kv.second.begin(), kv.second.end());
        out.classes.push_back(std::move(kv.second));
    }
    std::sort(out.classes.begin(), out.classes.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    for (const auto& c : out.classes) {
        if (c.size() >= 2) ++out.deficit;
    }
    return out;
}

int deficit(const ReceiverState& state, const std::vector<PacketId>& ground) {
    return class_partition(state, ground).deficit;
}

}  // namespace ncbcast
