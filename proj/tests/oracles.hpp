#pragma once

// Brute-force reference implementations used to cross-check the incremental
// data structures. Everything here enumerates the full knowledge space
// (3^rank elements), so callers keep rank small (<= 8).

#include <algorithm>
#include <cstddef>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "ncbcast/gf3.hpp"
#include "ncbcast/knowledge.hpp"

namespace oracle {

using ncbcast::CoeffVector;
using ncbcast::Gf3;
using ncbcast::PacketId;

inline CoeffVector vec(std::initializer_list<std::pair<PacketId, unsigned>> terms) {
    CoeffVector v;
    for (const auto& t : terms) v.set(t.first, Gf3(t.second));
    return v;
}

// All 3^k combinations of the given vectors, including the zero vector.
inline std::set<CoeffVector> enumerate_span(const std::vector<CoeffVector>& rows) {
    std::set<CoeffVector> span;
    std::size_t combos = 1;
    for (std::size_t i = 0; i < rows.size(); ++i) combos *= 3;
    for (std::size_t t = 0; t < combos; ++t) {
        CoeffVector v;
        std::size_t rem = t;
        for (const auto& row : rows) {
            unsigned c = rem % 3;
            rem /= 3;
            if (c) v.add_scaled(Gf3(c), row);
        }
        span.insert(v);
    }
    return span;
}

inline bool in_span(const std::set<CoeffVector>& span, const CoeffVector& v) {
    return span.count(v) != 0;
}

// Definitional seen set: p is seen iff the node can compute p + q with q over
// strictly higher indices. Scaling stays inside the span, so this is exactly
// "some nonzero span element has leading index p".
inline std::set<PacketId> seen(const std::set<CoeffVector>& span) {
    std::set<PacketId> s;
    for (const auto& v : span) {
        if (!v.zero()) s.insert(v.leading());
    }
    return s;
}

inline std::set<PacketId> decoded(const std::set<CoeffVector>& span) {
    std::set<PacketId> s;
    for (const auto& v : span) {
        if (v.support_size() == 1 && v.leading_coeff() == Gf3(1)) s.insert(v.leading());
    }
    return s;
}

inline std::set<PacketId> heard(const std::set<CoeffVector>& span) {
    std::set<PacketId> s;
    for (const auto& v : span) {
        for (PacketId p : v.support()) s.insert(p);
    }
    return s;
}

struct Partition {
    std::vector<PacketId> decoded_class;
    std::vector<std::vector<PacketId>> classes;  // sorted by smallest member
    int deficit = 0;
};

// Partition of (heard-of ground packets + the fictitious zero packet) under
// x ~ y iff e_x+e_y or e_x+2e_y lies in the span, and zero ~ x iff e_x does.
// Closure is taken by BFS over the pairwise relation, independent of the
// library's union-find.
inline Partition partition(const std::set<CoeffVector>& span,
                           const std::vector<PacketId>& ground) {
    std::set<PacketId> hs = heard(span);
    std::vector<PacketId> nodes;
    for (PacketId p : ground) {
        if (hs.count(p)) nodes.push_back(p);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    // Node 0 is the zero packet; node i+1 is nodes[i].
    std::size_t n = nodes.size() + 1;
    std::vector<std::vector<std::size_t>> adj(n);
    auto link = [&](std::size_t a, std::size_t b) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    };
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        CoeffVector unit = CoeffVector::unit(nodes[i]);
        if (in_span(span, unit)) link(i + 1, 0);
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
            CoeffVector s1 = unit;
            s1.add_scaled(Gf3(1), CoeffVector::unit(nodes[j]));
            CoeffVector s2 = unit;
            s2.add_scaled(Gf3(2), CoeffVector::unit(nodes[j]));
            if (in_span(span, s1) || in_span(span, s2)) link(i + 1, j + 1);
        }
    }

    std::vector<int> comp(n, -1);
    int ncomp = 0;
    for (std::size_t start = 0; start < n; ++start) {
        if (comp[start] >= 0) continue;
        int c = ncomp++;
        std::queue<std::size_t> q;
        q.push(start);
        comp[start] = c;
        while (!q.empty()) {
            std::size_t u = q.front();
            q.pop();
            for (std::size_t w : adj[u]) {
                if (comp[w] < 0) {
                    comp[w] = c;
                    q.push(w);
                }
            }
        }
    }

    Partition out;
    std::map<int, std::vector<PacketId>> groups;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (comp[i + 1] == comp[0]) {
            out.decoded_class.push_back(nodes[i]);
        } else {
            groups[comp[i + 1]].push_back(nodes[i]);
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

// A random vector over packets 1..npackets: usually sparse (1-3 terms), with
// an occasional dense draw so the states exercise long tails too.
template <typename Rng>
CoeffVector random_vector(Rng& rng, PacketId npackets) {
    std::uniform_int_distribution<int> kind(0, 3);
    std::uniform_int_distribution<PacketId> pick(1, npackets);
    std::uniform_int_distribution<unsigned> nonzero(1, 2);
    CoeffVector v;
    int k = kind(rng);
    if (k == 0) {
        std::uniform_int_distribution<unsigned> coeff(0, 2);
        for (PacketId p = 1; p <= npackets; ++p) {
            unsigned c = coeff(rng);
            if (c) v.set(p, Gf3(c));
        }
    } else {
        for (int i = 0; i < k; ++i) v.set(pick(rng), Gf3(nonzero(rng)));
    }
    return v;
}

template <typename Rng>
ncbcast::ReceiverState random_state(Rng& rng, PacketId npackets, std::size_t max_rank) {
    ncbcast::ReceiverState st(1);
    std::uniform_int_distribution<int> inserts(0, 2 * static_cast<int>(max_rank));
    int n = inserts(rng);
    for (int i = 0; i < n && st.rank() < max_rank; ++i) {
        st.receive(random_vector(rng, npackets));
    }
    return st;
}

}  // namespace oracle
