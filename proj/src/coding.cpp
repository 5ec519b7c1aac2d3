#include "ncbcast/coding.hpp"

#include <algorithm>
#include <sstream>

namespace ncbcast {

const char* to_string(CaseLabel label) {
    switch (label) {
        case CaseLabel::Idle: return "IDLE";
        case CaseLabel::AllLeaders: return "ALL_LEADERS";
        case CaseLabel::TwoLeadersDelegate: return "TWO_LEADERS_DELEGATE";
        case CaseLabel::TwoLeadersA: return "TWO_LEADERS_A";
        case CaseLabel::TwoLeadersB: return "TWO_LEADERS_B";
        case CaseLabel::TwoLeadersC: return "TWO_LEADERS_C";
        case CaseLabel::UlCase1: return "UL_CASE1";
        case CaseLabel::UlCase2: return "UL_CASE2";
        case CaseLabel::UlCase3: return "UL_CASE3";
        case CaseLabel::UlCase4: return "UL_CASE4";
        case CaseLabel::UlCase5: return "UL_CASE5";
        case CaseLabel::UlCase6: return "UL_CASE6";
        case CaseLabel::UlCase7: return "UL_CASE7";
        case CaseLabel::UlCase8: return "UL_CASE8";
        case CaseLabel::UlCase9: return "UL_CASE9";
        case CaseLabel::UlCase10: return "UL_CASE10";
        case CaseLabel::ArqTx: return "ARQ";
    }
    return "?";
}

CoeffVector TransmissionPlan::vector() const {
    CoeffVector v;
    for (std::size_t i = 0; i < support.size(); ++i) v.set(support[i], coeffs[i]);
    return v;
}

LeaderInfo compute_leaders(const SenderView& view) {
    LeaderInfo info;
    for (const auto* r : view.rx) {
        info.m = std::max<std::uint32_t>(info.m, static_cast<std::uint32_t>(r->rank()));
    }
    for (int i = 0; i < 3; ++i) {
        info.leader[i] = view.rx[i]->rank() == info.m;
        if (info.leader[i]) ++info.count;
    }
    return info;
}

int nine_set_index(bool d1, bool h1, bool d2, bool h2) {
    int c1 = d1 ? 0 : (h1 ? 1 : 2);
    int c2 = d2 ? 0 : (h2 ? 1 : 2);
    static constexpr int tbl[3][3] = {
        {1, 2, 5},
        {3, 4, 7},
        {6, 8, 9},
    };
    return tbl[c1][c2];
}

NineSetPartition partition_from_sets(const std::set<PacketId>& d1, const std::set<PacketId>& h1,
                                     const std::set<PacketId>& d2, const std::set<PacketId>& h2,
                                     const std::set<PacketId>& universe) {
    NineSetPartition out;
    for (PacketId p : universe) {
        int idx = nine_set_index(d1.count(p) != 0, h1.count(p) != 0,
                                 d2.count(p) != 0, h2.count(p) != 0);
        out.s[idx].insert(p);
    }
    return out;
}

namespace {

// The two non-leaders of a unique-leader (or delegated) view, lower id first.
std::array<int, 2> non_leader_indices(int leader) {
    switch (leader) {
        case 0: return {1, 2};
        case 1: return {0, 2};
        default: return {0, 1};
    }
}

int unique_leader_index(const LeaderInfo& info) {
    for (int i = 0; i < 3; ++i) {
        if (info.leader[i]) return i;
    }
    throw CodingError("coding: view without a leader");
}

// Universe bound: packets 1..m, plus m+1 once it has arrived.
PacketId universe_max(const SenderView& view, std::uint32_t m) {
    return view.arrived >= m + 1 ? m + 1 : m;
}

// Has this receiver decoded every packet in {1..m}? Packets outside the
// active list are decoded by all three, so scanning active suffices.
bool decoded_prefix(const SenderView& view, int r, std::uint32_t m) {
    for (PacketId p : view.active) {
        if (p > m) break;
        if (!view.rx[r]->decoded(p)) return false;
    }
    return true;
}

UniqueLeaderSets gather_unique_leader_sets(const SenderView& view, std::uint32_t m, int nl1,
                                           int nl2) {
    UniqueLeaderSets s;
    s.mplus1 = m + 1;
    s.mplus1_arrived = view.arrived >= m + 1;
    PacketId umax = universe_max(view, m);
    const ReceiverState& a = *view.rx[nl1];
    const ReceiverState& b = *view.rx[nl2];
    for (PacketId p : view.active) {
        if (p > umax) break;
        int idx = nine_set_index(a.decoded(p), a.heard(p), b.decoded(p), b.heard(p));
        if (p == s.mplus1) {
            s.mplus1_set = idx;
            continue;
        }
        if (!s.oldest[idx]) s.oldest[idx] = p;  // active is ascending
    }
    // m+1 can only land in S1 via the drop rule, which requires all three to
    // have decoded it; it stays active otherwise, so the scan above covers it.
    if (s.mplus1_arrived && s.mplus1_set == 0) s.mplus1_set = 1;
    return s;
}

std::optional<PacketId> oldest_undecoded_preferring_heard(const SenderView& view, int r) {
    const ReceiverState& nl = *view.rx[r];
    if (auto p = nl.oldest_heard_undecoded()) return p;
    for (PacketId p : view.active) {
        if (!nl.decoded(p)) return p;
    }
    return std::nullopt;
}

PlanSkeleton finish(std::vector<PacketId> support, CaseLabel label) {
    std::sort(support.begin(), support.end());
    if (support.empty()) label = CaseLabel::Idle;
    return {std::move(support), label};
}

// Case 1 selection: S4 alone; then the pairs (S2,S3), (S3,S5), (S2,S6),
// (S5,S6); then singles S7, S8, S9, S2, S3, S5, S6; else nothing.
std::vector<PacketId> case1_selection(const UniqueLeaderSets& in) {
    const auto& o = in.oldest;
    if (o[4]) return {*o[4]};
    if (o[2] && o[3]) return {*o[2], *o[3]};
    if (o[3] && o[5]) return {*o[3], *o[5]};
    if (o[2] && o[6]) return {*o[2], *o[6]};
    if (o[5] && o[6]) return {*o[5], *o[6]};
    for (int i : {7, 8, 9, 2, 3, 5, 6}) {
        if (o[i]) return {*o[i]};
    }
    return {};
}

// Pair p_{m+1} with the oldest packet of the first nonempty set in `order`;
// p_{m+1} alone if all are empty.
PlanSkeleton pair_with_mplus1(const UniqueLeaderSets& in, std::initializer_list<int> order,
                              CaseLabel label) {
    std::vector<PacketId> support{in.mplus1};
    for (int i : order) {
        if (in.oldest[i]) {
            support.push_back(*in.oldest[i]);
            break;
        }
    }
    return finish(std::move(support), label);
}

}  // namespace

PlanSkeleton unique_leader_skeleton(const UniqueLeaderSets& in) {
    if (!in.mplus1_arrived) return finish(case1_selection(in), CaseLabel::UlCase1);

    switch (in.mplus1_set) {
        case 1: {
            std::vector<PacketId> support = case1_selection(in);
            support.push_back(in.mplus1);
            return finish(std::move(support), CaseLabel::UlCase2);
        }
        case 2: return pair_with_mplus1(in, {3, 4, 6, 8, 7, 9}, CaseLabel::UlCase3);
        case 3: return pair_with_mplus1(in, {2, 4, 5, 7, 8, 9}, CaseLabel::UlCase4);
        case 4: return finish({in.mplus1}, CaseLabel::UlCase5);
        case 5: return pair_with_mplus1(in, {3, 6, 4, 8, 7, 9}, CaseLabel::UlCase6);
        case 6: return pair_with_mplus1(in, {2, 5, 4, 7, 8, 9}, CaseLabel::UlCase7);
        case 7: return finish({in.mplus1}, CaseLabel::UlCase8);
        case 8: return finish({in.mplus1}, CaseLabel::UlCase9);
        case 9: return finish({in.mplus1}, CaseLabel::UlCase10);
        default: throw CodingError("coding: p_{m+1} not classified");
    }
}

PlanSkeleton two_leaders_skeleton(const TwoLeadersSets& in) {
    if (!in.mplus1_arrived) {
        if (!in.nl_oldest_undecoded) return {{}, CaseLabel::Idle};
        return finish({*in.nl_oldest_undecoded}, CaseLabel::TwoLeadersA);
    }
    if (in.nl_decoded_mplus1) {
        std::vector<PacketId> support{in.mplus1};
        if (in.nl_oldest_undecoded) support.push_back(*in.nl_oldest_undecoded);
        return finish(std::move(support), CaseLabel::TwoLeadersB);
    }
    return finish({in.mplus1}, CaseLabel::TwoLeadersC);
}

std::vector<Gf3> choose_coefficients(const std::vector<PacketId>& support,
                                     const SenderView& view) {
    if (support.empty() || support.size() > 3) {
        throw CodingError("coding: coefficient search needs 1..3 packets");
    }
    std::array<const ReceiverState*, 3> lagging{};
    int nlag = 0;
    for (const auto* r : view.rx) {
        if (r->rank() < view.arrived) lagging[nlag++] = r;
    }

    std::size_t k = support.size();
    std::size_t tuples = std::size_t{1} << k;  // values 1,2 per slot
    for (std::size_t t = 0; t < tuples; ++t) {
        std::vector<Gf3> coeffs(k);
        CoeffVector v;
        for (std::size_t i = 0; i < k; ++i) {
            // bit 0 of the highest-index position varies fastest: lexicographic order
            unsigned bit = (t >> (k - 1 - i)) & 1u;
            coeffs[i] = Gf3(1u + bit);
            v.set(support[i], coeffs[i]);
        }
        bool ok = true;
        for (int i = 0; i < nlag; ++i) {
            if (lagging[i]->in_span(v)) {
                ok = false;
                break;
            }
        }
        if (ok) return coeffs;
    }

    std::ostringstream os;
    os << "coding: no innovative coefficients over {1,2} for support {";
    for (std::size_t i = 0; i < support.size(); ++i) os << (i ? "," : "") << support[i];
    os << "}; " << describe_view(view);
    throw NoValidCoefficients(os.str());
}

namespace {

TransmissionPlan with_coefficients(PlanSkeleton skel, const SenderView& view) {
    TransmissionPlan plan;
    plan.label = skel.label;
    plan.support = std::move(skel.support);
    if (!plan.support.empty()) plan.coeffs = choose_coefficients(plan.support, view);
    return plan;
}

TransmissionPlan plan_unique_leader(const SenderView& view, const LeaderInfo& info, int leader) {
    auto nls = non_leader_indices(leader);
    UniqueLeaderSets sets = gather_unique_leader_sets(view, info.m, nls[0], nls[1]);
    return with_coefficients(unique_leader_skeleton(sets), view);
}

}  // namespace

TransmissionPlan select_all_leaders(const SenderView& view) {
    LeaderInfo info = compute_leaders(view);
    if (view.arrived < info.m + 1) return {};

    // Each receiver misses exactly one packet of {1..m+1}; unseen implies
    // undecoded, so the active list contains it.
    std::vector<PacketId> support;
    for (int r = 0; r < 3; ++r) {
        int misses = 0;
        PacketId unseen = 0;
        for (PacketId p : view.active) {
            if (p > info.m + 1) break;
            if (!view.rx[r]->seen(p)) {
                ++misses;
                unseen = p;
            }
        }
        if (misses != 1) {
            std::ostringstream os;
            os << "coding: all-leaders view where receiver " << (r + 1) << " has " << misses
               << " unseen packets in {1.." << info.m + 1 << "}; " << describe_view(view);
            throw CodingError(os.str());
        }
        support.push_back(unseen);
    }
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());

    TransmissionPlan plan;
    plan.label = CaseLabel::AllLeaders;
    plan.support = std::move(support);
    plan.coeffs = choose_coefficients(plan.support, view);
    return plan;
}

TransmissionPlan select_two_leaders(const SenderView& view) {
    LeaderInfo info = compute_leaders(view);
    std::array<int, 2> leaders{-1, -1};
    int nl = -1;
    for (int i = 0; i < 3; ++i) {
        if (info.leader[i]) {
            (leaders[0] < 0 ? leaders[0] : leaders[1]) = i;
        } else {
            nl = i;
        }
    }

    bool a_done = decoded_prefix(view, leaders[0], info.m);
    bool b_done = decoded_prefix(view, leaders[1], info.m);
    if (!a_done && !b_done) {
        throw CodingError("coding: neither leader decoded {1..m}; " + describe_view(view));
    }
    if (a_done != b_done) {
        // Delegate to the unique-leader treatment of the finished leader.
        TransmissionPlan plan = plan_unique_leader(view, info, a_done ? leaders[0] : leaders[1]);
        if (!plan.idle()) plan.label = CaseLabel::TwoLeadersDelegate;
        return plan;
    }

    TwoLeadersSets sets;
    sets.mplus1 = info.m + 1;
    sets.mplus1_arrived = view.arrived >= info.m + 1;
    sets.nl_decoded_mplus1 = sets.mplus1_arrived && view.rx[nl]->decoded(sets.mplus1);
    sets.nl_oldest_undecoded = oldest_undecoded_preferring_heard(view, nl);
    return with_coefficients(two_leaders_skeleton(sets), view);
}

TransmissionPlan select_unique_leader(const SenderView& view) {
    LeaderInfo info = compute_leaders(view);
    return plan_unique_leader(view, info, unique_leader_index(info));
}

TransmissionPlan next_transmission(const SenderView& view) {
    LeaderInfo info = compute_leaders(view);
    switch (info.count) {
        case 3: return select_all_leaders(view);
        case 2: return select_two_leaders(view);
        default: return select_unique_leader(view);
    }
}

NineSetPartition partition_sets(const SenderView& view) {
    LeaderInfo info = compute_leaders(view);
    if (info.count != 1) throw CodingError("coding: partition_sets needs a unique leader");
    auto nls = non_leader_indices(unique_leader_index(info));
    const ReceiverState& a = *view.rx[nls[0]];
    const ReceiverState& b = *view.rx[nls[1]];
    NineSetPartition out;
    PacketId umax = universe_max(view, info.m);
    for (PacketId p = 1; p <= umax; ++p) {
        out.s[nine_set_index(a.decoded(p), a.heard(p), b.decoded(p), b.heard(p))].insert(p);
    }
    return out;
}

std::string describe_view(const SenderView& view) {
    std::ostringstream os;
    os << "arrived=" << view.arrived << " ranks=(";
    for (int i = 0; i < 3; ++i) os << (i ? "," : "") << view.rx[i]->rank();
    os << ") active=" << view.active.size() << " [";
    std::size_t shown = 0;
    for (PacketId p : view.active) {
        if (shown >= 16) {
            os << ",...";
            break;
        }
        os << (shown ? "," : "") << p;
        ++shown;
    }
    os << "] mixed=(";
    for (int i = 0; i < 3; ++i) os << (i ? "," : "") << view.rx[i]->heard_undecoded().size();
    os << ")";
    return os.str();
}

}  // namespace ncbcast
