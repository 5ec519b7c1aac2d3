#pragma once

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "ncbcast/knowledge.hpp"

namespace ncbcast {

enum class CaseLabel : std::uint8_t {
    Idle,
    AllLeaders,
    TwoLeadersDelegate,
    TwoLeadersA,
    TwoLeadersB,
    TwoLeadersC,
    UlCase1,
    UlCase2,
    UlCase3,
    UlCase4,
    UlCase5,
    UlCase6,
    UlCase7,
    UlCase8,
    UlCase9,
    UlCase10,
    ArqTx,
};

const char* to_string(CaseLabel label);

// Internal contradiction in the coding logic; the simulation cannot proceed.
struct CodingError : std::runtime_error {
    explicit CodingError(const std::string& what) : std::runtime_error(what) {}
};

// No coefficient tuple over {1,2} was innovative for every lagging receiver.
struct NoValidCoefficients : CodingError {
    explicit NoValidCoefficients(const std::string& what) : CodingError(what) {}
};

struct TransmissionPlan {
    std::vector<PacketId> support;  // ascending, size 0..3; empty means idle
    std::vector<Gf3> coeffs;        // matching nonzero coefficients
    CaseLabel label = CaseLabel::Idle;

    bool idle() const { return support.empty(); }
    CoeffVector vector() const;
};

// Sender-side snapshot: arrival count, the three feedback mirrors, and the
// ascending list of arrived packets not yet decoded by all three receivers.
struct SenderView {
    std::uint32_t arrived = 0;
    std::array<const ReceiverState*, 3> rx{};
    std::span<const PacketId> active;
};

struct LeaderInfo {
    std::uint32_t m = 0;            // max rank
    std::array<bool, 3> leader{};   // rank == m
    int count = 0;
};

LeaderInfo compute_leaders(const SenderView& view);

// Index 1..9 of the partition cell for a packet with the given non-leader
// decoded/heard memberships (d implies h).
int nine_set_index(bool d1, bool h1, bool d2, bool h2);

struct NineSetPartition {
    std::array<std::set<PacketId>, 10> s;  // s[1]..s[9]; s[0] unused
};

NineSetPartition partition_from_sets(const std::set<PacketId>& d1, const std::set<PacketId>& h1,
                                     const std::set<PacketId>& d2, const std::set<PacketId>& h2,
                                     const std::set<PacketId>& universe);

// Full partition of {1..m} (plus m+1 if arrived) for the two non-leaders of a
// unique-leader view. Walks the whole universe; meant for tests and diagnostics.
NineSetPartition partition_sets(const SenderView& view);

// State-free case logic, driven by set summaries so it can be tested directly.
struct PlanSkeleton {
    std::vector<PacketId> support;
    CaseLabel label = CaseLabel::Idle;
};

struct UniqueLeaderSets {
    bool mplus1_arrived = false;
    PacketId mplus1 = 0;
    int mplus1_set = 0;                                // 1..9 when arrived
    std::array<std::optional<PacketId>, 10> oldest{};  // oldest[i] = min of S_i, i in 2..9
};

PlanSkeleton unique_leader_skeleton(const UniqueLeaderSets& in);

struct TwoLeadersSets {
    bool mplus1_arrived = false;
    PacketId mplus1 = 0;
    bool nl_decoded_mplus1 = false;
    std::optional<PacketId> nl_oldest_undecoded;  // heard-but-undecoded preferred
};

PlanSkeleton two_leaders_skeleton(const TwoLeadersSets& in);

// Lexicographically first tuple over {1,2}^|support| innovative to every
// receiver whose rank trails the arrival count. Throws NoValidCoefficients.
std::vector<Gf3> choose_coefficients(const std::vector<PacketId>& support, const SenderView& view);

TransmissionPlan select_all_leaders(const SenderView& view);
TransmissionPlan select_two_leaders(const SenderView& view);
TransmissionPlan select_unique_leader(const SenderView& view);

// Top-level dispatch on the number of leaders.
TransmissionPlan next_transmission(const SenderView& view);

std::string describe_view(const SenderView& view);

}  // namespace ncbcast
