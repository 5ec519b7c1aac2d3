#pragma once

#include <random>
#include <string>

#include "ncbcast/coding.hpp"

namespace ncbcast {

enum class SimMode : std::uint8_t { ThreeRxCoded, SingleRxArq };
enum class AssertLevel : std::uint8_t { Off, Monitor, Strict };

const char* to_string(SimMode mode);
const char* to_string(AssertLevel level);

struct SimConfig {
    double lambda = 0.5;   // Bernoulli arrival probability per slot
    double mu = 0.5;       // per-receiver delivery probability per slot
    double rho() const { return mu > 0 ? lambda / mu : 0.0; }

    std::uint64_t slots = 0;  // arrival-phase slots
    std::uint64_t seed = 1;
    SimMode mode = SimMode::ThreeRxCoded;
    bool drain = true;         // keep transmitting with no arrivals until the queue empties
    std::uint64_t warmup = 0;  // slots/packets before this boundary are excluded from stats
    AssertLevel assert_level = AssertLevel::Monitor;
    bool record_trace = true;
};

struct SlotRecord {
    std::uint64_t slot = 0;
    bool arrival = false;
    CaseLabel label = CaseLabel::Idle;
    std::uint8_t support_size = 0;
    std::array<PacketId, 3> support{};
    std::array<std::uint8_t, 3> coeff{};
    std::array<bool, 3> delivered{};
    std::array<std::uint32_t, 3> rank{};
    std::uint32_t queue = 0;
};

struct PacketRecord {
    PacketId id = 0;
    std::uint64_t arrival_slot = 0;
    std::array<std::int64_t, 3> decode_slot{-1, -1, -1};  // -1 while undecoded
    std::int64_t drop_slot = -1;
};

struct ViolationCounters {
    std::uint64_t innovation = 0;      // lagging receiver handed a known combination
    std::uint64_t support_bound = 0;   // support index above m+1
    std::uint64_t two_undecoded = 0;   // >2 undecoded packets in someone's view of the support
    std::uint64_t leader_decode = 0;   // no leader has decoded {1..m}
    std::uint64_t seen_rank = 0;       // |seen| != rank
    std::uint64_t conjecture_both_mixed = 0;  // monitored, not a hard failure

    std::uint64_t hard_total() const {
        return innovation + support_bound + two_undecoded + leader_decode + seen_rank;
    }
};

struct RunResult {
    SimConfig config;
    std::vector<SlotRecord> trace;  // empty when record_trace is off
    std::vector<PacketRecord> packets;
    ViolationCounters violations;
    std::uint64_t slots_run = 0;  // includes drain slots
    std::uint64_t diag_alone_fallback = 0;  // paired cases that fell back to p_{m+1} alone

    // queue-size aggregates over post-warmup slots (sampled after departures)
    double queue_sum = 0;
    std::uint64_t queue_max = 0;
    std::uint64_t queue_samples = 0;

    static constexpr const char* rng_name = "mt19937_64";
};

// Strict-mode hard invariant failure; carries the slot and counters so far.
struct InvariantViolation : std::runtime_error {
    InvariantViolation(const std::string& what, std::uint64_t at_slot, ViolationCounters c)
        : std::runtime_error(what), slot(at_slot), counters(c) {}
    std::uint64_t slot;
    ViolationCounters counters;
};

// Three-receiver erasure broadcast with the feedback-adaptive coding module.
// Slot order: arrival, sender decision, deliveries, feedback (implicit via
// shared state), drop of packets decoded by all three.
class BroadcastSimulator {
public:
    explicit BroadcastSimulator(const SimConfig& cfg);

    void step(bool allow_arrival);
    RunResult finish();

    std::uint64_t slot() const { return slot_; }
    std::uint32_t arrived() const { return arrived_; }
    const std::vector<PacketId>& active() const { return active_; }
    const ReceiverState& receiver(int i) const { return rx_[i]; }
    const ViolationCounters& violations() const { return result_.violations; }

private:
    bool draw(double p);
    void check_plan(const TransmissionPlan& plan, std::uint32_t m);
    void post_checks();
    void record(const SlotRecord& rec);
    void hard_violation(std::uint64_t& counter, const std::string& what);

    SimConfig cfg_;
    std::mt19937_64 rng_;
    std::array<ReceiverState, 3> rx_;
    std::vector<PacketId> active_;
    RunResult result_;
    std::uint64_t slot_ = 0;
    std::uint32_t arrived_ = 0;
};

RunResult run(const SimConfig& cfg);
RunResult run_arq_single(const SimConfig& cfg);

}  // namespace ncbcast
