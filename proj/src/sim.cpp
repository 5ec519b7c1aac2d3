#include "ncbcast/sim.hpp"

#include <algorithm>
#include <sstream>

namespace ncbcast {

const char* to_string(SimMode mode) {
    return mode == SimMode::ThreeRxCoded ? "coded" : "arq";
}

const char* to_string(AssertLevel level) {
    switch (level) {
        case AssertLevel::Off: return "off";
        case AssertLevel::Monitor: return "monitor";
        case AssertLevel::Strict: return "strict";
    }
    return "?";
}

BroadcastSimulator::BroadcastSimulator(const SimConfig& cfg)
    : cfg_(cfg), rng_(cfg.seed), rx_{ReceiverState(1), ReceiverState(2), ReceiverState(3)} {
    result_.config = cfg;
}

bool BroadcastSimulator::draw(double p) {
    // 53-bit uniform; keeps the stream independent of library distribution details.
    double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return u < p;
}

void BroadcastSimulator::hard_violation(std::uint64_t& counter, const std::string& what) {
    ++counter;
    if (cfg_.assert_level == AssertLevel::Strict) {
        std::ostringstream os;
        os << "slot " << slot_ << ": " << what;
        throw InvariantViolation(os.str(), slot_, result_.violations);
    }
}

void BroadcastSimulator::check_plan(const TransmissionPlan& plan, std::uint32_t m) {
    auto& v = result_.violations;
    for (PacketId p : plan.support) {
        if (p > m + 1) {
            hard_violation(v.support_bound, "support index " + std::to_string(p) +
                                                " above m+1=" + std::to_string(m + 1));
        }
    }
    CoeffVector vec = plan.vector();
    for (int r = 0; r < 3; ++r) {
        int undecoded = 0;
        for (PacketId p : plan.support) {
            if (!rx_[r].decoded(p)) ++undecoded;
        }
        if (undecoded > 2) {
            hard_violation(v.two_undecoded, "receiver " + std::to_string(r + 1) + " sees " +
                                                std::to_string(undecoded) +
                                                " undecoded packets in the support");
        }
        if (rx_[r].rank() < arrived_ && rx_[r].in_span(vec)) {
            hard_violation(v.innovation, "transmission not innovative for lagging receiver " +
                                             std::to_string(r + 1));
        }
    }
}

void BroadcastSimulator::post_checks() {
    auto& v = result_.violations;
    std::uint32_t m = 0;
    for (const auto& r : rx_) m = std::max<std::uint32_t>(m, static_cast<std::uint32_t>(r.rank()));

    bool some_leader_done = false;
    for (const auto& r : rx_) {
        if (r.rank() != m) continue;
        bool done = true;
        for (PacketId p : active_) {
            if (p > m) break;
            if (!r.decoded(p)) {
                done = false;
                break;
            }
        }
        if (done) {
            some_leader_done = true;
            break;
        }
    }
    if (!some_leader_done) hard_violation(v.leader_decode, "no leader has decoded {1..m}");

    for (const auto& r : rx_) {
        if (r.basis().counts_consistent()) continue;
        hard_violation(v.seen_rank, "receiver " + std::to_string(r.id()) + ": |seen| != rank");
    }

    int mixed = 0;
    for (const auto& r : rx_) {
        if (!r.heard_undecoded().empty()) ++mixed;
    }
    if (mixed >= 2) ++v.conjecture_both_mixed;  // monitored only
}

void BroadcastSimulator::record(const SlotRecord& rec) {
    if (slot_ > cfg_.warmup) {
        result_.queue_sum += rec.queue;
        result_.queue_max = std::max<std::uint64_t>(result_.queue_max, rec.queue);
        ++result_.queue_samples;
    }
    if (cfg_.record_trace) result_.trace.push_back(rec);
}

void BroadcastSimulator::step(bool allow_arrival) {
    ++slot_;
    SlotRecord rec;
    rec.slot = slot_;

    if (allow_arrival && draw(cfg_.lambda)) {
        rec.arrival = true;
        ++arrived_;
        result_.packets.push_back({arrived_, slot_, {-1, -1, -1}, -1});
        active_.push_back(arrived_);
    }

    SenderView view{arrived_, {&rx_[0], &rx_[1], &rx_[2]}, active_};
    LeaderInfo info = compute_leaders(view);
    TransmissionPlan plan = next_transmission(view);

    rec.label = plan.label;
    rec.support_size = static_cast<std::uint8_t>(plan.support.size());
    for (std::size_t i = 0; i < plan.support.size(); ++i) {
        rec.support[i] = plan.support[i];
        rec.coeff[i] = plan.coeffs[i].v;
    }
    if (plan.support.size() == 1 &&
        (plan.label == CaseLabel::UlCase2 || plan.label == CaseLabel::UlCase3 ||
         plan.label == CaseLabel::UlCase4 || plan.label == CaseLabel::UlCase6 ||
         plan.label == CaseLabel::UlCase7)) {
        ++result_.diag_alone_fallback;
    }

    std::vector<PacketId> decode_events;
    if (!plan.idle()) {
        if (cfg_.assert_level != AssertLevel::Off) check_plan(plan, info.m);
        CoeffVector vec = plan.vector();
        for (int r = 0; r < 3; ++r) {
            if (!draw(cfg_.mu)) continue;
            rec.delivered[r] = true;
            auto res = rx_[r].receive(vec);
            for (PacketId p : res.newly_decoded) {
                result_.packets[p - 1].decode_slot[r] = static_cast<std::int64_t>(slot_);
                decode_events.push_back(p);
            }
        }
    }

    // Drop packets the moment all three receivers have decoded them.
    std::sort(decode_events.begin(), decode_events.end());
    decode_events.erase(std::unique(decode_events.begin(), decode_events.end()),
                        decode_events.end());
    for (PacketId p : decode_events) {
        if (rx_[0].decoded(p) && rx_[1].decoded(p) && rx_[2].decoded(p)) {
            result_.packets[p - 1].drop_slot = static_cast<std::int64_t>(slot_);
            auto it = std::lower_bound(active_.begin(), active_.end(), p);
            active_.erase(it);
        }
    }

    if (cfg_.assert_level != AssertLevel::Off) post_checks();

    for (int r = 0; r < 3; ++r) rec.rank[r] = static_cast<std::uint32_t>(rx_[r].rank());
    rec.queue = static_cast<std::uint32_t>(active_.size());
    record(rec);
}

RunResult BroadcastSimulator::finish() {
    result_.slots_run = slot_;
    return std::move(result_);
}

RunResult run(const SimConfig& cfg) {
    if (cfg.mode == SimMode::SingleRxArq) return run_arq_single(cfg);
    BroadcastSimulator sim(cfg);
    for (std::uint64_t t = 0; t < cfg.slots; ++t) sim.step(true);
    if (cfg.drain) {
        if (cfg.mu <= 0.0 && !sim.active().empty()) {
            throw std::invalid_argument("sim: drain requires mu > 0");
        }
        while (!sim.active().empty()) sim.step(false);
    }
    return sim.finish();
}

// Single-receiver stop-and-wait baseline: retransmit the head-of-line packet
// until it is delivered.
RunResult run_arq_single(const SimConfig& cfg) {
    RunResult result;
    result.config = cfg;
    std::mt19937_64 rng(cfg.seed);
    auto draw = [&](double p) {
        double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        return u < p;
    };

    std::uint64_t slot = 0;
    std::uint32_t arrived = 0;
    std::uint32_t delivered = 0;

    auto step = [&](bool allow_arrival) {
        ++slot;
        SlotRecord rec;
        rec.slot = slot;
        if (allow_arrival && draw(cfg.lambda)) {
            rec.arrival = true;
            ++arrived;
            result.packets.push_back({arrived, slot, {-1, -1, -1}, -1});
        }
        if (delivered < arrived) {
            PacketId head = delivered + 1;
            rec.label = CaseLabel::ArqTx;
            rec.support_size = 1;
            rec.support[0] = head;
            rec.coeff[0] = 1;
            if (draw(cfg.mu)) {
                rec.delivered[0] = true;
                result.packets[head - 1].decode_slot[0] = static_cast<std::int64_t>(slot);
                result.packets[head - 1].drop_slot = static_cast<std::int64_t>(slot);
                ++delivered;
            }
        }
        rec.rank[0] = delivered;
        rec.queue = arrived - delivered;
        if (slot > cfg.warmup) {
            result.queue_sum += rec.queue;
            result.queue_max = std::max<std::uint64_t>(result.queue_max, rec.queue);
            ++result.queue_samples;
        }
        if (cfg.record_trace) result.trace.push_back(rec);
    };

    for (std::uint64_t t = 0; t < cfg.slots; ++t) step(true);
    if (cfg.drain) {
        if (cfg.mu <= 0.0 && delivered < arrived) {
            throw std::invalid_argument("sim: drain requires mu > 0");
        }
        while (delivered < arrived) step(false);
    }
    result.slots_run = slot;
    return result;
}

}  // namespace ncbcast
