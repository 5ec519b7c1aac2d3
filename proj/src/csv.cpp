#include "ncbcast/csv.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace ncbcast {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

namespace {

std::string support_field(const SlotRecord& rec) {
    if (rec.support_size == 0) return "-";
    std::ostringstream os;
    for (int i = 0; i < rec.support_size; ++i) {
        if (i) os << '|';
        os << rec.support[i] << ':' << static_cast<int>(rec.coeff[i]);
    }
    return os.str();
}

void write_rng_header(std::ostream& os, const RunResult& result) {
    os << "# rng=" << RunResult::rng_name << " seed=" << result.config.seed << '\n';
}

}  // namespace

void write_trace_csv(std::ostream& os, const RunResult& result) {
    write_rng_header(os, result);
    os << "slot,arrival,case_label,support,rx1_recv,rx2_recv,rx3_recv,"
          "rank1,rank2,rank3,queue\n";
    for (const auto& rec : result.trace) {
        os << rec.slot << ',' << (rec.arrival ? 1 : 0) << ',' << to_string(rec.label) << ','
           << support_field(rec) << ',' << (rec.delivered[0] ? 1 : 0) << ','
           << (rec.delivered[1] ? 1 : 0) << ',' << (rec.delivered[2] ? 1 : 0) << ','
           << rec.rank[0] << ',' << rec.rank[1] << ',' << rec.rank[2] << ',' << rec.queue
           << '\n';
    }
}

void write_packets_csv(std::ostream& os, const RunResult& result) {
    write_rng_header(os, result);
    os << "id,arrival_slot,decode1,decode2,decode3,drop_slot\n";
    for (const auto& pkt : result.packets) {
        os << pkt.id << ',' << pkt.arrival_slot << ',' << pkt.decode_slot[0] << ','
           << pkt.decode_slot[1] << ',' << pkt.decode_slot[2] << ',' << pkt.drop_slot << '\n';
    }
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, double slope) {
    os << "rho,lambda,mu,x,mean_delay_rx1,mean_delay_rx2,mean_delay_rx3,"
          "mean_delay_avg,mean_queue,slots,seed\n";
    for (const auto& r : rows) {
        os << format_double(r.rho) << ',' << format_double(r.lambda) << ','
           << format_double(r.mu) << ',' << format_double(r.x) << ','
           << format_double(r.stats.mean_delay_rx[0]) << ','
           << format_double(r.stats.mean_delay_rx[1]) << ','
           << format_double(r.stats.mean_delay_rx[2]) << ','
           << format_double(r.stats.mean_delay_avg) << ','
           << format_double(r.stats.mean_queue) << ',' << r.slots << ',' << r.seed << '\n';
    }
    os << "# slope=" << format_double(slope) << '\n';
}

namespace {

nlohmann::json report_body(const RunResult& result, const StatsReport& stats) {
    const SimConfig& cfg = result.config;
    nlohmann::json j;
    j["schema_version"] = 1;
    j["config"] = {
        {"mode", to_string(cfg.mode)},
        {"lambda", cfg.lambda},
        {"mu", cfg.mu},
        {"rho", cfg.rho()},
        {"slots", cfg.slots},
        {"seed", cfg.seed},
        {"drain", cfg.drain},
        {"warmup", cfg.warmup},
        {"assert_level", to_string(cfg.assert_level)},
    };
    j["rng"] = RunResult::rng_name;
    j["slots_run"] = result.slots_run;
    j["packets"] = {
        {"arrived", result.packets.size()},
        {"counted", stats.packet_count},
        {"censored", stats.censored},
        {"warmup_excluded", stats.warmup_excluded},
    };
    nlohmann::json delay;
    for (int r = 0; r < stats.receivers; ++r) {
        delay["rx" + std::to_string(r + 1)] = stats.mean_delay_rx[r];
    }
    delay["avg"] = stats.mean_delay_avg;
    j["delay"] = delay;
    j["queue"] = {{"mean", stats.mean_queue}, {"max", stats.max_queue}};
    j["violations"] = {
        {"innovation", result.violations.innovation},
        {"support_bound", result.violations.support_bound},
        {"two_undecoded", result.violations.two_undecoded},
        {"leader_decode", result.violations.leader_decode},
        {"seen_rank", result.violations.seen_rank},
        {"conjecture_both_mixed", result.violations.conjecture_both_mixed},
    };
    j["diagnostics"] = {{"alone_fallback", result.diag_alone_fallback}};
    return j;
}

}  // namespace

std::string report_json(const RunResult& result, const StatsReport& stats) {
    return report_body(result, stats).dump(2) + "\n";
}

std::string report_csv(const RunResult& result, const StatsReport& stats) {
    nlohmann::json j = report_body(result, stats);
    std::ostringstream os;
    os << "key,value\n";
    // flatten one level: section.key,value
    for (const auto& [section, value] : j.items()) {
        if (value.is_object()) {
            for (const auto& [k, v] : value.items()) {
                os << section << '.' << k << ',' << v.dump() << '\n';
            }
        } else {
            os << section << ',' << value.dump() << '\n';
        }
    }
    return os.str();
}

}  // namespace ncbcast
