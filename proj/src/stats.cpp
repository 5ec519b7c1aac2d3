#include "ncbcast/stats.hpp"

#include <cmath>

namespace ncbcast {

StatsReport summarize(const RunResult& result) {
    StatsReport rep;
    rep.slots_run = result.slots_run;
    rep.receivers = result.config.mode == SimMode::SingleRxArq ? 1 : 3;

    std::array<double, 3> sum{0.0, 0.0, 0.0};
    std::array<std::uint64_t, 3> n{0, 0, 0};
    for (const auto& pkt : result.packets) {
        if (pkt.arrival_slot <= result.config.warmup) {
            ++rep.warmup_excluded;
            continue;
        }
        bool counted = false;
        bool censored = false;
        for (int r = 0; r < rep.receivers; ++r) {
            if (pkt.decode_slot[r] < 0) {
                censored = true;
                continue;
            }
            sum[r] += static_cast<double>(pkt.decode_slot[r]) -
                      static_cast<double>(pkt.arrival_slot);
            ++n[r];
            counted = true;
        }
        if (counted) ++rep.packet_count;
        if (censored) ++rep.censored;
    }
    if (rep.packet_count == 0) {
        throw std::invalid_argument("stats: no packets to summarize");
    }

    double total = 0.0;
    for (int r = 0; r < rep.receivers; ++r) {
        rep.mean_delay_rx[r] = n[r] > 0 ? sum[r] / static_cast<double>(n[r]) : 0.0;
        total += rep.mean_delay_rx[r];
    }
    rep.mean_delay_avg = total / rep.receivers;

    rep.mean_queue = result.queue_samples > 0
                         ? result.queue_sum / static_cast<double>(result.queue_samples)
                         : 0.0;
    rep.max_queue = result.queue_max;
    return rep;
}

double analytic_queue(double rho, double mu) {
    if (!(rho > 0.0) || !(rho < 1.0)) {
        throw std::domain_error("stats: analytic queue needs 0 < rho < 1");
    }
    return rho * (1.0 - mu) / (1.0 - rho);
}

double analytic_delay(double rho, double mu, double lambda) {
    if (!(lambda > 0.0)) {
        throw std::domain_error("stats: analytic delay needs lambda > 0");
    }
    return analytic_queue(rho, mu) / lambda;
}

double loglog_slope(const std::vector<ScalingPoint>& points) {
    if (points.size() < 2) {
        throw std::invalid_argument("stats: slope needs at least two points");
    }
    double mx = 0.0, my = 0.0;
    for (const auto& p : points) {
        if (!(p.x > 0.0) || !(p.delay > 0.0)) {
            throw std::invalid_argument("stats: slope needs positive x and delay");
        }
        mx += std::log(p.x);
        my += std::log(p.delay);
    }
    mx /= static_cast<double>(points.size());
    my /= static_cast<double>(points.size());

    double sxx = 0.0, sxy = 0.0;
    for (const auto& p : points) {
        double dx = std::log(p.x) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(p.delay) - my);
    }
    if (sxx <= 0.0) {
        throw std::invalid_argument("stats: slope needs at least two distinct x values");
    }
    return sxy / sxx;
}

}  // namespace ncbcast
