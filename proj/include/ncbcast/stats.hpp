#pragma once

#include "ncbcast/sim.hpp"

namespace ncbcast {

struct StatsReport {
    std::array<double, 3> mean_delay_rx{0.0, 0.0, 0.0};
    double mean_delay_avg = 0.0;
    double mean_queue = 0.0;
    std::uint64_t max_queue = 0;
    std::uint64_t packet_count = 0;      // packets contributing to delay means
    std::uint64_t censored = 0;          // undecoded packets excluded (no-drain runs)
    std::uint64_t warmup_excluded = 0;   // packets excluded by the warmup cutoff
    std::uint64_t slots_run = 0;
    int receivers = 3;
};

// Delay is decode slot minus arrival slot, per receiver; the cross-receiver
// mean is the arithmetic mean of the per-receiver means. Throws
// std::invalid_argument when no packet survives the cutoffs.
StatsReport summarize(const RunResult& result);

// Stationary queue mean of the single-receiver retransmission baseline:
// rho (1-mu) / (1-rho). Requires 0 < rho < 1.
double analytic_queue(double rho, double mu);

// Little's-law delay of the same baseline: analytic_queue / lambda.
double analytic_delay(double rho, double mu, double lambda);

struct ScalingPoint {
    double rho = 0.0;
    double x = 0.0;      // 1 / (1 - rho)
    double delay = 0.0;  // mean decoding delay averaged across receivers
};

// Least-squares slope of log(delay) against log(x).
double loglog_slope(const std::vector<ScalingPoint>& points);

}  // namespace ncbcast
