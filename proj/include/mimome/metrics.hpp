#pragma once

#include <vector>

#include "mimome/beamforming.hpp"
#include "mimome/channel.hpp"

namespace mimome {

/// Per-user and network-level rates for one realization. Rates in bits per
/// channel use.
struct RateReport {
    std::vector<double> sinr;
    std::vector<double> esnr;
    std::vector<double> r_secrecy;
    std::vector<double> r_noeve;
    std::vector<double> interference;  // sum_{i != k} P_i |h_k^T F w_i|^2
    std::vector<double> eve_power;     // sum_j theta_j |g_j^T F w_k|^2
    double r_sum = 0.0;
    double r_sum_noeve = 0.0;
    double leakage = 0.0;
    double cost = 0.0;
};

double sinr_k(int k, const ChannelRealization& ch, const BeamformerSet& bf, const SystemConfig& cfg);
double esnr_k(int k, const ChannelRealization& ch, const BeamformerSet& bf, const SystemConfig& cfg);

RateReport rate_report(const ChannelRealization& ch, const BeamformerSet& bf, const SystemConfig& cfg);

/// Network-level sums from per-user SINR/ESNR. Cost is 0 when the
/// no-eavesdropper sum-rate is 0.
void finish_report(RateReport& rep, const std::vector<double>& weights);

} // namespace mimome
