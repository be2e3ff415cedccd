#include "mimome/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mimome {

namespace {

void check_dimensions(const ChannelRealization& ch, const BeamformerSet& bf, const SystemConfig& cfg) {
    const Eigen::Index M = ch.H.rows();
    const Eigen::Index K = ch.H.cols();
    auto fail = [](const std::string& what) { throw ConfigError("dimension mismatch: " + what); };
    if (M != cfg.M || K != cfg.K) fail("H is not M x K");
    if (ch.G.rows() != M || ch.G.cols() != cfg.J) fail("G is not M x J");
    if (ch.beta.size() != K || ch.theta.size() != cfg.J) fail("large-scale gains");
    if (bf.F.rows() != M) fail("F rows != M");
    if (bf.W.rows() != bf.F.cols()) fail("W rows != F cols");
    if (bf.W.cols() != K) fail("W cols != K");
    if (bf.powers.size() != static_cast<std::size_t>(K)) fail("powers size != K");
    if (cfg.weights.size() != static_cast<std::size_t>(K)) fail("weights size != K");
}

void check_user(int k, const SystemConfig& cfg) {
    if (k < 0 || k >= cfg.K) throw ConfigError("user index " + std::to_string(k) + " out of range");
}

} // namespace

double sinr_k(int k, const ChannelRealization& ch, const BeamformerSet& bf, const SystemConfig& cfg) {
    check_dimensions(ch, bf, cfg);
    check_user(k, cfg);
    // Row k of H^T F W: received amplitude of every stream at user k.
    const CVector gains = (ch.H.col(k).transpose() * bf.F * bf.W).transpose();
    double interference = 0.0;
    for (Eigen::Index i = 0; i < gains.size(); ++i)
        if (i != k) interference += bf.powers[static_cast<std::size_t>(i)] * std::norm(gains(i));
    const double beta = ch.beta(k);
    return bf.powers[static_cast<std::size_t>(k)] * beta * std::norm(gains(k)) /
           (cfg.sigma2 + beta * interference);
}

double esnr_k(int k, const ChannelRealization& ch, const BeamformerSet& bf, const SystemConfig& cfg) {
    check_dimensions(ch, bf, cfg);
    check_user(k, cfg);
    if (cfg.J == 0) return 0.0;
    const CVector leaked = ch.G.transpose() * (bf.F * bf.W.col(k));
    double e = 0.0;
    for (Eigen::Index j = 0; j < leaked.size(); ++j) e += ch.theta(j) * std::norm(leaked(j));
    return bf.powers[static_cast<std::size_t>(k)] / cfg.rho2 * e;
}

void finish_report(RateReport& rep, const std::vector<double>& weights) {
    const std::size_t K = rep.sinr.size();
    rep.r_secrecy.assign(K, 0.0);
    rep.r_noeve.assign(K, 0.0);
    rep.r_sum = 0.0;
    rep.r_sum_noeve = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        rep.r_noeve[k] = std::log2(1.0 + rep.sinr[k]);
        rep.r_secrecy[k] = std::max(0.0, std::log2((1.0 + rep.sinr[k]) / (1.0 + rep.esnr[k])));
        rep.r_sum += weights[k] * rep.r_secrecy[k];
        rep.r_sum_noeve += weights[k] * rep.r_noeve[k];
    }
    rep.leakage = rep.r_sum_noeve - rep.r_sum;
    rep.cost = rep.r_sum_noeve != 0.0 ? std::clamp(1.0 - rep.r_sum / rep.r_sum_noeve, 0.0, 1.0) : 0.0;
}

RateReport rate_report(const ChannelRealization& ch, const BeamformerSet& bf, const SystemConfig& cfg) {
    check_dimensions(ch, bf, cfg);
    const Eigen::Index K = ch.H.cols();
    const CMatrix FW = bf.F * bf.W;                   // M x K precoder
    const CMatrix A = ch.H.transpose() * FW;          // A(k, i) = h_k^T F w_i
    const CMatrix E = ch.G.transpose() * FW;          // E(j, k) = g_j^T F w_k

    RateReport rep;
    rep.sinr.resize(static_cast<std::size_t>(K));
    rep.esnr.resize(static_cast<std::size_t>(K));
    rep.interference.resize(static_cast<std::size_t>(K));
    rep.eve_power.resize(static_cast<std::size_t>(K));
    for (Eigen::Index k = 0; k < K; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        double interference = 0.0;
        for (Eigen::Index i = 0; i < K; ++i)
            if (i != k) interference += bf.powers[static_cast<std::size_t>(i)] * std::norm(A(k, i));
        double eve = 0.0;
        for (Eigen::Index j = 0; j < E.rows(); ++j) eve += ch.theta(j) * std::norm(E(j, k));
        const double beta = ch.beta(k);
        rep.interference[ku] = interference;
        rep.eve_power[ku] = eve;
        rep.sinr[ku] = bf.powers[ku] * beta * std::norm(A(k, k)) / (cfg.sigma2 + beta * interference);
        rep.esnr[ku] = bf.powers[ku] / cfg.rho2 * eve;
    }
    finish_report(rep, cfg.weights);
    return rep;
}

} // namespace mimome
