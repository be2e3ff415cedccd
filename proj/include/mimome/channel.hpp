#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "mimome/types.hpp"

namespace mimome {

/// Scalar parameters of one downlink wiretap instance: a base station with M
/// antennas and L RF chains, K single-antenna users, J passive eavesdroppers.
struct SystemConfig {
    int M = 1;
    int K = 1;
    int J = 0;
    int L = 1;
    double total_power = 1.0;
    double sigma2 = 1.0;              // legitimate noise variance
    double rho2 = 1.0;                // eavesdropper noise variance
    std::vector<double> betas;        // large-scale gain per user, size K
    std::vector<double> thetas;       // large-scale gain per eavesdropper, size J
    std::vector<double> weights;      // sum-rate weights q_k, size K

    /// Throws ConfigError naming the first violated invariant.
    void validate() const;

    /// Config with every per-user/per-eavesdropper vector filled by a scalar.
    static SystemConfig uniform(int M, int K, int J, int L, double power, double sigma2,
                                double rho2, double beta, double theta, double weight = 1.0);
};

/// One fading draw. Columns of H are the user channels h_k, columns of G
/// the eavesdropper channels g_j.
struct ChannelRealization {
    CMatrix H;            // M x K
    CMatrix G;            // M x J
    RVector beta;         // diagonal of B
    RVector theta;        // diagonal of Theta

    Eigen::MatrixXd B() const { return beta.asDiagonal(); }
    Eigen::MatrixXd Theta() const { return theta.asDiagonal(); }
};

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Hash an ordered list of words into one 64-bit seed.
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> words) noexcept;

/// Stream tags keep the legitimate and eavesdropper draws in separate
/// streams, so the user channels of a trial do not depend on J.
enum class Stream : std::uint64_t {
    legitimate = 0x4c45474954ULL,
    eavesdropper = 0x4541564553ULL,
    gumbel = 0x47554d42ULL,
    clt = 0x434c54ULL,
    lln = 0x4c4c4eULL,
};

using Engine = std::mt19937_64;

/// CN(0,1) sample as (x + iy)/sqrt(2).
cdouble sample_cn(Engine& eng, std::normal_distribution<double>& normal);

/// Fill an rows x cols matrix with i.i.d. CN(0,1), column by column.
CMatrix sample_cn_matrix(Engine& eng, Eigen::Index rows, Eigen::Index cols);

/// Deterministic function of (cfg dimensions, master_seed, trial_index,
/// attempt). `attempt` > 0 selects a fresh draw for resampling.
ChannelRealization sample_realization(const SystemConfig& cfg, std::uint64_t master_seed,
                                      std::uint64_t trial_index, std::uint64_t attempt = 0);

/// (1/n) sum values_i^p.
double empirical_moment(std::span<const double> values, int p);

} // namespace mimome
