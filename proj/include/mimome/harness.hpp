#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <string>
#include <vector>

#include "mimome/asymptotics.hpp"
#include "mimome/beamforming.hpp"
#include "mimome/metrics.hpp"

namespace mimome {

enum class CostEstimator { mean_of_ratios, ratio_of_means };

std::string_view to_string(CostEstimator e);
CostEstimator cost_estimator_from_string(std::string_view name);

/// One Monte Carlo sweep over array sizes. `base.M` is ignored; each entry
/// of m_values is substituted in turn.
struct SweepSpec {
    std::string scenario = "custom";
    SystemConfig base;
    std::vector<int> m_values;
    Scheme scheme = Scheme::TAS_A;
    std::optional<int> quant_bits;
    int trials = 200;
    std::uint64_t master_seed = 1;
    CostEstimator cost_estimator = CostEstimator::mean_of_ratios;

    void validate() const;
    SystemConfig config_for(int m) const;
};

struct Estimate {
    double mean = 0.0;
    double se = 0.0;
};

struct SweepPoint {
    int m = 0;
    int trials = 0;
    int resamples = 0;
    Estimate r_sum;
    Estimate r_sum_noeve;
    Estimate leakage;
    Estimate cost;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<SweepPoint> points;
    bool se_degenerate = false;                // trials == 1: standard errors are 0 placeholders
    std::optional<FitResult> growth_fit;       // of r_sum_noeve
    std::optional<FitResult> cost_fit;         // anchored at the largest m
};

struct TrialOutcome {
    RateReport report;
    int resamples = 0;
};

/// Worker count from SIM_THREADS, else hardware concurrency (at least 1).
int default_worker_count();

/// Runs body(i) for i in [0, n) on `workers` threads. Results must be
/// written to per-index slots; scheduling order is unspecified.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body);

/// Draw, build the scheme's beamformers from H alone, evaluate. Degenerate or
/// singular draws are redrawn with the next attempt number (at most
/// kMaxResamples times).
TrialOutcome run_trial(const SystemConfig& cfg, Scheme scheme, std::optional<int> quant_bits,
                       std::uint64_t master_seed, std::uint64_t trial_index);
inline constexpr int kMaxResamples = 64;

/// Called once per finished array size, from the calling thread.
using ProgressFn = std::function<void(const SweepPoint&)>;

/// Deterministic in spec for any worker count (0 = default_worker_count()).
SweepResult run_sweep(const SweepSpec& spec, int workers = 0, const ProgressFn& progress = {});

/// Sum by recursive halving; result depends only on the order of `values`.
double pairwise_sum(std::span<const double> values);

/// Mean and standard error (sample standard deviation / sqrt(n)).
Estimate estimate(std::span<const double> values);

/// Growth model matching the scheme family: LOGLOG for TAS, LOG for HADP.
FitModel growth_model_for(Scheme s);
FitModel cost_model_for(Scheme s);

} // namespace mimome
