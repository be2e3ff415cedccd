#include "mimome/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

namespace mimome {

std::string_view to_string(CostEstimator e) {
    return e == CostEstimator::mean_of_ratios ? "mean_of_ratios" : "ratio_of_means";
}

CostEstimator cost_estimator_from_string(std::string_view name) {
    if (name == "mean_of_ratios") return CostEstimator::mean_of_ratios;
    if (name == "ratio_of_means") return CostEstimator::ratio_of_means;
    throw ConfigError("unknown cost estimator '" + std::string(name) + "'");
}

SystemConfig SweepSpec::config_for(int m) const {
    SystemConfig cfg = base;
    cfg.M = m;
    return cfg;
}

void SweepSpec::validate() const {
    if (m_values.empty()) {
        // An empty sweep is legal; still check the per-user parameters.
        SystemConfig probe = base;
        probe.M = std::max(base.L, 1);
        probe.validate();
    }
    for (std::size_t i = 0; i < m_values.size(); ++i) {
        if (m_values[i] < 1) throw ConfigError("m_values must be positive");
        if (i > 0 && m_values[i] <= m_values[i - 1]) throw ConfigError("m_values must be strictly increasing");
        config_for(m_values[i]).validate();
    }
    if (trials < 1) throw ConfigError("trials must be positive");
    if (scheme == Scheme::HADP_B && !quant_bits) throw ConfigError("HADP_B needs quant_bits");
    if (scheme != Scheme::HADP_B && quant_bits) throw ConfigError("quant_bits only applies to HADP_B");
    if (quant_bits && *quant_bits <= 0) throw ConfigError("quant_bits must be positive");
    if (scheme != Scheme::TAS_B && base.L < base.K)
        throw ConfigError(std::string(to_string(scheme)) + " needs L >= K");
}

int default_worker_count() {
    if (const char* env = std::getenv("SIM_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min(v, 1024L));
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body) {
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex mu;
    std::size_t err_index = std::numeric_limits<std::size_t>::max();
    std::exception_ptr err;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (i < err_index) {
                    err_index = i;
                    err = std::current_exception();
                }
                failed = true;
            }
        }
    };
    const auto count = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    std::vector<std::jthread> pool;
    pool.reserve(count);
    for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
    pool.clear();
    if (err) std::rethrow_exception(err);
}

TrialOutcome run_trial(const SystemConfig& cfg, Scheme scheme, std::optional<int> quant_bits,
                       std::uint64_t master_seed, std::uint64_t trial_index) {
    for (int attempt = 0;; ++attempt) {
        const ChannelRealization ch =
            sample_realization(cfg, master_seed, trial_index, static_cast<std::uint64_t>(attempt));
        try {
            const BeamformerSet bf = build_beamformers(ch.H, cfg, scheme, quant_bits);
            return {rate_report(ch, bf, cfg), attempt};
        } catch (const DegenerateChannelError&) {
            if (attempt >= kMaxResamples) throw;
        } catch (const SingularChannelError&) {
            if (attempt >= kMaxResamples) throw;
        }
    }
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

Estimate estimate(std::span<const double> values) {
    Estimate e;
    if (values.empty()) return e;
    const auto n = static_cast<double>(values.size());
    e.mean = pairwise_sum(values) / n;
    if (values.size() > 1) {
        std::vector<double> dev(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) dev[i] = (values[i] - e.mean) * (values[i] - e.mean);
        e.se = std::sqrt(pairwise_sum(dev) / (n - 1.0) / n);
    }
    return e;
}

namespace {

// 1 - mean(a)/mean(b) with a delta-method standard error.
Estimate ratio_of_means_cost(std::span<const double> a, std::span<const double> b) {
    const Estimate ea = estimate(a);
    const Estimate eb = estimate(b);
    Estimate c;
    if (eb.mean == 0.0) return c;
    c.mean = std::clamp(1.0 - ea.mean / eb.mean, 0.0, 1.0);
    const std::size_t n = a.size();
    if (n > 1) {
        std::vector<double> cross(n);
        for (std::size_t i = 0; i < n; ++i) cross[i] = (a[i] - ea.mean) * (b[i] - eb.mean);
        const double cov_mean = pairwise_sum(cross) / (static_cast<double>(n) - 1.0) / static_cast<double>(n);
        const double r = ea.mean / eb.mean;
        const double var = (ea.se * ea.se - 2.0 * r * cov_mean + r * r * eb.se * eb.se) / (eb.mean * eb.mean);
        c.se = std::sqrt(std::max(var, 0.0));
    }
    return c;
}

} // namespace

FitModel growth_model_for(Scheme s) {
    return (s == Scheme::TAS_A || s == Scheme::TAS_B) ? FitModel::LOGLOG_GROWTH : FitModel::LOG_GROWTH;
}

FitModel cost_model_for(Scheme s) {
    return (s == Scheme::TAS_A || s == Scheme::TAS_B) ? FitModel::LOGLOG_COST : FitModel::LOG_COST;
}

SweepResult run_sweep(const SweepSpec& spec, int workers, const ProgressFn& progress) {
    spec.validate();
    if (workers <= 0) workers = default_worker_count();

    SweepResult result;
    result.spec = spec;
    result.se_degenerate = spec.trials == 1;
    const auto n = static_cast<std::size_t>(spec.trials);

    for (int m : spec.m_values) {
        const SystemConfig cfg = spec.config_for(m);
        std::vector<TrialOutcome> outcomes(n);
        parallel_for(n, workers, [&](std::size_t t) {
            outcomes[t] = run_trial(cfg, spec.scheme, spec.quant_bits, spec.master_seed, t);
        });

        std::vector<double> r_sum(n), r_noeve(n), leak(n), cost(n);
        SweepPoint pt;
        pt.m = m;
        pt.trials = spec.trials;
        for (std::size_t t = 0; t < n; ++t) {
            const RateReport& rep = outcomes[t].report;
            r_sum[t] = rep.r_sum;
            r_noeve[t] = rep.r_sum_noeve;
            leak[t] = rep.leakage;
            cost[t] = rep.cost;
            pt.resamples += outcomes[t].resamples;
        }
        pt.r_sum = estimate(r_sum);
        pt.r_sum_noeve = estimate(r_noeve);
        pt.leakage = estimate(leak);
        pt.cost = spec.cost_estimator == CostEstimator::mean_of_ratios ? estimate(cost)
                                                                       : ratio_of_means_cost(r_sum, r_noeve);
        result.points.push_back(pt);
        if (progress) progress(pt);
    }

    if (result.points.size() >= 3) {
        std::vector<double> ms, y, c;
        for (const SweepPoint& p : result.points) {
            ms.push_back(p.m);
            y.push_back(p.r_sum_noeve.mean);
            c.push_back(p.cost.mean);
        }
        try {
            result.growth_fit = fit_growth(ms, y, spec.base.K, growth_model_for(spec.scheme));
            result.cost_fit = fit_cost_anchor(ms, c, cost_model_for(spec.scheme), ms.back());
        } catch (const Error&) {
            // Sweeps reaching below the models' domain (M < 3) carry no fits.
        }
    }
    return result;
}

} // namespace mimome
