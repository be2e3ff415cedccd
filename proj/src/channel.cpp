#include "mimome/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mimome {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

bool finite_non_negative(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x) || x < 0.0) return false;
    return true;
}

} // namespace

void SystemConfig::validate() const {
    require(M >= 1, "M must be positive");
    require(K >= 1, "K must be positive");
    require(J >= 0, "J must be non-negative");
    require(L >= 1, "L must be positive");
    require(L <= M, "L must not exceed M");
    require(std::isfinite(total_power) && total_power >= 0.0, "total power must be non-negative");
    require(std::isfinite(sigma2) && sigma2 > 0.0, "sigma2 must be positive");
    require(std::isfinite(rho2) && rho2 > 0.0, "rho2 must be positive");
    require(betas.size() == static_cast<std::size_t>(K), "betas must have K entries");
    require(thetas.size() == static_cast<std::size_t>(J), "thetas must have J entries");
    require(weights.size() == static_cast<std::size_t>(K), "weights must have K entries");
    require(finite_non_negative(betas), "betas must be non-negative");
    require(finite_non_negative(thetas), "thetas must be non-negative");
    require(finite_non_negative(weights), "weights must be non-negative");
    bool any_weight = false;
    for (double q : weights) any_weight = any_weight || q > 0.0;
    require(any_weight, "weights must not all be zero");
}

SystemConfig SystemConfig::uniform(int M, int K, int J, int L, double power, double sigma2,
                                   double rho2, double beta, double theta, double weight) {
    SystemConfig cfg;
    cfg.M = M;
    cfg.K = K;
    cfg.J = J;
    cfg.L = L;
    cfg.total_power = power;
    cfg.sigma2 = sigma2;
    cfg.rho2 = rho2;
    cfg.betas.assign(static_cast<std::size_t>(std::max(K, 0)), beta);
    cfg.thetas.assign(static_cast<std::size_t>(std::max(J, 0)), theta);
    cfg.weights.assign(static_cast<std::size_t>(std::max(K, 0)), weight);
    return cfg;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::initializer_list<std::uint64_t> words) noexcept {
    std::uint64_t h = 0x6a09e667f3bcc908ULL;
    for (std::uint64_t w : words) h = mix64(h ^ mix64(w));
    return h;
}

cdouble sample_cn(Engine& eng, std::normal_distribution<double>& normal) {
    static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const double x = normal(eng);
    const double y = normal(eng);
    return {x * inv_sqrt2, y * inv_sqrt2};
}

CMatrix sample_cn_matrix(Engine& eng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix out(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r) out(r, c) = sample_cn(eng, normal);
    return out;
}

ChannelRealization sample_realization(const SystemConfig& cfg, std::uint64_t master_seed,
                                      std::uint64_t trial_index, std::uint64_t attempt) {
    cfg.validate();
    const auto M = static_cast<std::uint64_t>(cfg.M);
    const auto K = static_cast<std::uint64_t>(cfg.K);

    ChannelRealization ch;
    {
        Engine eng(derive_seed({master_seed, trial_index, attempt, M, K,
                                static_cast<std::uint64_t>(Stream::legitimate)}));
        ch.H = sample_cn_matrix(eng, cfg.M, cfg.K);
    }
    {
        // Column-wise fill: the first J' columns are shared by any J >= J'.
        Engine eng(derive_seed({master_seed, trial_index, attempt, M,
                                static_cast<std::uint64_t>(Stream::eavesdropper)}));
        ch.G = sample_cn_matrix(eng, cfg.M, cfg.J);
    }
    ch.beta = Eigen::Map<const RVector>(cfg.betas.data(), cfg.K);
    ch.theta = Eigen::Map<const RVector>(cfg.thetas.data(), cfg.J);
    return ch;
}

double empirical_moment(std::span<const double> values, int p) {
    if (values.empty()) throw DomainError("empirical_moment: empty sample");
    if (p < 1) throw DomainError("empirical_moment: order must be positive");
    double sum = 0.0;
    for (double v : values) sum += std::pow(v, p);
    return sum / static_cast<double>(values.size());
}

} // namespace mimome
