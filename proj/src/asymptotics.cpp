#include "mimome/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "mimome/channel.hpp"

namespace mimome {

std::string_view to_string(FitModel m) {
    switch (m) {
    case FitModel::LOGLOG_GROWTH: return "LOGLOG_GROWTH";
    case FitModel::LOG_GROWTH: return "LOG_GROWTH";
    case FitModel::LOGLOG_COST: return "LOGLOG_COST";
    case FitModel::LOG_COST: return "LOG_COST";
    }
    return "?";
}

FitModel fit_model_from_string(std::string_view name) {
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    for (FitModel m : {FitModel::LOGLOG_GROWTH, FitModel::LOG_GROWTH, FitModel::LOGLOG_COST,
                       FitModel::LOG_COST})
        if (to_string(m) == upper) return m;
    throw DomainError("unknown fit model '" + std::string(name) + "'");
}

bool is_growth_model(FitModel m) {
    return m == FitModel::LOGLOG_GROWTH || m == FitModel::LOG_GROWTH;
}

double scale_function(FitModel model, double m) {
    switch (model) {
    case FitModel::LOGLOG_GROWTH:
    case FitModel::LOGLOG_COST:
        // ln m must exceed 1 for the outer log to be positive.
        if (!(m >= 3.0)) throw DomainError("loglog models need M >= 3");
        return std::log2(std::log(m));
    case FitModel::LOG_GROWTH:
    case FitModel::LOG_COST:
        if (!(m >= 2.0)) throw DomainError("log models need M >= 2");
        return std::log2(m);
    }
    throw DomainError("bad fit model");
}

double evaluate(const FitResult& fit, double m, int users) {
    const double g = scale_function(fit.model, m);
    if (is_growth_model(fit.model)) return fit.level + fit.slope.value_or(0.0) * users * g;
    return fit.level / g;
}

namespace {

void finish_residuals(FitResult& fit, std::span<const double> y, const std::vector<double>& yhat) {
    const auto n = static_cast<double>(y.size());
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= n;
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        ss_res += (y[i] - yhat[i]) * (y[i] - yhat[i]);
        ss_tot += (y[i] - mean) * (y[i] - mean);
    }
    fit.residual_rms = std::sqrt(ss_res / n);
    if (ss_tot > 0.0)
        fit.r_squared = 1.0 - ss_res / ss_tot;
    else
        fit.r_squared = ss_res == 0.0 ? 1.0 : 0.0;
}

} // namespace

FitResult fit_growth(std::span<const double> m_values, std::span<const double> y_values, int users,
                     FitModel model) {
    if (!is_growth_model(model)) throw FitError("fit_growth: not a growth model");
    if (m_values.size() != y_values.size()) throw FitError("fit_growth: size mismatch");
    if (m_values.size() < 3) throw FitError("fit_growth: need at least 3 points");
    if (users < 1) throw FitError("fit_growth: user count must be positive");

    const std::size_t n = m_values.size();
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = users * scale_function(model, m_values[i]);

    double xbar = 0.0;
    double ybar = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        xbar += x[i];
        ybar += y_values[i];
    }
    xbar /= static_cast<double>(n);
    ybar /= static_cast<double>(n);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - xbar) * (x[i] - xbar);
        sxy += (x[i] - xbar) * (y_values[i] - ybar);
    }
    double xscale = 0.0;
    for (double v : x) xscale = std::max(xscale, std::abs(v));
    if (!(sxx > 1e-20 * std::max(1.0, xscale * xscale) * static_cast<double>(n)))
        throw FitError("fit_growth: regressor has no spread (repeated M values)");

    FitResult fit;
    fit.model = model;
    fit.slope = sxy / sxx;
    fit.level = ybar - *fit.slope * xbar;
    std::vector<double> yhat(n);
    for (std::size_t i = 0; i < n; ++i) yhat[i] = fit.level + *fit.slope * x[i];
    finish_residuals(fit, y_values, yhat);
    return fit;
}

FitResult fit_cost_anchor(std::span<const double> m_values, std::span<const double> c_values,
                          FitModel model, double m0) {
    if (is_growth_model(model)) throw FitError("fit_cost_anchor: not a cost model");
    if (m_values.size() != c_values.size() || m_values.empty())
        throw FitError("fit_cost_anchor: need matching, non-empty samples");
    const auto it = std::find(m_values.begin(), m_values.end(), m0);
    if (it == m_values.end())
        throw DomainError("fit_cost_anchor: anchor M0=" + std::to_string(m0) + " not in sweep");

    FitResult fit;
    fit.model = model;
    fit.level = c_values[static_cast<std::size_t>(it - m_values.begin())] * scale_function(model, m0);
    std::vector<double> yhat(m_values.size());
    for (std::size_t i = 0; i < m_values.size(); ++i) yhat[i] = fit.level / scale_function(model, m_values[i]);
    finish_residuals(fit, c_values, yhat);
    return fit;
}

double ks_statistic(std::vector<double>& samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw DomainError("ks_statistic: empty sample");
    std::sort(samples.begin(), samples.end());
    const auto n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

double gumbel_cdf(double x) { return std::exp(-std::exp(-x)); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double harmonic_number(std::uint64_t n) {
    // Sum smallest terms first.
    double h = 0.0;
    for (std::uint64_t i = n; i >= 1; --i) h += 1.0 / static_cast<double>(i);
    return h;
}

GumbelCheck gumbel_check(int m, int trials, std::uint64_t seed) {
    if (m < 1) throw DomainError("gumbel_check: m must be positive");
    if (trials < 100) throw DomainError("gumbel_check: need at least 100 trials");

    const double shift = std::log(static_cast<double>(m));
    std::vector<double> gamma(static_cast<std::size_t>(trials));
    double sum_max = 0.0;
    for (int t = 0; t < trials; ++t) {
        Engine eng(derive_seed({seed, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(m),
                                static_cast<std::uint64_t>(Stream::gumbel)}));
        std::exponential_distribution<double> expo(1.0);
        double mx = 0.0;
        for (int i = 0; i < m; ++i) mx = std::max(mx, expo(eng));
        gamma[static_cast<std::size_t>(t)] = mx - shift;
        sum_max += mx;
    }

    GumbelCheck out;
    out.m = m;
    out.trials = trials;
    out.sample_mean_max = sum_max / trials;
    out.sample_mean_shifted = out.sample_mean_max - shift;
    out.ks_statistic = ks_statistic(gamma, gumbel_cdf);
    return out;
}

std::vector<cdouble> clt_samples(int m, int trials, std::uint64_t seed) {
    if (m < 1) throw DomainError("clt_samples: m must be positive");
    if (trials < 1) throw DomainError("clt_samples: trials must be positive");
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    std::vector<cdouble> out(static_cast<std::size_t>(trials));
    for (int t = 0; t < trials; ++t) {
        Engine eng(derive_seed({seed, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(m),
                                static_cast<std::uint64_t>(Stream::clt)}));
        std::normal_distribution<double> normal(0.0, 1.0);
        cdouble s = 0.0;
        for (int i = 0; i < m; ++i) {
            const cdouble h = sample_cn(eng, normal);
            const cdouble u = sample_cn(eng, normal);
            s += h * std::conj(u) / std::abs(u);
        }
        out[static_cast<std::size_t>(t)] = s * scale;
    }
    return out;
}

double clt_check(int m, int trials, std::uint64_t seed) {
    if (trials < 100) throw DomainError("clt_check: need at least 100 trials");
    const auto s = clt_samples(m, trials, seed);
    std::vector<double> re(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) re[i] = std::numbers::sqrt2 * s[i].real();
    return ks_statistic(re, normal_cdf);
}

double lln_check(int m, int trials, std::uint64_t seed) {
    if (m < 1 || trials < 1) throw DomainError("lln_check: m and trials must be positive");
    double total = 0.0;
    for (int t = 0; t < trials; ++t) {
        Engine eng(derive_seed({seed, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(m),
                                static_cast<std::uint64_t>(Stream::lln)}));
        std::normal_distribution<double> normal(0.0, 1.0);
        double l1 = 0.0;
        for (int i = 0; i < m; ++i) l1 += std::abs(sample_cn(eng, normal));
        total += l1 / m;
    }
    return total / trials;
}

} // namespace mimome
