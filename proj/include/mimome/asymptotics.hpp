#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mimome/types.hpp"

namespace mimome {

/// Growth models:  y(M) = R0 + T * K * g(M)
/// Cost models:    c(M) = eps0 / g(M)
/// with g(M) = log2(ln M) for the LOGLOG variants and log2(M) for LOG.
enum class FitModel { LOGLOG_GROWTH, LOG_GROWTH, LOGLOG_COST, LOG_COST };

std::string_view to_string(FitModel m);
FitModel fit_model_from_string(std::string_view name);
bool is_growth_model(FitModel m);

struct FitResult {
    FitModel model = FitModel::LOG_GROWTH;
    double level = 0.0;               // R0 (growth) or eps0 (cost)
    std::optional<double> slope;      // T, growth models only
    double residual_rms = 0.0;
    double r_squared = 0.0;
};

/// g(M) for the model family. Throws DomainError where it is undefined.
double scale_function(FitModel model, double m);

/// Model value at m; `users` multiplies the growth slope.
double evaluate(const FitResult& fit, double m, int users = 1);

/// Ordinary least squares of y on K * g(m).
FitResult fit_growth(std::span<const double> m_values, std::span<const double> y_values, int users,
                     FitModel model);

/// Single-point anchoring: eps0 = c(m0) * g(m0); residuals over all points.
FitResult fit_cost_anchor(std::span<const double> m_values, std::span<const double> c_values,
                          FitModel model, double m0);

// ---- limit-theorem checks ------------------------------------------------

struct GumbelCheck {
    int m = 0;
    int trials = 0;
    double ks_statistic = 0.0;
    double sample_mean_shifted = 0.0;  // mean of (max_m |h|^2 - ln m)
    double sample_mean_max = 0.0;      // mean of max_m |h|^2
};

/// One-sample Kolmogorov-Smirnov distance; sorts `samples` in place.
double ks_statistic(std::vector<double>& samples, const std::function<double(double)>& cdf);

double gumbel_cdf(double x);
double normal_cdf(double x);
double harmonic_number(std::uint64_t n);

/// Max of m unit-mean exponentials (the law of max |h|^2), shifted by ln m,
/// tested against the standard Gumbel CDF.
GumbelCheck gumbel_check(int m, int trials, std::uint64_t seed);

/// Samples of S = m^{-1/2} sum_i h_i conj(u_i)/|u_i| for independent
/// CN(0,1) vectors h, u of length m.
std::vector<cdouble> clt_samples(int m, int trials, std::uint64_t seed);

/// KS distance of sqrt(2) Re(S) from the standard normal.
double clt_check(int m, int trials, std::uint64_t seed);

/// Mean over trials of ||h||_1 / m for h ~ CN(0, I_m).
double lln_check(int m, int trials, std::uint64_t seed);

} // namespace mimome
