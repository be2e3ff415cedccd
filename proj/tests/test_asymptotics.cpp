#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "mimome/asymptotics.hpp"
#include "mimome/harness.hpp"

using namespace mimome;

namespace {

std::vector<double> pow2_range(int a, int b) {
    std::vector<double> out;
    for (int e = a; e <= b; ++e) out.push_back(std::ldexp(1.0, e));
    return out;
}

SweepResult sparse_sweep(Scheme s) {
    SweepSpec spec;
    spec.scenario = "sparse";
    spec.base = SystemConfig::uniform(16, 16, 2, 16, 1.0, 1.0, 1.0, 1.0, 0.1);
    for (int e = 6; e <= 12; ++e) spec.m_values.push_back(1 << e);
    spec.scheme = s;
    spec.trials = 200;
    spec.master_seed = 20240601;
    return run_sweep(spec);
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& v) {
    const auto e = estimate(v);
    return {e.mean, e.se};
}

} // namespace

TEST_CASE("exact synthetic growth data is recovered") {
    const auto m = pow2_range(4, 12);
    std::vector<double> y;
    for (double x : m) y.push_back(3.0 + 0.5 * 16 * std::log2(std::log(x)));
    const auto fit = fit_growth(m, y, 16, FitModel::LOGLOG_GROWTH);
    CHECK(std::abs(fit.level - 3.0) < 1e-10);
    CHECK(std::abs(*fit.slope - 0.5) < 1e-10);
    CHECK(fit.residual_rms < 1e-10);
    CHECK(fit.r_squared == doctest::Approx(1.0));

    std::vector<double> z;
    for (double x : m) z.push_back(-1.25 + 0.1 * 4 * std::log2(x));
    const auto lin = fit_growth(m, z, 4, FitModel::LOG_GROWTH);
    CHECK(std::abs(lin.level + 1.25) < 1e-10);
    CHECK(std::abs(*lin.slope - 0.1) < 1e-10);
    CHECK(evaluate(lin, 1024, 4) == doctest::Approx(-1.25 + 0.4 * 10));
}

TEST_CASE("degenerate growth fits are errors") {
    const std::vector<double> m{64, 64, 64};
    const std::vector<double> y{1, 2, 3};
    CHECK_THROWS_AS(fit_growth(m, y, 1, FitModel::LOG_GROWTH), FitError);
    CHECK_THROWS_AS(fit_growth(std::vector<double>{64, 128}, std::vector<double>{1, 2}, 1, FitModel::LOG_GROWTH),
                    FitError);
    CHECK_THROWS_AS(fit_growth(pow2_range(2, 4), y, 1, FitModel::LOG_COST), FitError);
    CHECK_THROWS_AS(scale_function(FitModel::LOGLOG_GROWTH, 2.0), DomainError);
}

TEST_CASE("anchored cost fits") {
    const auto m = pow2_range(6, 12);
    SUBCASE("zero at the anchor") {
        const std::vector<double> c(m.size(), 0.0);
        const auto fit = fit_cost_anchor(m, c, FitModel::LOGLOG_COST, 4096);
        CHECK(fit.level == 0.0);
        CHECK(evaluate(fit, 256) == 0.0);
    }
    SUBCASE("exact model") {
        std::vector<double> c;
        for (double x : m) c.push_back(0.7 / std::log2(std::log(x)));
        const auto fit = fit_cost_anchor(m, c, FitModel::LOGLOG_COST, 1024);
        CHECK(fit.level == doctest::Approx(0.7));
        CHECK(fit.residual_rms < 1e-15);
        CHECK_FALSE(fit.slope.has_value());
    }
    SUBCASE("anchor outside the sweep") {
        const std::vector<double> c(m.size(), 0.1);
        CHECK_THROWS_AS(fit_cost_anchor(m, c, FitModel::LOG_COST, 100), DomainError);
    }
}

TEST_CASE("model names round-trip") {
    for (FitModel f : {FitModel::LOGLOG_GROWTH, FitModel::LOG_GROWTH, FitModel::LOGLOG_COST, FitModel::LOG_COST})
        CHECK(fit_model_from_string(to_string(f)) == f);
    CHECK(fit_model_from_string("log_growth") == FitModel::LOG_GROWTH);
    CHECK_THROWS(fit_model_from_string("cubic"));
}

TEST_CASE("HADP_A sum-rate follows the log law; TAS_A cost tracks its anchor") {
    const auto hadp = sparse_sweep(Scheme::HADP_A);
    std::vector<double> m, y;
    for (const auto& p : hadp.points) {
        m.push_back(p.m);
        y.push_back(p.r_sum_noeve.mean);
    }
    const auto fit = fit_growth(m, y, 16, FitModel::LOG_GROWTH);
    INFO("R^2 = " << fit.r_squared);
    CHECK(fit.r_squared > 0.95);

    const auto tas = sparse_sweep(Scheme::TAS_A);
    std::vector<double> tm, c;
    for (const auto& p : tas.points) {
        tm.push_back(p.m);
        c.push_back(p.cost.mean);
    }
    const auto q = fit_cost_anchor(tm, c, FitModel::LOGLOG_COST, tm.back());
    for (std::size_t i = 0; i < tm.size(); ++i) {
        if (tm[i] < 256) continue;
        const double model = evaluate(q, tm[i]);
        INFO("m = " << tm[i] << " C = " << c[i] << " Q = " << model);
        CHECK(std::abs(model - c[i]) <= 0.2 * c[i]);
    }
}

TEST_CASE("harmonic numbers") {
    CHECK(harmonic_number(1) == 1.0);
    CHECK(harmonic_number(4) == doctest::Approx(25.0 / 12.0));
    CHECK(harmonic_number(4096) == doctest::Approx(8.895).epsilon(1e-3));
    CHECK(harmonic_number(16384) - std::log(16384.0) == doctest::Approx(std::numbers::egamma).epsilon(1e-4));
}

TEST_CASE("Kolmogorov-Smirnov distance") {
    std::vector<double> one{0.0};
    CHECK(ks_statistic(one, normal_cdf) == doctest::Approx(0.5));
    std::vector<double> grid;
    for (int i = 0; i < 1000; ++i) grid.push_back((i + 0.5) / 1000.0);
    CHECK(ks_statistic(grid, [](double x) { return x; }) == doctest::Approx(0.0005));
}

TEST_CASE("maximum of exponentials") {
    SUBCASE("m = 4096 mean matches the harmonic number") {
        const auto g = gumbel_check(4096, 10000, 7);
        CHECK(g.sample_mean_max == doctest::Approx(harmonic_number(4096)).epsilon(0.01));
    }
    SUBCASE("m = 1 is far from Gumbel") {
        CHECK(gumbel_check(1, 10000, 7).ks_statistic > 0.1);
    }
    SUBCASE("m = 2^14 is close to Gumbel") {
        const auto g = gumbel_check(16384, 10000, 7);
        CHECK(g.ks_statistic < 0.03);
        CHECK(g.ks_statistic >= 0.0);
    }
    CHECK_THROWS_AS(gumbel_check(0, 1000, 1), DomainError);
    CHECK_THROWS_AS(gumbel_check(16, 10, 1), DomainError);
}

TEST_CASE("Gumbel KS distance does not grow with m (seed-averaged)") {
    const int seeds = 8;
    const std::vector<int> ms{16, 256, 4096};
    std::vector<std::vector<double>> ks(ms.size(), std::vector<double>(seeds));
    parallel_for(ms.size() * seeds, default_worker_count(), [&](std::size_t i) {
        const std::size_t a = i / seeds;
        const std::size_t s = i % seeds;
        ks[a][s] = gumbel_check(ms[a], 10000, 1000 + s).ks_statistic;
    });
    for (std::size_t a = 1; a < ms.size(); ++a) {
        const auto lo = mean_se(ks[a - 1]);
        const auto hi = mean_se(ks[a]);
        const double pooled = std::sqrt(lo.se * lo.se + hi.se * hi.se);
        INFO("m " << ms[a - 1] << " -> " << ms[a] << ": " << lo.mean << " -> " << hi.mean << " (se " << pooled << ")");
        CHECK(hi.mean <= lo.mean + 2.0 * pooled);
    }
}

TEST_CASE("shifted maximum averages to Euler's constant at m = 2^14") {
    // 10 independent blocks of 10^4 trials.
    const int blocks = 10;
    std::vector<double> means(blocks);
    parallel_for(blocks, default_worker_count(), [&](std::size_t b) {
        means[b] = gumbel_check(16384, 10000, 500 + b).sample_mean_shifted;
    });
    const auto e = mean_se(means);
    const double oracle = harmonic_number(16384) - std::log(16384.0);
    INFO("mean = " << e.mean << " se = " << e.se);
    CHECK(std::abs(oracle - std::numbers::egamma) < 0.02 * std::numbers::egamma);
    CHECK(std::abs(e.mean - std::numbers::egamma) < 0.02 * std::numbers::egamma);
}

TEST_CASE("normalized phase-aligned sums are Gaussian") {
    CHECK(clt_check(1, 10000, 3) < 0.02);
    CHECK(clt_check(256, 10000, 3) < 0.02);
    const auto s = clt_samples(256, 10000, 3);
    double var = 0.0;
    for (const auto& v : s) var += std::norm(v);
    var /= static_cast<double>(s.size());
    CHECK(var == doctest::Approx(1.0).epsilon(0.03));
    CHECK_THROWS_AS(clt_check(16, 10, 1), DomainError);
}

TEST_CASE("mean modulus of CN(0,1) entries") {
    const double v = lln_check(4096, 1000, 11);
    CHECK(v == doctest::Approx(std::sqrt(std::numbers::pi / 4.0)).epsilon(0.005));
}
