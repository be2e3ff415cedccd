#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mimome/metrics.hpp"
#include "oracles.hpp"

using namespace mimome;

namespace {

bool rel_close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

} // namespace

TEST_CASE("single-antenna single-user SINR") {
    auto cfg = SystemConfig::uniform(1, 1, 0, 1, 2.0, 1.0, 1.0, 1.0, 0.1);
    ChannelRealization ch;
    ch.H = CMatrix::Ones(1, 1);
    ch.G = CMatrix(1, 0);
    ch.beta = RVector::Ones(1);
    ch.theta = RVector(0);
    BeamformerSet bf{CMatrix::Ones(1, 1), CMatrix::Ones(1, 1), {2.0}};
    CHECK(sinr_k(0, ch, bf, cfg) == doctest::Approx(2.0));
    CHECK(esnr_k(0, ch, bf, cfg) == 0.0);
    CHECK_THROWS_AS(sinr_k(1, ch, bf, cfg), ConfigError);
    bf.W = CMatrix::Ones(2, 1);
    CHECK_THROWS_AS(sinr_k(0, ch, bf, cfg), ConfigError);
}

TEST_CASE("single eavesdropper ESNR") {
    auto cfg = SystemConfig::uniform(1, 1, 1, 1, 1.0, 1.0, 1.0, 1.0, 0.1);
    ChannelRealization ch;
    ch.H = CMatrix::Ones(1, 1);
    ch.G = CMatrix::Ones(1, 1);
    ch.beta = RVector::Ones(1);
    ch.theta = RVector::Constant(1, 0.1);
    const BeamformerSet bf{CMatrix::Ones(1, 1), CMatrix::Ones(1, 1), {1.0}};
    CHECK(esnr_k(0, ch, bf, cfg) == doctest::Approx(0.1));
}

TEST_CASE("zero-forcing removes interference from the SINR") {
    const auto cfg = SystemConfig::uniform(8, 4, 2, 4, 1.0, 1.0, 1.0, 1.0, 0.1);
    const auto ch = sample_realization(cfg, 17, 0);
    const auto bf = build_beamformers(ch.H, cfg, Scheme::HADP_B, 16);
    const auto rep = rate_report(ch, bf, cfg);
    for (int k = 0; k < cfg.K; ++k) {
        const cdouble g = ch.H.col(k).transpose() * bf.F * bf.W.col(k);
        const double clean = bf.powers[static_cast<std::size_t>(k)] * std::norm(g) / cfg.sigma2;
        CHECK(rep.interference[static_cast<std::size_t>(k)] < 1e-12 * clean);
        CHECK(rel_close(rep.sinr[static_cast<std::size_t>(k)], clean, 1e-12));
    }
}

TEST_CASE("rate formulas on hand-set SINR/ESNR") {
    RateReport r;
    r.sinr = {1.0};
    r.esnr = {0.0};
    finish_report(r, {1.0});
    CHECK(r.r_secrecy[0] == doctest::Approx(1.0));
    CHECK(r.r_noeve[0] == doctest::Approx(1.0));
    CHECK(r.leakage == doctest::Approx(0.0));
    CHECK(r.cost == doctest::Approx(0.0));

    r.sinr = {1.0, 3.0};
    r.esnr = {1.5, 3.0};
    finish_report(r, {1.0, 1.0});
    CHECK(r.r_sum == 0.0);
    CHECK(r.cost == 1.0);

    r.sinr = {0.0, 0.0};
    r.esnr = {0.2, 0.0};
    finish_report(r, {1.0, 1.0});
    CHECK(r.r_sum_noeve == 0.0);
    CHECK(r.cost == 0.0);
}

TEST_CASE("scalar-loop oracle agrees on small random instances") {
    std::mt19937_64 pick(31337);
    for (int inst = 0; inst < 100; ++inst) {
        const int M = 1 + static_cast<int>(pick() % 4);
        const int K = 1 + static_cast<int>(pick() % std::min(2, M));
        const int J = static_cast<int>(pick() % 3);
        const int L = K + static_cast<int>(pick() % (M - K + 1));
        auto cfg = SystemConfig::uniform(M, K, J, L, 0.5 + (pick() % 100) / 25.0, 0.3 + (pick() % 10) / 10.0,
                                         0.2 + (pick() % 10) / 5.0, 1.0, 0.1);
        for (auto& b : cfg.betas) b = 0.1 + (pick() % 100) / 50.0;
        for (auto& t : cfg.thetas) t = (pick() % 100) / 100.0;
        for (auto& q : cfg.weights) q = 0.5 + (pick() % 10) / 10.0;
        const Scheme scheme = static_cast<Scheme>(pick() % 4);
        const std::optional<int> bits = scheme == Scheme::HADP_B ? std::optional<int>(2) : std::nullopt;
        ChannelRealization ch;
        BeamformerSet bf;
        for (std::uint64_t attempt = 0;; ++attempt) {
            ch = sample_realization(cfg, 8, static_cast<std::uint64_t>(inst), attempt);
            try {
                bf = build_beamformers(ch.H, cfg, scheme, bits);
                break;
            } catch (const SingularChannelError&) {
            }
        }

        const auto want = oracle::rates(ch, bf, cfg);
        const auto got = rate_report(ch, bf, cfg);
        for (int k = 0; k < K; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            CHECK(rel_close(sinr_k(k, ch, bf, cfg), want.sinr[ku], 1e-12));
            CHECK(rel_close(esnr_k(k, ch, bf, cfg), want.esnr[ku], 1e-12));
            CHECK(rel_close(got.sinr[ku], want.sinr[ku], 1e-12));
            CHECK(rel_close(got.esnr[ku], want.esnr[ku], 1e-12));
            CHECK(rel_close(got.r_secrecy[ku], want.rs[ku], 1e-12));
            CHECK(rel_close(got.r_noeve[ku], want.rm[ku], 1e-12));
            CHECK(got.r_secrecy[ku] <= got.r_noeve[ku]);
        }
        CHECK(rel_close(got.r_sum, want.r_sum, 1e-12));
        CHECK(rel_close(got.r_sum_noeve, want.r_sum_noeve, 1e-12));
        CHECK(rel_close(got.leakage, want.leakage, 1e-12));
        CHECK(rel_close(got.cost, want.cost, 1e-12));
        CHECK(got.cost >= 0.0);
        CHECK(got.cost <= 1.0);
    }
}

TEST_CASE("monotone in ESNR and invariant to weight scaling") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 4.0);
    for (int rep = 0; rep < 200; ++rep) {
        RateReport a;
        a.sinr = {u(rng), u(rng), u(rng)};
        a.esnr = {u(rng), u(rng), u(rng)};
        const std::vector<double> q = {u(rng) + 0.1, u(rng) + 0.1, u(rng) + 0.1};
        finish_report(a, q);

        RateReport b = a;
        b.esnr[rep % 3] += u(rng);
        finish_report(b, q);
        CHECK(b.r_sum <= a.r_sum);
        CHECK(b.cost >= a.cost);

        RateReport c = a;
        std::vector<double> q3 = q;
        for (double& w : q3) w *= 3.7;
        finish_report(c, q3);
        CHECK(c.cost == doctest::Approx(a.cost).epsilon(1e-12));
        CHECK(0.0 <= a.r_sum);
        CHECK(a.r_sum <= a.r_sum_noeve);
    }
}

TEST_CASE("phase-matched eavesdropper power averages to J mean(theta)") {
    auto cfg = SystemConfig::uniform(64, 1, 16, 1, 1.0, 1.0, 1.0, 1.0, 0.1);
    double sum = 0.0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        const auto ch = sample_realization(cfg, 12, static_cast<std::uint64_t>(t));
        const auto bf = build_beamformers(ch.H, cfg, Scheme::HADP_A);
        sum += rate_report(ch, bf, cfg).eve_power[0];
    }
    CHECK(sum / trials == doctest::Approx(1.6).epsilon(0.03));
}
