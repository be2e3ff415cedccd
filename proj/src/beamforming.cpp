#include "mimome/beamforming.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace mimome {

std::string_view to_string(Scheme s) {
    switch (s) {
    case Scheme::TAS_A: return "TAS_A";
    case Scheme::TAS_B: return "TAS_B";
    case Scheme::HADP_A: return "HADP_A";
    case Scheme::HADP_B: return "HADP_B";
    }
    return "?";
}

Scheme scheme_from_string(std::string_view name) {
    for (Scheme s : {Scheme::TAS_A, Scheme::TAS_B, Scheme::HADP_A, Scheme::HADP_B})
        if (to_string(s) == name) return s;
    throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

SelectionResult select_antennas_protocol1(const CMatrix& H) {
    const Eigen::Index M = H.rows();
    const Eigen::Index K = H.cols();
    if (M < K)
        throw InfeasibleSelectionError("protocol 1 needs M >= K (M=" + std::to_string(M) +
                                       ", K=" + std::to_string(K) + ")");

    std::vector<bool> taken(static_cast<std::size_t>(M), false);
    std::vector<std::size_t> order(static_cast<std::size_t>(M));
    SelectionResult sel;
    sel.user_antenna.reserve(static_cast<std::size_t>(K));

    for (Eigen::Index k = 0; k < K; ++k) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return std::norm(H(static_cast<Eigen::Index>(a), k)) >
                   std::norm(H(static_cast<Eigen::Index>(b), k));
        });
        // Walk down user k's ranking until an untaken antenna appears.
        for (std::size_t a : order) {
            if (!taken[a]) {
                taken[a] = true;
                sel.user_antenna.push_back(a);
                break;
            }
        }
    }
    sel.antennas = sel.user_antenna;
    std::sort(sel.antennas.begin(), sel.antennas.end());
    return sel;
}

namespace {

// Gram(k, i) = sum over selected antennas s of H(s, k) conj(H(s, i)); it
// holds every inner product MRT needs: h_k^T F w_i = Gram(k, i)/sqrt(Gram(i, i)).
double mrt_rate_from_gram(const CMatrix& gram, const SystemConfig& cfg) {
    const Eigen::Index K = gram.rows();
    const double pk = cfg.total_power / static_cast<double>(K);
    double sum = 0.0;
    for (Eigen::Index k = 0; k < K; ++k) {
        const double beta = cfg.betas[static_cast<std::size_t>(k)];
        double interference = 0.0;
        for (Eigen::Index i = 0; i < K; ++i) {
            if (i == k) continue;
            interference += pk * std::norm(gram(k, i)) / gram(i, i).real();
        }
        const double sinr = pk * beta * gram(k, k).real() / (cfg.sigma2 + beta * interference);
        sum += cfg.weights[static_cast<std::size_t>(k)] * std::log2(1.0 + sinr);
    }
    return sum;
}

void add_antenna_to_gram(CMatrix& gram, const CMatrix& H, Eigen::Index a) {
    const auto row = H.row(a);
    gram.noalias() += row.transpose() * row.conjugate();
}

bool gram_degenerate(const CMatrix& gram) {
    for (Eigen::Index i = 0; i < gram.rows(); ++i)
        if (!(gram(i, i).real() > 0.0)) return true;
    return false;
}

} // namespace

double mrt_noeve_sum_rate(const CMatrix& H, std::span<const std::size_t> antennas,
                          const SystemConfig& cfg) {
    CMatrix gram = CMatrix::Zero(H.cols(), H.cols());
    for (std::size_t a : antennas) add_antenna_to_gram(gram, H, static_cast<Eigen::Index>(a));
    if (gram_degenerate(gram))
        throw DegenerateChannelError("MRT over selected antennas: zero effective channel");
    return mrt_rate_from_gram(gram, cfg);
}

SelectionResult stepwise_tas(const CMatrix& H, int L, const SystemConfig& cfg) {
    const Eigen::Index M = H.rows();
    const Eigen::Index K = H.cols();
    if (L < 1 || L > M)
        throw InfeasibleSelectionError("stepwise TAS needs 1 <= L <= M (L=" + std::to_string(L) +
                                       ", M=" + std::to_string(M) + ")");
    if (static_cast<Eigen::Index>(cfg.betas.size()) != K ||
        static_cast<Eigen::Index>(cfg.weights.size()) != K)
        throw ConfigError("stepwise TAS: config user count does not match H");

    std::vector<bool> chosen(static_cast<std::size_t>(M), false);
    CMatrix gram = CMatrix::Zero(K, K);
    CMatrix trial(K, K);
    SelectionResult sel;

    for (int step = 0; step < L; ++step) {
        Eigen::Index best = -1;
        double best_rate = -1.0;
        for (Eigen::Index a = 0; a < M; ++a) {
            if (chosen[static_cast<std::size_t>(a)]) continue;
            trial = gram;
            add_antenna_to_gram(trial, H, a);
            if (gram_degenerate(trial)) continue;
            const double rate = mrt_rate_from_gram(trial, cfg);
            if (rate > best_rate) {
                best_rate = rate;
                best = a;
            }
        }
        if (best < 0)
            throw DegenerateChannelError("stepwise TAS: every candidate leaves a zero effective channel");
        chosen[static_cast<std::size_t>(best)] = true;
        add_antenna_to_gram(gram, H, best);
        sel.antennas.push_back(static_cast<std::size_t>(best));
    }
    std::sort(sel.antennas.begin(), sel.antennas.end());
    return sel;
}

CMatrix analog_selection_matrix(const SelectionResult& sel, int M) {
    CMatrix F = CMatrix::Zero(M, static_cast<Eigen::Index>(sel.antennas.size()));
    for (std::size_t l = 0; l < sel.antennas.size(); ++l) {
        const std::size_t a = sel.antennas[l];
        if (a >= static_cast<std::size_t>(M))
            throw DomainError("antenna index " + std::to_string(a) + " out of range for M=" +
                              std::to_string(M));
        F(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(l)) = 1.0;
    }
    return F;
}

CMatrix digital_mrt_selected(const CMatrix& H, const SelectionResult& sel) {
    const Eigen::Index K = H.cols();
    if (static_cast<Eigen::Index>(sel.user_antenna.size()) != K)
        throw ConfigError("digital_mrt_selected: selection must assign one antenna per user");
    const auto L = static_cast<Eigen::Index>(sel.antennas.size());
    CMatrix W = CMatrix::Zero(L, K);
    for (Eigen::Index k = 0; k < K; ++k) {
        const std::size_t a = sel.user_antenna[static_cast<std::size_t>(k)];
        const auto it = std::lower_bound(sel.antennas.begin(), sel.antennas.end(), a);
        if (it == sel.antennas.end() || *it != a)
            throw ConfigError("digital_mrt_selected: user antenna not among selected antennas");
        const cdouble h = H(static_cast<Eigen::Index>(a), k);
        const double mag = std::abs(h);
        if (mag == 0.0) throw DegenerateChannelError("digital_mrt_selected: zero channel coefficient");
        W(static_cast<Eigen::Index>(it - sel.antennas.begin()), k) = std::conj(h) / mag;
    }
    return W;
}

CMatrix mrt_effective(const CMatrix& H_eff) {
    CMatrix W = H_eff.conjugate();
    for (Eigen::Index k = 0; k < W.cols(); ++k) {
        const double n = W.col(k).norm();
        if (n == 0.0) throw DegenerateChannelError("mrt_effective: zero effective channel column");
        W.col(k) /= n;
    }
    return W;
}

CMatrix zf_effective(const CMatrix& H_eff) {
    const Eigen::Index L = H_eff.rows();
    const Eigen::Index K = H_eff.cols();
    if (L < K) throw SingularChannelError("zf_effective: needs at least as many RF chains as users");

    const Eigen::JacobiSVD<CMatrix> svd(H_eff);
    const auto& s = svd.singularValues();
    const double smax = s(0);
    const double smin = s(s.size() - 1);
    if (!(smin > 0.0) || smax / smin > kZfMaxCondition)
        throw SingularChannelError("zf_effective: effective channel condition number exceeds 1e10");

    const CMatrix gram = H_eff.transpose() * H_eff.conjugate();
    CMatrix W = H_eff.conjugate() * gram.fullPivLu().inverse();
    for (Eigen::Index k = 0; k < K; ++k) W.col(k) /= W.col(k).norm();
    return W;
}

CMatrix analog_phase_match(const CMatrix& H) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(H.rows()));
    CMatrix F(H.rows(), H.cols());
    for (Eigen::Index k = 0; k < H.cols(); ++k) {
        for (Eigen::Index m = 0; m < H.rows(); ++m) {
            const cdouble h = H(m, k);
            const double mag = std::abs(h);
            if (mag == 0.0) throw DegenerateChannelError("analog_phase_match: zero channel coefficient");
            F(m, k) = std::conj(h) * (scale / mag);
        }
    }
    return F;
}

CMatrix quantize_phases(const CMatrix& F, int bits) {
    if (bits <= 0) throw DomainError("quantize_phases: bits must be positive");
    if (bits > 48) throw DomainError("quantize_phases: at most 48 bits supported");
    const double levels = std::ldexp(1.0, bits);
    const double step = 2.0 * std::numbers::pi / levels;
    CMatrix Q(F.rows(), F.cols());
    for (Eigen::Index c = 0; c < F.cols(); ++c) {
        for (Eigen::Index r = 0; r < F.rows(); ++r) {
            const double mag = std::abs(F(r, c));
            if (mag == 0.0) throw DegenerateChannelError("quantize_phases: zero entry has no phase");
            double n = std::round(std::arg(F(r, c)) / step);
            n = std::fmod(n, levels);
            if (n < 0.0) n += levels;
            Q(r, c) = std::polar(mag, n * step);
        }
    }
    return Q;
}

std::vector<double> power_uniform(int K, double P) {
    if (K < 1) throw DomainError("power_uniform: K must be positive");
    if (!(P >= 0.0)) throw DomainError("power_uniform: P must be non-negative");
    return std::vector<double>(static_cast<std::size_t>(K), P / static_cast<double>(K));
}

BeamformerSet build_beamformers(const CMatrix& H, const SystemConfig& cfg, Scheme scheme,
                                std::optional<int> quant_bits) {
    cfg.validate();
    if (H.rows() != cfg.M || H.cols() != cfg.K)
        throw ConfigError("build_beamformers: H is not M x K");
    const bool per_user_chains = scheme != Scheme::TAS_B;
    if (per_user_chains && cfg.L < cfg.K)
        throw ConfigError(std::string(to_string(scheme)) + " needs L >= K RF chains");
    if (scheme == Scheme::HADP_B && !quant_bits)
        throw ConfigError("HADP_B needs quant_bits");

    BeamformerSet bf;
    switch (scheme) {
    case Scheme::TAS_A: {
        const SelectionResult sel = select_antennas_protocol1(H);
        bf.F = analog_selection_matrix(sel, cfg.M);
        bf.W = digital_mrt_selected(H, sel);
        break;
    }
    case Scheme::TAS_B: {
        const SelectionResult sel = stepwise_tas(H, cfg.L, cfg);
        bf.F = analog_selection_matrix(sel, cfg.M);
        bf.W = mrt_effective(bf.F.transpose() * H);
        break;
    }
    case Scheme::HADP_A:
        bf.F = analog_phase_match(H);
        bf.W = CMatrix::Identity(cfg.K, cfg.K);
        break;
    case Scheme::HADP_B:
        bf.F = quantize_phases(analog_phase_match(H), *quant_bits);
        bf.W = zf_effective(bf.F.transpose() * H);
        break;
    }
    bf.powers = power_uniform(cfg.K, cfg.total_power);
    return bf;
}

} // namespace mimome
