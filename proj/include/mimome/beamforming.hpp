#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "mimome/channel.hpp"
#include "mimome/types.hpp"

namespace mimome {

/// Analog matrix F (M x L), digital matrix W (L x K) and per-user powers.
struct BeamformerSet {
    CMatrix F;
    CMatrix W;
    std::vector<double> powers;
};

/// Antenna indices are zero-based throughout.
struct SelectionResult {
    std::vector<std::size_t> antennas;      // sorted ascending, distinct
    std::vector<std::size_t> user_antenna;  // antenna serving user k (per-user protocols only)
};

enum class Scheme { TAS_A, TAS_B, HADP_A, HADP_B };

std::string_view to_string(Scheme s);
Scheme scheme_from_string(std::string_view name);

// ---- antenna selection ---------------------------------------------------

/// Sequential strongest-available selection: user 0 takes its strongest
/// antenna; every later user takes its strongest antenna not already taken.
SelectionResult select_antennas_protocol1(const CMatrix& H);

/// Greedy forward selection of L antennas. Each step adds the antenna that
/// maximizes the weighted sum-rate without eavesdroppers under MRT over the
/// enlarged set and uniform power; ties go to the smaller index.
SelectionResult stepwise_tas(const CMatrix& H, int L, const SystemConfig& cfg);

/// Weighted no-eavesdropper sum-rate of MRT over the rows `antennas` of H
/// with uniform power. This is the objective stepwise_tas climbs.
double mrt_noeve_sum_rate(const CMatrix& H, std::span<const std::size_t> antennas,
                          const SystemConfig& cfg);

/// Switching network: column l is the basis vector of antennas[l].
CMatrix analog_selection_matrix(const SelectionResult& sel, int M);

// ---- digital precoders ---------------------------------------------------

/// Per-user matched filter on the antenna assigned by protocol 1. Column k
/// is non-zero only in the RF chain that drives user k's antenna.
CMatrix digital_mrt_selected(const CMatrix& H, const SelectionResult& sel);

/// Column-normalized conjugate of the effective channel.
CMatrix mrt_effective(const CMatrix& H_eff);

/// Zero-forcing on the effective channel, columns scaled to unit norm.
/// Throws SingularChannelError when cond(H_eff) exceeds kZfMaxCondition.
CMatrix zf_effective(const CMatrix& H_eff);
inline constexpr double kZfMaxCondition = 1e10;

// ---- phase-shifter networks ----------------------------------------------

/// f_{k,m} = conj(h_{k,m}) / (sqrt(M) |h_{k,m}|).
CMatrix analog_phase_match(const CMatrix& H);

/// Snap every entry's phase to the nearest point of the 2^bits grid anchored
/// at 0, keeping its modulus.
CMatrix quantize_phases(const CMatrix& F, int bits);

std::vector<double> power_uniform(int K, double P);

// ---- scheme dispatch ------------------------------------------------------

/// Builds the beamformers of one scheme from the legitimate channel only.
/// TAS_A, HADP_A and HADP_B drive K RF chains; TAS_B drives L.
BeamformerSet build_beamformers(const CMatrix& H, const SystemConfig& cfg, Scheme scheme,
                                std::optional<int> quant_bits = std::nullopt);

} // namespace mimome
