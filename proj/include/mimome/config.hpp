#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mimome/harness.hpp"

namespace mimome {

/// Network presets: "sparse" (K=16, J=2) and "dense" (K=16, J=16), both with
/// L=K, P=sigma2=rho2=1, beta=1, theta=0.1 and unit weights.
SystemConfig preset_network(std::string_view name);
bool is_preset(std::string_view name);

/// Expand "pow2:a..b" into {2^a, ..., 2^b}.
std::vector<int> expand_pow2(std::string_view shorthand);

/// Per-terminal receive SNRs in dB: beta_k P / sigma2 and theta_j P / rho2.
struct DerivedSnr {
    std::vector<double> legitimate_db;
    std::vector<double> eavesdropper_db;
};
DerivedSnr derived_snr(const SystemConfig& cfg);

/// Parse a YAML configuration document (or an emitted run manifest, whose
/// "sweep" section is a fully resolved configuration). Scheme and quant_bits
/// may be lists; one SweepSpec is produced per combination. Throws ParseError.
std::vector<SweepSpec> parse_config_text(const std::string& text);
std::vector<SweepSpec> parse_config(const std::filesystem::path& path);

} // namespace mimome
