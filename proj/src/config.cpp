#include "mimome/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace mimome {

SystemConfig preset_network(std::string_view name) {
    if (name == "sparse") return SystemConfig::uniform(16, 16, 2, 16, 1.0, 1.0, 1.0, 1.0, 0.1);
    if (name == "dense") return SystemConfig::uniform(16, 16, 16, 16, 1.0, 1.0, 1.0, 1.0, 0.1);
    throw ConfigError("unknown preset '" + std::string(name) + "'");
}

bool is_preset(std::string_view name) { return name == "sparse" || name == "dense"; }

std::vector<int> expand_pow2(std::string_view shorthand) {
    constexpr std::string_view prefix = "pow2:";
    const auto bad = [&] { return ConfigError("bad pow2 shorthand '" + std::string(shorthand) + "'"); };
    if (!shorthand.starts_with(prefix)) throw bad();
    const std::string_view body = shorthand.substr(prefix.size());
    const auto dots = body.find("..");
    if (dots == std::string_view::npos) throw bad();
    int lo = 0;
    int hi = 0;
    const auto parse = [&](std::string_view s, int& out) {
        const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
        if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw bad();
    };
    parse(body.substr(0, dots), lo);
    parse(body.substr(dots + 2), hi);
    if (lo < 0 || hi < lo || hi > 30) throw bad();
    std::vector<int> out;
    for (int e = lo; e <= hi; ++e) out.push_back(1 << e);
    return out;
}

DerivedSnr derived_snr(const SystemConfig& cfg) {
    DerivedSnr d;
    for (double b : cfg.betas) d.legitimate_db.push_back(10.0 * std::log10(b * cfg.total_power / cfg.sigma2));
    for (double t : cfg.thetas) d.eavesdropper_db.push_back(10.0 * std::log10(t * cfg.total_power / cfg.rho2));
    return d;
}

namespace {

const std::set<std::string> kKnownKeys = {
    "scenario", "preset", "K", "J", "L", "m_values", "total_power", "sigma2", "rho2",
    "beta", "theta", "weights", "scheme", "quant_bits", "trials", "seed", "cost_estimator"};

int line_of(const YAML::Node& n) {
    const int line = n.Mark().line;
    return line >= 0 ? line + 1 : 0;
}

class Reader {
public:
    explicit Reader(YAML::Node root) : root_(std::move(root)) {}

    bool has(const std::string& key) const { return static_cast<bool>(root_[key]); }

    YAML::Node node(const std::string& key) const {
        const YAML::Node n = root_[key];
        if (!n) throw ParseError(key, line_of(root_), "missing required key");
        return n;
    }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        const YAML::Node n = root_[key];
        throw ParseError(key, n ? line_of(n) : line_of(root_), what);
    }

    template <class T>
    T scalar(const std::string& key, const char* type_name) const {
        const YAML::Node n = node(key);
        if (!n.IsScalar()) fail(key, std::string("expected ") + type_name);
        try {
            return n.as<T>();
        } catch (const YAML::Exception&) {
            fail(key, std::string("expected ") + type_name + ", got '" + n.Scalar() + "'");
        }
    }

    template <class T>
    T scalar_or(const std::string& key, const char* type_name, T fallback) const {
        return has(key) ? scalar<T>(key, type_name) : fallback;
    }

    /// Scalar broadcast to `n` entries, or a list of exactly `n` entries.
    std::vector<double> broadcast(const std::string& key, int n) const {
        const YAML::Node node_ = node(key);
        std::vector<double> out;
        try {
            if (node_.IsScalar()) {
                out.assign(static_cast<std::size_t>(n), node_.as<double>());
            } else if (node_.IsSequence()) {
                for (const auto& item : node_) out.push_back(item.as<double>());
                if (out.size() != static_cast<std::size_t>(n))
                    fail(key, "list has " + std::to_string(out.size()) + " entries, expected " + std::to_string(n));
            } else {
                fail(key, "expected number or list of numbers");
            }
        } catch (const YAML::Exception&) {
            fail(key, "expected number or list of numbers");
        }
        for (double v : out)
            if (!std::isfinite(v) || v < 0.0) fail(key, "entries must be finite and non-negative");
        return out;
    }

    template <class T>
    std::vector<T> scalar_or_list(const std::string& key, const char* type_name) const {
        const YAML::Node n = node(key);
        std::vector<T> out;
        try {
            if (n.IsScalar()) {
                out.push_back(n.as<T>());
            } else if (n.IsSequence() && n.size() > 0) {
                for (const auto& item : n) out.push_back(item.as<T>());
            } else {
                fail(key, std::string("expected ") + type_name + " or non-empty list");
            }
        } catch (const YAML::Exception&) {
            fail(key, std::string("expected ") + type_name + " or list");
        }
        return out;
    }

    const YAML::Node& root() const { return root_; }

private:
    YAML::Node root_;
};

std::vector<int> read_m_values(const Reader& r) {
    const YAML::Node n = r.node("m_values");
    std::vector<int> ms;
    try {
        if (n.IsScalar()) {
            ms = expand_pow2(n.Scalar());
        } else if (n.IsSequence()) {
            for (const auto& item : n) ms.push_back(item.as<int>());
        } else {
            r.fail("m_values", "expected list or pow2:a..b");
        }
    } catch (const YAML::Exception&) {
        r.fail("m_values", "expected list of integers or pow2:a..b");
    } catch (const ConfigError& e) {
        r.fail("m_values", e.what());
    }
    for (std::size_t i = 0; i < ms.size(); ++i) {
        if (ms[i] < 1) r.fail("m_values", "entries must be positive");
        if (i > 0 && ms[i] <= ms[i - 1]) r.fail("m_values", "entries must be strictly increasing");
    }
    return ms;
}

std::vector<SweepSpec> build_specs(const Reader& r) {
    for (const auto& kv : r.root()) {
        const std::string key = kv.first.as<std::string>();
        if (!kKnownKeys.contains(key)) throw ParseError(key, line_of(kv.first), "unknown key");
    }

    SweepSpec proto;
    SystemConfig& cfg = proto.base;
    std::string preset;
    if (r.has("preset")) {
        preset = r.scalar<std::string>("preset", "string");
        if (!is_preset(preset)) r.fail("preset", "unknown preset '" + preset + "' (sparse, dense)");
        cfg = preset_network(preset);
    }
    const bool p = !preset.empty();

    proto.scenario = p ? r.scalar_or<std::string>("scenario", "string", preset)
                       : r.scalar<std::string>("scenario", "string");
    cfg.K = p ? r.scalar_or<int>("K", "integer", cfg.K) : r.scalar<int>("K", "integer");
    cfg.J = p ? r.scalar_or<int>("J", "integer", cfg.J) : r.scalar<int>("J", "integer");
    cfg.L = p ? r.scalar_or<int>("L", "integer", cfg.L) : r.scalar<int>("L", "integer");
    if (cfg.K < 1) r.fail("K", "must be positive");
    if (cfg.J < 0) r.fail("J", "must be non-negative");
    if (cfg.L < 1) r.fail("L", "must be positive");

    cfg.total_power = p ? r.scalar_or<double>("total_power", "number", cfg.total_power)
                        : r.scalar<double>("total_power", "number");
    cfg.sigma2 = p ? r.scalar_or<double>("sigma2", "number", cfg.sigma2) : r.scalar<double>("sigma2", "number");
    cfg.rho2 = p ? r.scalar_or<double>("rho2", "number", cfg.rho2) : r.scalar<double>("rho2", "number");
    if (!(cfg.total_power >= 0.0) || !std::isfinite(cfg.total_power)) r.fail("total_power", "must be non-negative");
    if (!(cfg.sigma2 > 0.0) || !std::isfinite(cfg.sigma2)) r.fail("sigma2", "must be positive");
    if (!(cfg.rho2 > 0.0) || !std::isfinite(cfg.rho2)) r.fail("rho2", "must be positive");

    if (r.has("beta") || !p) cfg.betas = r.broadcast("beta", cfg.K);
    else cfg.betas.assign(static_cast<std::size_t>(cfg.K), cfg.betas.front());
    if (r.has("theta") || !p) cfg.thetas = r.broadcast("theta", cfg.J);
    else cfg.thetas.assign(static_cast<std::size_t>(cfg.J), 0.1);
    cfg.weights = r.has("weights") ? r.broadcast("weights", cfg.K)
                                   : std::vector<double>(static_cast<std::size_t>(cfg.K), 1.0);
    bool any_weight = false;
    for (double q : cfg.weights) any_weight = any_weight || q > 0.0;
    if (!any_weight) r.fail("weights", "must not all be zero");

    proto.m_values = read_m_values(r);
    if (!proto.m_values.empty() && proto.m_values.front() < cfg.L)
        r.fail("m_values", "every M must be at least L=" + std::to_string(cfg.L));
    proto.trials = r.scalar<int>("trials", "integer");
    if (proto.trials < 1) r.fail("trials", "must be positive");
    proto.master_seed = r.scalar<std::uint64_t>("seed", "non-negative integer");
    if (r.has("cost_estimator")) {
        try {
            proto.cost_estimator = cost_estimator_from_string(r.scalar<std::string>("cost_estimator", "string"));
        } catch (const ConfigError& e) {
            r.fail("cost_estimator", e.what());
        }
    }

    std::vector<Scheme> schemes;
    for (const auto& name : r.scalar_or_list<std::string>("scheme", "scheme name")) {
        try {
            schemes.push_back(scheme_from_string(name));
        } catch (const ConfigError& e) {
            r.fail("scheme", e.what());
        }
    }
    std::vector<int> bits;
    if (r.has("quant_bits")) {
        bits = r.scalar_or_list<int>("quant_bits", "integer");
        for (int b : bits)
            if (b < 1) r.fail("quant_bits", "must be positive");
    }
    const bool has_hadp_b = std::find(schemes.begin(), schemes.end(), Scheme::HADP_B) != schemes.end();
    if (has_hadp_b && bits.empty()) r.fail("scheme", "HADP_B requires quant_bits");
    if (!has_hadp_b && !bits.empty()) r.fail("quant_bits", "only valid with scheme HADP_B");

    std::vector<SweepSpec> specs;
    for (Scheme s : schemes) {
        SweepSpec spec = proto;
        spec.scheme = s;
        if (s == Scheme::HADP_B) {
            for (int b : bits) {
                spec.quant_bits = b;
                specs.push_back(spec);
            }
        } else {
            specs.push_back(spec);
        }
    }
    for (const SweepSpec& spec : specs) {
        try {
            spec.validate();
        } catch (const ConfigError& e) {
            throw ParseError("scheme", line_of(r.node("scheme")), e.what());
        }
    }
    return specs;
}

} // namespace

std::vector<SweepSpec> parse_config_text(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ParseError("<document>", e.mark.line + 1, e.msg);
    }
    if (!root.IsMap()) throw ParseError("<document>", 1, "top level must be a mapping");
    // An emitted manifest carries the resolved configuration under "sweep".
    if (root["sweep"] && root["sweep"].IsMap()) root = root["sweep"];
    return build_specs(Reader(root));
}

std::vector<SweepSpec> parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

} // namespace mimome
