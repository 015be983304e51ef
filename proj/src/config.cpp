#include "stsa/config.hpp"
#include "stsa/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace stsa {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

Variant variant_from(const std::string& s) {
    if (s == "phase_blind") return Variant::PhaseBlind;
    if (s == "known_phase") return Variant::KnownPhase;
    if (s == "uncertain_phase") return Variant::UncertainPhase;
    throw ConfigError("unknown variant '" + s + "' (expected phase_blind, known_phase, or uncertain_phase)");
}

ParamMode param_mode_from(const std::string& s) {
    if (s == "auditory_schedule") return ParamMode::AuditorySchedule;
    if (s == "fixed") return ParamMode::Fixed;
    throw ConfigError("unknown param_mode '" + s + "' (expected auditory_schedule or fixed)");
}

PhaseSource phase_source_from(const std::string& s) {
    if (s == "noisy") return PhaseSource::Noisy;
    if (s == "oracle_file") return PhaseSource::OracleFile;
    if (s == "stftpi") return PhaseSource::Stftpi;
    throw ConfigError("unknown phase_source '" + s + "' (expected noisy, oracle_file, or stftpi)");
}

} // namespace

std::string to_string(Variant v) {
    switch (v) {
        case Variant::PhaseBlind: return "phase_blind";
        case Variant::KnownPhase: return "known_phase";
        case Variant::UncertainPhase: return "uncertain_phase";
    }
    throw ConfigError("invalid variant value");
}

std::string to_string(ParamMode m) {
    return m == ParamMode::AuditorySchedule ? "auditory_schedule" : "fixed";
}

std::string to_string(PhaseSource s) {
    switch (s) {
        case PhaseSource::Noisy: return "noisy";
        case PhaseSource::OracleFile: return "oracle_file";
        case PhaseSource::Stftpi: return "stftpi";
    }
    throw ConfigError("invalid phase_source value");
}

double EnhancerConfig::alpha_at(double f_hz) const {
    if (param_mode == ParamMode::Fixed) return fixed_alpha;
    return alpha_schedule(f_hz, geom.sample_rate, schedule);
}

double EnhancerConfig::beta_at(double f_hz) const {
    if (param_mode == ParamMode::Fixed) return fixed_beta;
    return beta_schedule(f_hz, geom.sample_rate, schedule);
}

void EnhancerConfig::validate() const {
    geom.validate();
    if (!(mu > 0.0)) throw ConfigError("config: mu must be positive");
    if (tau_voiced < 0.0) throw ConfigError("config: tau_voiced must be >= 0");
    if (!(gain_floor_db < 0.0)) throw ConfigError("config: gain_floor_db must be negative");
    if (quadrature_points < 64) throw ConfigError("config: quadrature_points must be >= 64");
    if (!(tracker.spp_smoothing > 0.0 && tracker.spp_smoothing < 1.0))
        throw ConfigError("config: tracker spp_smoothing must lie in (0, 1)");
    if (!(tracker.psd_smoothing > 0.0 && tracker.psd_smoothing < 1.0))
        throw ConfigError("config: tracker psd_smoothing must lie in (0, 1)");
    if (!(tracker.spp_clamp > 0.0 && tracker.spp_clamp <= 1.0))
        throw ConfigError("config: tracker spp_clamp must lie in (0, 1]");
    if (!(tracker.psd_floor > 0.0)) throw ConfigError("config: tracker psd_floor must be positive");
    if (!(snr.dd_smoothing > 0.0 && snr.dd_smoothing < 1.0))
        throw ConfigError("config: dd_smoothing must lie in (0, 1)");
    if (!(snr.xi_min > 0.0)) throw ConfigError("config: xi_min must be positive");
    // Gamma-argument constraint across the whole bin range
    for (std::size_t k = 0; k < geom.bins(); ++k) {
        const double f = geom.bin_hz(k);
        const double a = alpha_at(f), b = beta_at(f);
        if (!(2.0 * mu - 2.0 * a > 0.0) || !(2.0 * mu + b - 2.0 * a > 0.0)) {
            std::ostringstream msg;
            msg << "config: Gamma-argument constraint violated at " << f
                << " Hz (mu=" << mu << ", alpha=" << a << ", beta=" << b
                << "): requires 2*mu - 2*alpha > 0 and 2*mu + beta - 2*alpha > 0";
            throw ConfigError(msg.str());
        }
        if (!(b > 0.0)) throw ConfigError("config: beta must be positive at every bin");
    }
    if (variant == Variant::UncertainPhase && phase_source == PhaseSource::Noisy)
        throw ConfigError("config: uncertain_phase needs a phase estimate (phase_source stftpi or oracle_file)");
    if (variant == Variant::KnownPhase && phase_source == PhaseSource::Noisy)
        throw ConfigError("config: known_phase needs a phase estimate (phase_source stftpi or oracle_file)");
}

std::string EnhancerConfig::to_json() const {
    ordered_json j;
    j["geometry"] = {{"sample_rate", geom.sample_rate},
                     {"window_len", geom.window_len},
                     {"hop", geom.hop},
                     {"fft_len", geom.fft_len},
                     {"window", "hann"}};
    j["variant"] = to_string(variant);
    j["param_mode"] = to_string(param_mode);
    j["schedule"] = {{"alpha_low", schedule.alpha_low}, {"alpha_high", schedule.alpha_high},
                     {"beta_low", schedule.beta_low},   {"beta_high", schedule.beta_high},
                     {"q", schedule.q},                 {"l", schedule.l}};
    j["fixed_alpha"] = fixed_alpha;
    j["fixed_beta"] = fixed_beta;
    j["mu"] = mu;
    j["tau_voiced"] = tau_voiced;
    j["gain_floor_db"] = gain_floor_db;
    j["tracker"] = {{"prior_snr_db", tracker.prior_snr_db},
                    {"spp_smoothing", tracker.spp_smoothing},
                    {"psd_smoothing", tracker.psd_smoothing},
                    {"spp_clamp", tracker.spp_clamp},
                    {"psd_floor", tracker.psd_floor}};
    j["snr"] = {{"dd_smoothing", snr.dd_smoothing}, {"xi_min", snr.xi_min}};
    j["phase_source"] = to_string(phase_source);
    j["quadrature_points"] = quadrature_points;
    j["seed"] = seed;
    return j.dump(2);
}

EnhancerConfig EnhancerConfig::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: JSON parse error: ") + e.what());
    }
    EnhancerConfig c;
    try {
        if (j.contains("geometry")) {
            const auto& g = j.at("geometry");
            if (g.contains("sample_rate")) c.geom.sample_rate = g.at("sample_rate").get<double>();
            if (g.contains("window_len")) c.geom.window_len = g.at("window_len").get<std::size_t>();
            if (g.contains("hop")) c.geom.hop = g.at("hop").get<std::size_t>();
            if (g.contains("fft_len")) c.geom.fft_len = g.at("fft_len").get<std::size_t>();
        }
        if (j.contains("variant")) c.variant = variant_from(j.at("variant").get<std::string>());
        if (j.contains("param_mode")) c.param_mode = param_mode_from(j.at("param_mode").get<std::string>());
        if (j.contains("schedule")) {
            const auto& s = j.at("schedule");
            if (s.contains("alpha_low")) c.schedule.alpha_low = s.at("alpha_low").get<double>();
            if (s.contains("alpha_high")) c.schedule.alpha_high = s.at("alpha_high").get<double>();
            if (s.contains("beta_low")) c.schedule.beta_low = s.at("beta_low").get<double>();
            if (s.contains("beta_high")) c.schedule.beta_high = s.at("beta_high").get<double>();
            if (s.contains("q")) c.schedule.q = s.at("q").get<double>();
            if (s.contains("l")) c.schedule.l = s.at("l").get<double>();
        }
        if (j.contains("fixed_alpha")) c.fixed_alpha = j.at("fixed_alpha").get<double>();
        if (j.contains("fixed_beta")) c.fixed_beta = j.at("fixed_beta").get<double>();
        if (j.contains("mu")) c.mu = j.at("mu").get<double>();
        if (j.contains("tau_voiced")) c.tau_voiced = j.at("tau_voiced").get<double>();
        if (j.contains("gain_floor_db")) c.gain_floor_db = j.at("gain_floor_db").get<double>();
        if (j.contains("tracker")) {
            const auto& t = j.at("tracker");
            if (t.contains("prior_snr_db")) c.tracker.prior_snr_db = t.at("prior_snr_db").get<double>();
            if (t.contains("spp_smoothing")) c.tracker.spp_smoothing = t.at("spp_smoothing").get<double>();
            if (t.contains("psd_smoothing")) c.tracker.psd_smoothing = t.at("psd_smoothing").get<double>();
            if (t.contains("spp_clamp")) c.tracker.spp_clamp = t.at("spp_clamp").get<double>();
            if (t.contains("psd_floor")) c.tracker.psd_floor = t.at("psd_floor").get<double>();
        }
        if (j.contains("snr")) {
            const auto& s = j.at("snr");
            if (s.contains("dd_smoothing")) c.snr.dd_smoothing = s.at("dd_smoothing").get<double>();
            if (s.contains("xi_min")) c.snr.xi_min = s.at("xi_min").get<double>();
        }
        if (j.contains("phase_source")) c.phase_source = phase_source_from(j.at("phase_source").get<std::string>());
        if (j.contains("quadrature_points")) c.quadrature_points = j.at("quadrature_points").get<int>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: malformed field: ") + e.what());
    }
    c.validate();
    return c;
}

EnhancerConfig EnhancerConfig::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return from_json(ss.str());
}

void EnhancerConfig::save(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw InputError("cannot write config file: " + path);
    f << to_json() << '\n';
}

std::string EnhancerConfig::hash() const {
    const std::string canon = to_json();
    std::uint64_t h = 1469598103934665603ull; // FNV-1a offset basis
    for (unsigned char c : canon) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace stsa
