#pragma once

// Run configuration: framing geometry, estimator variant, parameter
// schedules, tracker constants, phase source, and reproducibility seed.
// Serialized as JSON; the canonical dump is hashed for audit trails.

#include "stsa/gains.hpp"
#include "stsa/stft.hpp"
#include "stsa/tracking.hpp"

#include <cstdint>
#include <string>

namespace stsa {

enum class Variant { PhaseBlind, KnownPhase, UncertainPhase };
enum class ParamMode { AuditorySchedule, Fixed };
enum class PhaseSource { Noisy, OracleFile, Stftpi };

struct EnhancerConfig {
    FrameGeometry geom;
    Variant variant = Variant::PhaseBlind;
    ParamMode param_mode = ParamMode::AuditorySchedule;
    ParamSchedule schedule;
    double fixed_alpha = 0.0; // used only in Fixed mode
    double fixed_beta = 0.5;
    double mu = 1.0;
    double tau_voiced = 4.0;
    double gain_floor_db = -15.0;
    NoiseTrackerConfig tracker;
    SnrConfig snr;
    PhaseSource phase_source = PhaseSource::Noisy;
    int quadrature_points = 256;
    std::uint64_t seed = 0;

    // Per-bin cost exponents for the configured mode.
    double alpha_at(double f_hz) const;
    double beta_at(double f_hz) const;

    // Throws ConfigError on invalid combinations: COLA violations,
    // Gamma-argument constraint (2 mu - 2 alpha > 0 and
    // 2 mu + beta - 2 alpha > 0 for every bin), bad tracker constants,
    // missing-phase inconsistencies.
    void validate() const;

    std::string to_json() const;           // canonical (sorted keys, fixed format)
    static EnhancerConfig from_json(const std::string& text);
    static EnhancerConfig load(const std::string& path);
    void save(const std::string& path) const;

    // FNV-1a 64-bit hash of the canonical serialization, as 16 hex digits.
    std::string hash() const;
};

std::string to_string(Variant v);
std::string to_string(ParamMode m);
std::string to_string(PhaseSource s);

} // namespace stsa
