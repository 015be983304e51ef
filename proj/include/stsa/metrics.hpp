#pragma once

// Objective evaluation and stimulus construction: STOI intelligibility,
// segmental SNR, SNR-controlled mixing with active-level measurement,
// and speech-shaped-noise synthesis via an LPC-12 all-pole fit.

#include <cstdint>
#include <span>
#include <vector>

namespace stsa {

enum class LevelMode { ActiveLevel, Rms };

struct MixSpec {
    double target_snr_db = 0.0;
    LevelMode level_mode = LevelMode::Rms;
    std::uint64_t seed = 0; // reserved for noise alignment policies
};

struct MixResult {
    std::vector<double> noisy;
    std::vector<double> scaled_noise; // kept separately so the ratio can be re-measured
    double noise_scale = 0.0;
};

// Short-time objective intelligibility at 16 kHz: 1/3-octave band
// decomposition (15 bands from 150 Hz), 384 ms envelope segments,
// normalization plus clipping at -15 dB SDR, mean band-segment
// correlation. Inputs must be equal-length and at least one second.
double stoi(std::span<const double> clean, std::span<const double> processed, double fs);

// Mean over 32 ms frames of 10 log10(||s||^2/||s-s_hat||^2), clamped to
// [-10, 35] dB per frame; frames with clean energy below 1e-8 of the
// peak frame are excluded. Throws InputError on length mismatch or an
// all-silent clean signal.
double segmental_snr(std::span<const double> clean, std::span<const double> processed, double fs);

// Level of a signal in dB (10 log10 mean power). In ActiveLevel mode
// only frames within 35 dB of the peak 16 ms frame energy count.
double measure_level_db(std::span<const double> x, LevelMode mode, double fs);

// Scale noise so the clean-to-noise level ratio equals the target and
// add it to clean. Noise must be at least as long as clean.
MixResult mix_at_snr(std::span<const double> clean, std::span<const double> noise,
                     const MixSpec& spec, double fs);

// Speech-shaped noise: order-12 LPC fit (autocorrelation method,
// Levinson-Durbin) to the reference, seeded white Gaussian noise pushed
// through the all-pole filter, output normalized to unit RMS. The
// reference must cover at least 5 s at the given rate.
std::vector<double> gen_ssn(std::span<const double> reference, std::size_t length,
                            std::uint64_t seed, double fs);

// Autocorrelation-method LPC coefficients a_1..a_order of the prediction
// filter (exposed for spectral-envelope checks).
std::vector<double> lpc_autocorrelation(std::span<const double> x, int order);

} // namespace stsa
