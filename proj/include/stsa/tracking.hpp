#pragma once

// Recursive per-bin statistics feeding the gain laws: noise PSD via the
// SPP-based unbiased MMSE tracker and a-priori SNR via the two-stage
// decision-directed approach. State is per-utterance and strictly
// sequential across frames.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace stsa {

struct NoiseTrackerConfig {
    double prior_snr_db = 15.0;  // fixed a-priori SNR under H1
    double spp_smoothing = 0.9;
    double psd_smoothing = 0.8;
    double spp_clamp = 0.99;     // stagnation guard
    double psd_floor = 1e-12;    // of full-scale power
};

struct NoiseTrackerState {
    std::vector<double> noise_psd;    // linear power per bin
    std::vector<double> smoothed_spp; // in [0, 1]
};

// Seed noise_psd from a mean periodogram (typically of the first frames);
// smoothed SPP starts at 0.5.
NoiseTrackerState noise_tracker_init(std::span<const double> mean_periodogram,
                                     const NoiseTrackerConfig& cfg = {});

// One recursion step. frame_power is the per-bin periodogram R^2.
void noise_update(NoiseTrackerState& state, std::span<const double> frame_power,
                  const NoiseTrackerConfig& cfg = {});

struct SnrConfig {
    double dd_smoothing = 0.98;
    double xi_min = 0.00316227766016838; // -25 dB
};

struct SnrState {
    std::vector<double> xi;       // a-priori SNR, floored at xi_min
    std::vector<double> gamma;    // a-posteriori SNR R^2 / sigma_w^2
    std::vector<double> prev_amp; // previous frame's amplitude estimate
};

SnrState snr_state_init(std::size_t bins);

// Gain law evaluated during the second decision-directed stage:
// gain(zeta, gamma, bin) for the currently configured estimator.
using GainFn = std::function<double(double zeta, double gamma, std::size_t bin)>;

// Two-stage decision-directed update. Stage 1 forms zeta_1 from the
// previous amplitude estimate; stage 2 re-estimates the amplitude with
// the configured gain law at zeta_1 and recomputes zeta from it.
// prev_amp must be refreshed by the caller after the final gains are
// applied to the frame.
void snr_update(SnrState& state, std::span<const double> amplitude,
                std::span<const double> noise_psd, const GainFn& gain,
                const SnrConfig& cfg = {});

} // namespace stsa
