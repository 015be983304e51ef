#pragma once

// Clean-phase estimation for the blind setup: autocorrelation f0
// tracking, harmonic-model STFT phase reconstruction across time and
// frequency, and oracle-phase passthrough.

#include "stsa/stft.hpp"

#include <span>
#include <string>
#include <vector>

namespace stsa {

struct F0Result {
    double f0 = 0.0; // Hz, meaningful only when voiced
    bool voiced = false;
};

struct PhaseFrame {
    double f0 = 0.0;
    bool voiced = false;
    std::vector<double> theta_s; // estimated clean phase per bin, in (-pi, pi]
    std::vector<double> tau;     // concentration to report per bin (0 = no information)
};

struct PhaseTrack {
    std::vector<PhaseFrame> frames;
};

struct F0Config {
    double f0_min = 60.0;
    double f0_max = 400.0;
    double voicing_threshold = 0.45; // normalized autocorrelation peak
};

// Normalized-autocorrelation pitch estimate on one frame. The frame must
// cover at least two periods of f0_min (InputError otherwise); unvoiced
// is a valid outcome.
F0Result estimate_f0(std::span<const double> frame, double fs, const F0Config& cfg = {});

// Frame-synchronous f0 track for a whole signal using the analysis
// geometry, with 3-frame median smoothing of voiced stretches. If the
// window is too short for cfg.f0_min, the lower bound is raised to the
// two-period limit the window supports.
std::vector<F0Result> track_f0(std::span<const double> signal, const FrameGeometry& geom,
                               const F0Config& cfg = {});

// Harmonic-model phase reconstruction: per voiced frame each bin is
// assigned the harmonic of f0 nearest its center (ties break low); the
// harmonic-center bin phase advances by 2 pi f_h hop / fs per frame and
// neighbouring bins follow through the analysis-window phase response.
// Unvoiced frames pass the noisy phase through with tau = 0.
PhaseTrack stftpi(const Spectrogram& noisy, const std::vector<F0Result>& f0_track,
                  double tau_voiced);

// Oracle passthrough: clean-spectrogram phase, tau_voiced everywhere.
PhaseTrack oracle_phase(const Spectrogram& clean, double tau_voiced);

// Wrapped phase difference theta_y - theta_s in (-pi, pi].
double delta_theta(double theta_y, double theta_s_est);

// f0-track CSV exchange: lines of "frame_index,f0_hz,voiced_flag".
std::vector<F0Result> read_f0_csv(const std::string& path);
void write_f0_csv(const std::string& path, const std::vector<F0Result>& track);

} // namespace stsa
