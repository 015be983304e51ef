#pragma once

// The full analysis-modification-synthesis pipeline: noise tracking,
// two-stage decision-directed SNR, per-bin Bayesian gains, gain floor,
// and resynthesis with the noisy phase.

#include "stsa/config.hpp"
#include "stsa/phase.hpp"
#include "stsa/stft.hpp"

#include <optional>
#include <vector>

namespace stsa {

struct EnhanceStats {
    std::size_t frames = 0;
    std::size_t bins = 0;
    double mean_gain = 0.0; // arithmetic mean over all time-frequency points
};

// Enhance a noisy spectrogram. phase may be empty only for the
// phase-blind variant; for the other variants it must carry one frame
// per spectrogram frame. The output keeps the noisy phase: the phase
// estimate enters only through the amplitude gain.
Spectrogram enhance_spectrogram(const Spectrogram& noisy,
                                const std::optional<PhaseTrack>& phase,
                                const EnhancerConfig& config,
                                EnhanceStats* stats = nullptr);

// Full signal-in/signal-out wrapper: STFT analysis, phase-track
// construction per config.phase_source (clean required for oracle_file),
// enhancement, and overlap-add synthesis to the input length.
std::vector<double> enhance_signal(std::span<const double> noisy,
                                   const EnhancerConfig& config,
                                   std::span<const double> clean_for_oracle = {},
                                   EnhanceStats* stats = nullptr);

} // namespace stsa
