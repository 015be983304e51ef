#pragma once

// Analysis-Modification-Synthesis framing: Hann windowing, forward and
// inverse short-time Fourier transform, overlap-add reconstruction, and
// the analysis-window phase response needed by the harmonic phase
// reconstruction.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace stsa {

enum class WindowKind { Hann };

struct FrameGeometry {
    double sample_rate = 16000.0;
    std::size_t window_len = 512; // 32 ms at 16 kHz
    std::size_t hop = 256;        // 50% overlap
    std::size_t fft_len = 512;
    WindowKind window_kind = WindowKind::Hann;

    std::size_t bins() const { return fft_len / 2 + 1; }
    double bin_hz(std::size_t k) const { return static_cast<double>(k) * sample_rate / static_cast<double>(fft_len); }

    // Analysis window samples (periodic Hann).
    std::vector<double> window() const;

    // Throws ConfigError if the geometry violates the constant-overlap-add
    // condition, fft_len is not a power of two, or fft_len < window_len.
    void validate() const;

    // Default 32 ms / 50% geometry for a sample rate. window_len must come
    // out a power of two (16 kHz -> 512).
    static FrameGeometry for_rate(double sample_rate);
};

struct Spectrogram {
    FrameGeometry geom;
    // frames x (fft_len/2 + 1) one-sided complex coefficients
    std::vector<std::vector<std::complex<double>>> frames;

    std::size_t num_frames() const { return frames.size(); }
};

// In-place radix-2 FFT; size must be a power of two.
void fft(std::vector<std::complex<double>>& buf, bool inverse);

// Forward STFT. signal length must be >= window_len (InputError otherwise).
// Frame p covers samples [p*hop, p*hop + window_len).
Spectrogram analyze(std::span<const double> signal, const FrameGeometry& geom);

// Inverse STFT by overlap-add, normalized by the summed analysis window.
// Output length is (num_frames-1)*hop + window_len.
std::vector<double> synthesize(const Spectrogram& spec);

// Phase of the analysis window's DTFT sampled fractional_bin_offset bins
// away from a spectral peak, with the window time-referenced to frame
// start: arg sum_n w(n) exp(-i 2 pi offset n / fft_len).
double window_phase_response(const FrameGeometry& geom, double fractional_bin_offset);

} // namespace stsa
