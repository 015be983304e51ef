#include "stsa/stft.hpp"
#include "stsa/errors.hpp"

#include <cmath>
#include <numbers>

namespace stsa {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

} // namespace

std::vector<double> FrameGeometry::window() const {
    std::vector<double> w(window_len);
    // periodic Hann: exact COLA (sum = 1) at hop = window_len/2
    for (std::size_t n = 0; n < window_len; ++n)
        w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / static_cast<double>(window_len));
    return w;
}

void FrameGeometry::validate() const {
    if (sample_rate <= 0.0) throw ConfigError("geometry: sample_rate must be positive");
    if (window_len == 0 || hop == 0) throw ConfigError("geometry: window_len and hop must be nonzero");
    if (hop > window_len) throw ConfigError("geometry: hop must not exceed window_len");
    if (!is_pow2(fft_len)) throw ConfigError("geometry: fft_len must be a power of two");
    if (fft_len < window_len) throw ConfigError("geometry: fft_len must be >= window_len");
    // COLA flatness over interior samples
    const auto w = window();
    const std::size_t span = window_len + 4 * hop;
    std::vector<double> acc(span, 0.0);
    for (std::size_t start = 0; start + window_len <= span; start += hop)
        for (std::size_t n = 0; n < window_len; ++n) acc[start + n] += w[n];
    double lo = 1e300, hi = -1e300;
    for (std::size_t n = window_len; n + window_len < span; ++n) {
        lo = std::min(lo, acc[n]);
        hi = std::max(hi, acc[n]);
    }
    if (!(lo > 0.0) || (hi - lo) / hi > 1e-12)
        throw ConfigError("geometry: window does not satisfy constant-overlap-add at this hop");
}

FrameGeometry FrameGeometry::for_rate(double sample_rate) {
    FrameGeometry g;
    g.sample_rate = sample_rate;
    g.window_len = static_cast<std::size_t>(std::lround(0.032 * sample_rate));
    g.hop = g.window_len / 2;
    g.fft_len = g.window_len;
    g.validate();
    return g;
}

void fft(std::vector<std::complex<double>>& buf, bool inverse) {
    const std::size_t n = buf.size();
    if (!is_pow2(n)) throw ConfigError("fft: size must be a power of two");
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(buf[i], buf[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = buf[i + k];
                const auto v = buf[i + k + len / 2] * w;
                buf[i + k] = u + v;
                buf[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse)
        for (auto& x : buf) x /= static_cast<double>(n);
}

Spectrogram analyze(std::span<const double> signal, const FrameGeometry& geom) {
    geom.validate();
    if (signal.size() < geom.window_len)
        throw InputError("analyze: signal shorter than one analysis window");
    const auto w = geom.window();
    const std::size_t num_frames = (signal.size() - geom.window_len) / geom.hop + 1;
    Spectrogram spec;
    spec.geom = geom;
    spec.frames.resize(num_frames);
    std::vector<std::complex<double>> buf(geom.fft_len);
    for (std::size_t p = 0; p < num_frames; ++p) {
        const std::size_t start = p * geom.hop;
        for (std::size_t n = 0; n < geom.window_len; ++n)
            buf[n] = w[n] * signal[start + n];
        for (std::size_t n = geom.window_len; n < geom.fft_len; ++n) buf[n] = 0.0;
        fft(buf, false);
        spec.frames[p].assign(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(geom.bins()));
    }
    return spec;
}

std::vector<double> synthesize(const Spectrogram& spec) {
    const auto& geom = spec.geom;
    geom.validate();
    const std::size_t num_frames = spec.num_frames();
    if (num_frames == 0) return {};
    const std::size_t out_len = (num_frames - 1) * geom.hop + geom.window_len;
    const auto w = geom.window();
    std::vector<double> out(out_len, 0.0), wsum(out_len, 0.0);
    std::vector<std::complex<double>> buf(geom.fft_len);
    const std::size_t half = geom.fft_len / 2;
    for (std::size_t p = 0; p < num_frames; ++p) {
        for (std::size_t k = 0; k <= half; ++k) buf[k] = spec.frames[p][k];
        for (std::size_t k = half + 1; k < geom.fft_len; ++k)
            buf[k] = std::conj(spec.frames[p][geom.fft_len - k]);
        fft(buf, true);
        const std::size_t start = p * geom.hop;
        for (std::size_t n = 0; n < geom.window_len; ++n) {
            out[start + n] += buf[n].real();
            wsum[start + n] += w[n];
        }
    }
    for (std::size_t n = 0; n < out_len; ++n)
        if (wsum[n] > 1e-12) out[n] /= wsum[n];
    return out;
}

double window_phase_response(const FrameGeometry& geom, double fractional_bin_offset) {
    const auto w = geom.window();
    const double omega = 2.0 * std::numbers::pi * fractional_bin_offset / static_cast<double>(geom.fft_len);
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t n = 0; n < w.size(); ++n)
        acc += w[n] * std::exp(std::complex<double>(0.0, -omega * static_cast<double>(n)));
    return std::arg(acc);
}

} // namespace stsa
