#include "stsa/metrics.hpp"
#include "stsa/errors.hpp"
#include "stsa/stft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace stsa {

namespace {

double frame_energy(std::span<const double> x, std::size_t start, std::size_t len) {
    double e = 0.0;
    for (std::size_t i = start; i < start + len; ++i) e += x[i] * x[i];
    return e;
}

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

} // namespace

double stoi(std::span<const double> clean, std::span<const double> processed, double fs) {
    if (clean.size() != processed.size())
        throw InputError("stoi: signals must be the same length");
    if (fs != 16000.0)
        throw InputError("stoi: only 16 kHz input is supported");
    if (clean.size() < static_cast<std::size_t>(fs))
        throw InputError("stoi: signals must be at least one second long");

    const FrameGeometry geom = FrameGeometry::for_rate(fs);
    const std::size_t N = geom.window_len, L = geom.hop;
    const std::size_t nf = (clean.size() - N) / L + 1;
    const auto win = geom.window();

    // remove frames more than 40 dB below the most energetic clean frame
    std::vector<double> en(nf);
    double emax = 0.0;
    for (std::size_t p = 0; p < nf; ++p) {
        double e = 0.0;
        for (std::size_t n = 0; n < N; ++n) {
            const double v = win[n] * clean[p * L + n];
            e += v * v;
        }
        en[p] = e;
        emax = std::max(emax, e);
    }
    const double thresh = emax * std::pow(10.0, -40.0 / 10.0);

    Spectrogram X = analyze(clean, geom);
    Spectrogram Y = analyze(processed, geom);
    std::vector<std::size_t> keep;
    for (std::size_t p = 0; p < nf; ++p)
        if (en[p] > thresh) keep.push_back(p);

    // 15 one-third-octave bands from 150 Hz
    constexpr int kBands = 15;
    const std::size_t bins = geom.bins();
    std::vector<std::vector<std::size_t>> band_bins(kBands);
    for (int j = 0; j < kBands; ++j) {
        const double cf = 150.0 * std::pow(2.0, j / 3.0);
        const double lo = cf * std::pow(2.0, -1.0 / 6.0);
        const double hi = cf * std::pow(2.0, 1.0 / 6.0);
        for (std::size_t k = 0; k < bins; ++k) {
            const double f = geom.bin_hz(k);
            if (f >= lo && f < hi) band_bins[j].push_back(k);
        }
    }

    const std::size_t m = keep.size();
    std::vector<std::vector<double>> Xe(kBands, std::vector<double>(m));
    std::vector<std::vector<double>> Ye(kBands, std::vector<double>(m));
    for (std::size_t i = 0; i < m; ++i) {
        const auto& xf = X.frames[keep[i]];
        const auto& yf = Y.frames[keep[i]];
        for (int j = 0; j < kBands; ++j) {
            double ex = 0.0, ey = 0.0;
            for (std::size_t k : band_bins[j]) {
                ex += std::norm(xf[k]);
                ey += std::norm(yf[k]);
            }
            Xe[j][i] = std::sqrt(ex);
            Ye[j][i] = std::sqrt(ey);
        }
    }

    constexpr std::size_t kSeg = 24; // 384 ms of 16 ms hops
    // -15 dB lower signal-to-distortion bound: clamp the normalized
    // processed envelope at (1 + 10^{15/20}) times the clean envelope
    const double clip = std::pow(10.0, 15.0 / 20.0);
    double sum = 0.0;
    std::size_t count = 0;
    std::vector<double> xs(kSeg), ys(kSeg);
    for (int j = 0; j < kBands; ++j) {
        for (std::size_t end = kSeg; end <= m; ++end) {
            for (std::size_t i = 0; i < kSeg; ++i) {
                xs[i] = Xe[j][end - kSeg + i];
                ys[i] = Ye[j][end - kSeg + i];
            }
            const double nx = norm2(xs), ny = norm2(ys);
            if (nx < 1e-300 || ny < 1e-300) continue;
            double xm = 0.0, ym = 0.0;
            for (std::size_t i = 0; i < kSeg; ++i) {
                ys[i] = std::min(ys[i] * nx / ny, (1.0 + clip) * xs[i]);
                xm += xs[i];
                ym += ys[i];
            }
            xm /= kSeg;
            ym /= kSeg;
            double num = 0.0, dx = 0.0, dy = 0.0;
            for (std::size_t i = 0; i < kSeg; ++i) {
                num += (xs[i] - xm) * (ys[i] - ym);
                dx += (xs[i] - xm) * (xs[i] - xm);
                dy += (ys[i] - ym) * (ys[i] - ym);
            }
            const double den = std::sqrt(dx * dy);
            if (den < 1e-300) continue;
            sum += num / den;
            ++count;
        }
    }
    if (count == 0) throw InputError("stoi: no usable band-segments (signal too short or silent)");
    return sum / static_cast<double>(count);
}

double segmental_snr(std::span<const double> clean, std::span<const double> processed, double fs) {
    if (clean.size() != processed.size())
        throw InputError("segmental_snr: signals must be the same length");
    const std::size_t frame = static_cast<std::size_t>(std::lround(0.032 * fs));
    if (clean.size() < frame) throw InputError("segmental_snr: signal shorter than one frame");

    double peak = 0.0;
    for (std::size_t i = 0; i + frame <= clean.size(); i += frame)
        peak = std::max(peak, frame_energy(clean, i, frame));
    if (peak <= 0.0) throw InputError("segmental_snr: clean signal is silent");

    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i + frame <= clean.size(); i += frame) {
        const double e = frame_energy(clean, i, frame);
        if (e < 1e-8 * peak) continue;
        double d = 0.0;
        for (std::size_t n = i; n < i + frame; ++n) {
            const double v = clean[n] - processed[n];
            d += v * v;
        }
        const double snr = 10.0 * std::log10(e / std::max(d, 1e-300));
        sum += std::clamp(snr, -10.0, 35.0);
        ++count;
    }
    if (count == 0) throw InputError("segmental_snr: no active frames");
    return sum / static_cast<double>(count);
}

double measure_level_db(std::span<const double> x, LevelMode mode, double fs) {
    if (x.empty()) throw InputError("measure_level_db: empty signal");
    if (mode == LevelMode::Rms) {
        double e = 0.0;
        for (double v : x) e += v * v;
        const double p = e / static_cast<double>(x.size());
        if (p <= 0.0) throw InputError("measure_level_db: zero-energy signal");
        return 10.0 * std::log10(p);
    }
    // active level: frames within 35 dB of the peak 16 ms frame energy
    const std::size_t frame = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(0.016 * fs)));
    std::vector<double> energies;
    for (std::size_t i = 0; i + frame <= x.size(); i += frame)
        energies.push_back(frame_energy(x, i, frame));
    if (energies.empty()) energies.push_back(frame_energy(x, 0, x.size()));
    const double peak = *std::max_element(energies.begin(), energies.end());
    if (peak <= 0.0) throw InputError("measure_level_db: zero-energy signal");
    const double gate = peak * std::pow(10.0, -35.0 / 10.0);
    double e = 0.0;
    std::size_t n = 0;
    for (double fe : energies)
        if (fe >= gate) {
            e += fe;
            n += frame;
        }
    return 10.0 * std::log10(e / static_cast<double>(n));
}

MixResult mix_at_snr(std::span<const double> clean, std::span<const double> noise,
                     const MixSpec& spec, double fs) {
    if (!std::isfinite(spec.target_snr_db))
        throw ConfigError("mix_at_snr: target SNR must be finite");
    if (noise.size() < clean.size())
        throw InputError("mix_at_snr: noise must be at least as long as the clean signal");
    const double clean_db = measure_level_db(clean, spec.level_mode, fs);
    const auto head = noise.subspan(0, clean.size());
    const double noise_db = measure_level_db(head, spec.level_mode, fs);
    const double scale = std::pow(10.0, (clean_db - noise_db - spec.target_snr_db) / 20.0);
    MixResult r;
    r.noise_scale = scale;
    r.scaled_noise.resize(clean.size());
    r.noisy.resize(clean.size());
    for (std::size_t i = 0; i < clean.size(); ++i) {
        r.scaled_noise[i] = scale * noise[i];
        r.noisy[i] = clean[i] + r.scaled_noise[i];
    }
    return r;
}

std::vector<double> lpc_autocorrelation(std::span<const double> x, int order) {
    if (order < 1) throw ConfigError("lpc: order must be >= 1");
    if (x.size() <= static_cast<std::size_t>(order))
        throw InputError("lpc: signal shorter than the model order");
    std::vector<double> r(static_cast<std::size_t>(order) + 1, 0.0);
    for (int lag = 0; lag <= order; ++lag)
        for (std::size_t n = static_cast<std::size_t>(lag); n < x.size(); ++n)
            r[static_cast<std::size_t>(lag)] += x[n] * x[n - static_cast<std::size_t>(lag)];
    if (r[0] <= 0.0) throw InputError("lpc: zero-energy reference");

    // Levinson-Durbin recursion
    std::vector<double> a(static_cast<std::size_t>(order) + 1, 0.0);
    a[0] = 1.0;
    double err = r[0];
    for (int i = 1; i <= order; ++i) {
        double acc = r[static_cast<std::size_t>(i)];
        for (int j = 1; j < i; ++j) acc += a[static_cast<std::size_t>(j)] * r[static_cast<std::size_t>(i - j)];
        const double k = -acc / err;
        std::vector<double> na = a;
        for (int j = 1; j < i; ++j)
            na[static_cast<std::size_t>(j)] += k * a[static_cast<std::size_t>(i - j)];
        na[static_cast<std::size_t>(i)] = k;
        a = std::move(na);
        err *= (1.0 - k * k);
        if (!(err > 0.0)) throw NumericalError("lpc: Levinson recursion lost positive definiteness");
    }
    return {a.begin() + 1, a.end()};
}

std::vector<double> gen_ssn(std::span<const double> reference, std::size_t length,
                            std::uint64_t seed, double fs) {
    if (reference.size() < static_cast<std::size_t>(5.0 * fs))
        throw InputError("gen_ssn: reference must cover at least 5 seconds");
    constexpr int kOrder = 12;
    const std::vector<double> a = lpc_autocorrelation(reference, kOrder);

    std::mt19937_64 rng(seed);
    // explicit Box-Muller so the stream is implementation-independent
    auto gauss = [&rng]() {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double u1 = u(rng);
        while (u1 <= 0.0) u1 = u(rng);
        const double u2 = u(rng);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    };

    std::vector<double> y(length, 0.0);
    for (std::size_t n = 0; n < length; ++n) {
        double v = gauss();
        for (int j = 1; j <= kOrder; ++j)
            if (n >= static_cast<std::size_t>(j))
                v -= a[static_cast<std::size_t>(j - 1)] * y[n - static_cast<std::size_t>(j)];
        if (!std::isfinite(v)) throw NumericalError("gen_ssn: all-pole filter diverged");
        y[n] = v;
    }
    double rms = 0.0;
    for (double v : y) rms += v * v;
    rms = std::sqrt(rms / static_cast<double>(length));
    if (rms <= 0.0) throw NumericalError("gen_ssn: degenerate output");
    for (double& v : y) v /= rms;
    return y;
}

} // namespace stsa
