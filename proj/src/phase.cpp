#include "stsa/phase.hpp"
#include "stsa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <sstream>

namespace stsa {

namespace {

double wrap_phase(double x) {
    const double pi = std::numbers::pi;
    x = std::fmod(x + pi, 2.0 * pi);
    if (x < 0.0) x += 2.0 * pi;
    return x - pi; // (-pi, pi]... fmod lands on [-pi, pi)
}

} // namespace

double delta_theta(double theta_y, double theta_s_est) {
    double d = wrap_phase(theta_y - theta_s_est);
    if (d == -std::numbers::pi) d = std::numbers::pi;
    return d;
}

F0Result estimate_f0(std::span<const double> frame, double fs, const F0Config& cfg) {
    const std::size_t min_len = static_cast<std::size_t>(std::ceil(2.0 * fs / cfg.f0_min));
    if (frame.size() < min_len)
        throw InputError("estimate_f0: frame too short for two periods of f0_min");
    const std::size_t lag_min = static_cast<std::size_t>(std::floor(fs / cfg.f0_max));
    const std::size_t lag_max = static_cast<std::size_t>(std::ceil(fs / cfg.f0_min));
    const std::size_t n = frame.size() - lag_max; // common overlap length
    if (lag_min < 2 || n < 32) return {};

    double e0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) e0 += frame[i] * frame[i];
    if (e0 <= 0.0) return {};

    std::vector<double> r(lag_max + 1, 0.0);
    double best = 0.0;
    std::size_t best_lag = 0;
    for (std::size_t l = lag_min; l <= lag_max; ++l) {
        double num = 0.0, el = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            num += frame[i] * frame[i + l];
            el += frame[i + l] * frame[i + l];
        }
        const double d = std::sqrt(e0 * el);
        r[l] = d > 0.0 ? num / d : 0.0;
        if (r[l] > best) {
            best = r[l];
            best_lag = l;
        }
    }
    if (best < cfg.voicing_threshold || best_lag == 0) return {};

    // integer multiples of the true lag score the same on periodic frames,
    // so the global maximum can land an octave low; take the smallest
    // local-maximum lag whose score is within 1% of the best
    for (std::size_t l = lag_min; l < best_lag; ++l) {
        const bool local_max = (l == lag_min || r[l] >= r[l - 1]) && r[l] >= r[l + 1];
        if (local_max && r[l] >= 0.99 * best) {
            best_lag = l;
            best = r[l];
            break;
        }
    }

    // parabolic refinement around the peak lag
    double lag = static_cast<double>(best_lag);
    if (best_lag > lag_min && best_lag < lag_max) {
        const double ym = r[best_lag - 1], y0 = r[best_lag], yp = r[best_lag + 1];
        const double den = ym - 2.0 * y0 + yp;
        if (std::abs(den) > 1e-12) lag += 0.5 * (ym - yp) / den;
    }
    return {fs / lag, true};
}

std::vector<F0Result> track_f0(std::span<const double> signal, const FrameGeometry& geom,
                               const F0Config& cfg) {
    F0Config eff = cfg;
    // a window shorter than two periods of f0_min cannot support it
    eff.f0_min = std::max(cfg.f0_min, 2.0 * geom.sample_rate / static_cast<double>(geom.window_len));
    const std::size_t num_frames =
        signal.size() >= geom.window_len ? (signal.size() - geom.window_len) / geom.hop + 1 : 0;
    std::vector<F0Result> track(num_frames);
    for (std::size_t p = 0; p < num_frames; ++p)
        track[p] = estimate_f0(signal.subspan(p * geom.hop, geom.window_len), geom.sample_rate, eff);
    // 3-frame median smoothing of f0 over voiced runs
    std::vector<F0Result> smooth = track;
    for (std::size_t p = 1; p + 1 < num_frames; ++p) {
        if (track[p - 1].voiced && track[p].voiced && track[p + 1].voiced) {
            double a = track[p - 1].f0, b = track[p].f0, c = track[p + 1].f0;
            smooth[p].f0 = std::max(std::min(a, b), std::min(std::max(a, b), c));
        }
    }
    return smooth;
}

PhaseTrack stftpi(const Spectrogram& noisy, const std::vector<F0Result>& f0_track,
                  double tau_voiced) {
    if (f0_track.size() != noisy.num_frames())
        throw InputError("stftpi: f0 track length does not match spectrogram");
    const auto& geom = noisy.geom;
    const std::size_t bins = geom.bins();
    const double n_fft = static_cast<double>(geom.fft_len);
    const double fs = geom.sample_rate;
    const double two_pi = 2.0 * std::numbers::pi;

    PhaseTrack track;
    track.frames.resize(noisy.num_frames());
    // running phase at harmonic-center bins, keyed by bin index
    std::vector<double> carrier(bins, 0.0);
    std::vector<bool> carrier_valid(bins, false);

    for (std::size_t p = 0; p < noisy.num_frames(); ++p) {
        auto& out = track.frames[p];
        out.theta_s.resize(bins);
        out.tau.resize(bins);
        const auto& frame = noisy.frames[p];
        out.voiced = f0_track[p].voiced;
        out.f0 = f0_track[p].f0;
        if (!out.voiced) {
            for (std::size_t k = 0; k < bins; ++k) {
                out.theta_s[k] = std::arg(frame[k]);
                out.tau[k] = 0.0;
            }
            std::fill(carrier_valid.begin(), carrier_valid.end(), false);
            continue;
        }
        const double f0 = f0_track[p].f0;
        if (f0 <= 0.0) throw NumericalError("stftpi: voiced frame with non-positive f0");
        const int max_h = static_cast<int>(std::floor((fs / 2.0) / f0));
        // time recursion at each harmonic-center bin
        std::vector<double> harmonic_phase(static_cast<std::size_t>(max_h) + 1, 0.0);
        for (int h = 1; h <= max_h; ++h) {
            const double fh = f0 * h;
            const auto kc = static_cast<std::size_t>(std::lround(fh * n_fft / fs));
            if (kc >= bins) continue;
            double th;
            if (carrier_valid[kc]) {
                th = carrier[kc] + two_pi * fh * static_cast<double>(geom.hop) / fs;
            } else {
                th = std::arg(frame[kc]); // initialization from the noisy phase
            }
            th = wrap_phase(th);
            carrier[kc] = th;
            harmonic_phase[static_cast<std::size_t>(h)] = th;
        }
        for (std::size_t k = 0; k < bins; ++k) carrier_valid[k] = false;
        for (int h = 1; h <= max_h; ++h) {
            const auto kc = static_cast<std::size_t>(std::lround(f0 * h * n_fft / fs));
            if (kc < bins) carrier_valid[kc] = true;
        }
        // cross-band propagation through the window phase response;
        // each bin follows its nearest harmonic (ties break low)
        for (std::size_t k = 0; k < bins; ++k) {
            const double fk = geom.bin_hz(k);
            int h = std::max(1, static_cast<int>(std::lround(fk / f0)));
            if (h > max_h) h = std::max(1, max_h);
            if (h > 1 && std::abs((h - 1) * f0 - fk) <= std::abs(h * f0 - fk) + 1e-12 &&
                std::abs((h - 1) * f0 - fk) < std::abs(h * f0 - fk) + 1e-12) {
                // exact midpoint: prefer the lower harmonic
                if (std::abs(std::abs((h - 1) * f0 - fk) - std::abs(h * f0 - fk)) < 1e-12) --h;
            }
            const double fh = f0 * h;
            const auto kc = static_cast<std::size_t>(std::lround(fh * n_fft / fs));
            const double th_c = (kc < bins) ? harmonic_phase[static_cast<std::size_t>(h)] : std::arg(frame[k]);
            const double off_c = static_cast<double>(kc) - fh * n_fft / fs;
            const double off_k = static_cast<double>(k) - fh * n_fft / fs;
            const double th = th_c - window_phase_response(geom, off_c) + window_phase_response(geom, off_k);
            out.theta_s[k] = wrap_phase(th);
            out.tau[k] = tau_voiced;
        }
    }
    return track;
}

PhaseTrack oracle_phase(const Spectrogram& clean, double tau_voiced) {
    PhaseTrack track;
    track.frames.resize(clean.num_frames());
    for (std::size_t p = 0; p < clean.num_frames(); ++p) {
        auto& out = track.frames[p];
        out.voiced = true;
        out.theta_s.resize(clean.frames[p].size());
        out.tau.assign(clean.frames[p].size(), tau_voiced);
        for (std::size_t k = 0; k < clean.frames[p].size(); ++k)
            out.theta_s[k] = std::arg(clean.frames[p][k]);
    }
    return track;
}

std::vector<F0Result> read_f0_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open f0 track: " + path);
    std::vector<F0Result> track;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string idx, f0, voiced;
        if (!std::getline(ss, idx, ',') || !std::getline(ss, f0, ',') || !std::getline(ss, voiced, ','))
            throw InputError("malformed f0 CSV line: " + line);
        F0Result r;
        r.f0 = std::stod(f0);
        r.voiced = std::stoi(voiced) != 0;
        track.push_back(r);
    }
    return track;
}

void write_f0_csv(const std::string& path, const std::vector<F0Result>& track) {
    std::ofstream f(path);
    if (!f) throw InputError("cannot write f0 track: " + path);
    f << "# frame_index,f0_hz,voiced_flag\n";
    for (std::size_t i = 0; i < track.size(); ++i)
        f << i << ',' << track[i].f0 << ',' << (track[i].voiced ? 1 : 0) << '\n';
}

} // namespace stsa
