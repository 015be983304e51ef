#include "stsa/tracking.hpp"
#include "stsa/errors.hpp"

#include <algorithm>
#include <cmath>

namespace stsa {

namespace {

// Unbiasedness factor for the soft noise-periodogram update. Under
// noise-only input the periodogram gamma is unit-mean exponential and the
// raw soft update E{P sigma^2 + (1-P) R^2} under-estimates, because the
// speech-presence weight rejects the upper tail. Scaling the accepted
// periodogram by B = E[1-P] / E[(1-P) gamma] makes the update a fixed
// point at the true PSD. Depends only on the fixed prior SNR.
double h0_unbias_factor(const NoiseTrackerConfig& cfg) {
    static thread_local double cached_prior = -1.0, cached_b = 1.0;
    if (cfg.prior_snr_db == cached_prior) return cached_b;
    const double xi = std::pow(10.0, cfg.prior_snr_db / 10.0);
    const double glr_exp = xi / (1.0 + xi);
    const int n = 4000; // Simpson over the exponential's effective support
    const double hi = 60.0, h = hi / n;
    double num = 0.0, den = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double g = i * h;
        const double one_m_p = 1.0 - 1.0 / (1.0 + (1.0 + xi) * std::exp(-g * glr_exp));
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        num += w * one_m_p * std::exp(-g);
        den += w * one_m_p * g * std::exp(-g);
    }
    cached_prior = cfg.prior_snr_db;
    cached_b = num / den;
    return cached_b;
}

} // namespace

NoiseTrackerState noise_tracker_init(std::span<const double> mean_periodogram,
                                     const NoiseTrackerConfig& cfg) {
    NoiseTrackerState st;
    st.noise_psd.resize(mean_periodogram.size());
    st.smoothed_spp.assign(mean_periodogram.size(), 0.5);
    for (std::size_t k = 0; k < mean_periodogram.size(); ++k)
        st.noise_psd[k] = std::max(mean_periodogram[k], cfg.psd_floor);
    return st;
}

void noise_update(NoiseTrackerState& state, std::span<const double> frame_power,
                  const NoiseTrackerConfig& cfg) {
    if (frame_power.size() != state.noise_psd.size())
        throw InputError("noise_update: bin count mismatch");
    const double xi_h1 = std::pow(10.0, cfg.prior_snr_db / 10.0);
    const double glr_exp = xi_h1 / (1.0 + xi_h1);
    const double bias = h0_unbias_factor(cfg);
    for (std::size_t k = 0; k < frame_power.size(); ++k) {
        const double gamma_h1 = frame_power[k] / state.noise_psd[k];
        // P(H1 | y) with equal priors
        const double e = std::min(gamma_h1 * glr_exp, 500.0);
        double p = 1.0 / (1.0 + (1.0 + xi_h1) * std::exp(-e));
        state.smoothed_spp[k] = cfg.spp_smoothing * state.smoothed_spp[k] + (1.0 - cfg.spp_smoothing) * p;
        if (state.smoothed_spp[k] > cfg.spp_clamp) p = std::min(p, cfg.spp_clamp); // stagnation guard
        const double target = p * state.noise_psd[k] + (1.0 - p) * bias * frame_power[k];
        state.noise_psd[k] = std::max(cfg.psd_smoothing * state.noise_psd[k] + (1.0 - cfg.psd_smoothing) * target,
                                      cfg.psd_floor);
    }
}

SnrState snr_state_init(std::size_t bins) {
    SnrState st;
    st.xi.assign(bins, 0.0);
    st.gamma.assign(bins, 0.0);
    st.prev_amp.assign(bins, 0.0);
    return st;
}

void snr_update(SnrState& state, std::span<const double> amplitude,
                std::span<const double> noise_psd, const GainFn& gain,
                const SnrConfig& cfg) {
    if (amplitude.size() != state.xi.size() || noise_psd.size() != state.xi.size())
        throw InputError("snr_update: bin count mismatch");
    const double a = cfg.dd_smoothing;
    for (std::size_t k = 0; k < amplitude.size(); ++k) {
        const double r2 = amplitude[k] * amplitude[k];
        const double g = r2 / noise_psd[k];
        state.gamma[k] = g;
        const double ml = std::max(g - 1.0, 0.0);
        const double xi1 = std::max(a * state.prev_amp[k] * state.prev_amp[k] / noise_psd[k] + (1.0 - a) * ml,
                                    cfg.xi_min);
        const double amp1 = gain(xi1, g, k) * amplitude[k];
        state.xi[k] = std::max(a * amp1 * amp1 / noise_psd[k] + (1.0 - a) * ml, cfg.xi_min);
    }
}

} // namespace stsa
