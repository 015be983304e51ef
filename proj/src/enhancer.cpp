#include "stsa/enhancer.hpp"
#include "stsa/errors.hpp"
#include "stsa/gains.hpp"
#include "stsa/tracking.hpp"

#include <algorithm>
#include <cmath>

namespace stsa {

namespace {

constexpr std::size_t kInitFrames = 5; // noise-PSD seed window

} // namespace

Spectrogram enhance_spectrogram(const Spectrogram& noisy,
                                const std::optional<PhaseTrack>& phase,
                                const EnhancerConfig& config,
                                EnhanceStats* stats) {
    config.validate();
    const bool needs_phase = config.variant != Variant::PhaseBlind;
    if (needs_phase) {
        if (!phase) throw ConfigError("enhance: selected variant requires a phase estimate");
        if (phase->frames.size() != noisy.num_frames())
            throw InputError("enhance: phase track length does not match spectrogram");
    }
    const std::size_t bins = noisy.geom.bins();
    const std::size_t nf = noisy.num_frames();
    if (nf == 0) throw InputError("enhance: empty spectrogram");

    // per-bin cost exponents
    std::vector<double> alpha(bins), beta(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        const double f = noisy.geom.bin_hz(k);
        alpha[k] = config.alpha_at(f);
        beta[k] = config.beta_at(f);
    }

    // noise PSD seeded from the mean periodogram of the leading frames
    std::vector<double> init(bins, 0.0);
    const std::size_t ni = std::min(kInitFrames, nf);
    for (std::size_t p = 0; p < ni; ++p)
        for (std::size_t k = 0; k < bins; ++k)
            init[k] += std::norm(noisy.frames[p][k]) / static_cast<double>(ni);
    NoiseTrackerState noise = noise_tracker_init(init, config.tracker);
    SnrState snr = snr_state_init(bins);

    Spectrogram out;
    out.geom = noisy.geom;
    out.frames.resize(nf);

    std::vector<double> frame_power(bins), amplitude(bins), dtheta(bins), tau(bins, 0.0);
    double gain_sum = 0.0;

    auto bin_gain = [&](double zeta, double gamma, std::size_t k) {
        GainContext ctx;
        ctx.zeta = zeta;
        ctx.gamma = std::max(gamma, 1e-6);
        ctx.noise_psd = noise.noise_psd[k];
        ctx.mu = config.mu;
        ctx.alpha = alpha[k];
        ctx.beta = beta[k];
        ctx.delta_theta = dtheta[k];
        ctx.tau = tau[k];
        switch (config.variant) {
            case Variant::PhaseBlind: return gain_phase_blind(ctx);
            case Variant::KnownPhase: return gain_known_phase(ctx);
            case Variant::UncertainPhase:
                if (ctx.tau <= 0.0) return gain_phase_blind(ctx);
                return gain_uncertain_phase(ctx, config.quadrature_points);
        }
        throw ConfigError("enhance: invalid variant");
    };

    for (std::size_t p = 0; p < nf; ++p) {
        const auto& yf = noisy.frames[p];
        for (std::size_t k = 0; k < bins; ++k) {
            frame_power[k] = std::norm(yf[k]);
            amplitude[k] = std::abs(yf[k]);
        }
        noise_update(noise, frame_power, config.tracker);
        if (needs_phase) {
            const auto& pf = phase->frames[p];
            for (std::size_t k = 0; k < bins; ++k) {
                dtheta[k] = delta_theta(std::arg(yf[k]), pf.theta_s[k]);
                tau[k] = pf.tau[k];
            }
        }
        snr_update(snr, amplitude, noise.noise_psd, bin_gain, config.snr);

        auto& of = out.frames[p];
        of.resize(bins);
        for (std::size_t k = 0; k < bins; ++k) {
            double g = bin_gain(snr.xi[k], snr.gamma[k], k);
            g = apply_gain_floor(g, config.gain_floor_db);
            of[k] = g * yf[k]; // noisy phase retained
            snr.prev_amp[k] = g * amplitude[k];
            gain_sum += g;
        }
    }

    if (stats) {
        stats->frames = nf;
        stats->bins = bins;
        stats->mean_gain = gain_sum / static_cast<double>(nf * bins);
    }
    return out;
}

std::vector<double> enhance_signal(std::span<const double> noisy,
                                   const EnhancerConfig& config,
                                   std::span<const double> clean_for_oracle,
                                   EnhanceStats* stats) {
    config.validate();
    Spectrogram Y = analyze(noisy, config.geom);

    std::optional<PhaseTrack> phase;
    if (config.variant != Variant::PhaseBlind) {
        switch (config.phase_source) {
            case PhaseSource::OracleFile: {
                if (clean_for_oracle.empty())
                    throw ConfigError("enhance: phase_source oracle_file requires a clean reference");
                if (clean_for_oracle.size() != noisy.size())
                    throw InputError("enhance: clean reference length does not match input");
                phase = oracle_phase(analyze(clean_for_oracle, config.geom), config.tau_voiced);
                break;
            }
            case PhaseSource::Stftpi: {
                const auto f0 = track_f0(noisy, config.geom);
                phase = stftpi(Y, f0, config.tau_voiced);
                break;
            }
            case PhaseSource::Noisy:
                throw ConfigError("enhance: selected variant requires phase_source stftpi or oracle_file");
        }
    }

    Spectrogram E = enhance_spectrogram(Y, phase, config, stats);
    std::vector<double> y = synthesize(E);
    y.resize(noisy.size(), 0.0); // synthesis covers (nf-1)*hop + window_len samples
    return y;
}

} // namespace stsa
