#include "stsa/gains.hpp"
#include "stsa/errors.hpp"
#include "stsa/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <vector>

namespace stsa {

namespace {

// ln M(a,1,-x) for x > 0 where the two Kummer factors of the phase-blind
// form are positive (guaranteed by the Gamma-argument constraints).
// Beyond the public kummer_m range the optimally truncated asymptotic
// keeps improving, so evaluate it directly.
double ln_kummer_neg(double a, double x) {
    if (x <= 1e4) return std::log(kummer_m(a, 1.0, -x));
    // M(a,1,-x) ~ x^{-a}/Gamma(1-a) * [1 + a^2/x + ...]
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < 60; ++k) {
        const double next = term * (a + k) * (a + k) / ((k + 1) * x);
        if (std::abs(next) >= std::abs(term)) break;
        term = next;
        sum += term;
    }
    return -a * std::log(x) - std::lgamma(1.0 - a) + std::log(sum);
}

// Chebyshev proxy for z -> ln D-scaled(-p, z) on z in [-10, 10], cached per
// order. The quadrature behind pcf_d_scaled_ln costs tens of microseconds
// per call, which the von Mises quadrature of the uncertain-phase gain
// multiplies by the node count for every bin of every frame; the function
// is entire in z, so a fixed-degree Chebyshev fit reproduces it to ~1e-10
// and turns each node into a handful of flops. Outside [-10, 10] the
// series branches of pcf_d_scaled_ln are already cheap.
class PcfChebCache {
  public:
    double operator()(double p, double z) {
        if (std::abs(z) >= 10.0) return pcf_d_scaled_ln(-p, z);
        if (p != cached_p_) build(p);
        // Clenshaw recurrence on x = z / 10
        const double x = z / 10.0;
        double b1 = 0.0, b2 = 0.0;
        for (int k = kDegree; k >= 1; --k) {
            const double b0 = 2.0 * x * b1 - b2 + coef_[static_cast<std::size_t>(k)];
            b2 = b1;
            b1 = b0;
        }
        return x * b1 - b2 + coef_[0];
    }

  private:
    static constexpr int kDegree = 63;
    void build(double p) {
        std::array<double, kDegree + 1> f;
        const double pi = std::numbers::pi;
        for (int j = 0; j <= kDegree; ++j) {
            const double x = std::cos(pi * (j + 0.5) / (kDegree + 1));
            f[static_cast<std::size_t>(j)] = pcf_d_scaled_ln(-p, 10.0 * x);
        }
        for (int k = 0; k <= kDegree; ++k) {
            double s = 0.0;
            for (int j = 0; j <= kDegree; ++j)
                s += f[static_cast<std::size_t>(j)] * std::cos(pi * k * (j + 0.5) / (kDegree + 1));
            coef_[static_cast<std::size_t>(k)] = (k == 0 ? 1.0 : 2.0) * s / (kDegree + 1);
        }
        cached_p_ = p;
    }
    double cached_p_ = std::numeric_limits<double>::quiet_NaN();
    std::array<double, kDegree + 1> coef_{};
};

// One cache per order actually in flight; orders recur per frequency bin,
// so a small map holds the whole schedule.
double pcf_ln_cached(double p, double z) {
    static thread_local std::map<double, PcfChebCache> caches;
    return caches[p](p, z);
}

double log_sum_exp(const std::vector<double>& v) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : v) m = std::max(m, x);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

} // namespace

void GainContext::validate() const {
    if (!(mu > 0.0)) throw ConfigError("gain: shape mu must be positive");
    if (!(beta > 0.0)) throw ConfigError("gain: beta must be positive");
    if (!(2.0 * mu - 2.0 * alpha > 0.0))
        throw ConfigError("gain: requires 2*mu - 2*alpha > 0 (Gamma-argument constraint)");
    if (!(2.0 * mu + beta - 2.0 * alpha > 0.0))
        throw ConfigError("gain: requires 2*mu + beta - 2*alpha > 0 (Gamma-argument constraint)");
    if (!(zeta > 0.0) || !(gamma >= 0.0) || !(noise_psd > 0.0))
        throw ConfigError("gain: zeta and noise_psd must be positive, gamma non-negative");
    if (tau < 0.0) throw ConfigError("gain: von Mises concentration tau must be >= 0");
}

double alpha_schedule(double f_hz, double fs_hz, const ParamSchedule& sched) {
    if (fs_hz / 2.0 <= 2000.0)
        throw ConfigError("alpha_schedule: sample rate too low, ramp above 2 kHz undefined");
    if (f_hz <= 2000.0) return sched.alpha_low;
    return (f_hz - 2000.0) * (sched.alpha_high - sched.alpha_low) / (fs_hz / 2.0 - 2000.0) + sched.alpha_low;
}

double beta_schedule(double f_hz, double fs_hz, const ParamSchedule& sched) {
    const double num = std::log10(f_hz / sched.q + sched.l);
    const double den = std::log10(fs_hz / (2.0 * sched.q) + sched.l);
    return num / den * (sched.beta_high - sched.beta_low) + sched.beta_low;
}

double gain_known_phase(const GainContext& ctx) {
    ctx.validate();
    const double nu = -std::sqrt(2.0 * ctx.zeta * ctx.gamma / (ctx.mu + ctx.zeta)) * std::cos(ctx.delta_theta);
    const double p_num = 2.0 * ctx.mu + ctx.beta - 2.0 * ctx.alpha;
    const double p_den = 2.0 * ctx.mu - 2.0 * ctx.alpha;
    double ln_ratio;
    if (nu <= -1e4) {
        // Laplace expansion of both integrals about t = -nu. Forming the
        // ratio analytically cancels the common nu^2/2 term, which would
        // otherwise swamp the O(10) difference of the two logs in double
        // precision.
        const double m = -nu;
        ln_ratio = (p_num - p_den) * std::log(m) +
                   std::log1p((p_num - 1.0) * (p_num - 2.0) / (2.0 * m * m)) -
                   std::log1p((p_den - 1.0) * (p_den - 2.0) / (2.0 * m * m));
    } else {
        ln_ratio = log_gamma(p_num) - log_gamma(p_den) +
                   pcf_d_scaled_ln(-p_num, nu) - pcf_d_scaled_ln(-p_den, nu);
    }
    const double ln_gain = 0.5 * std::log(0.5 * ctx.zeta / (ctx.mu + ctx.zeta)) -
                           0.5 * std::log(ctx.gamma) + ln_ratio / ctx.beta;
    return std::exp(ln_gain);
}

double gain_phase_blind(const GainContext& ctx) {
    ctx.validate();
    const double nu_p = ctx.zeta * ctx.gamma / (ctx.mu + ctx.zeta);
    const double a_num = (2.0 + 2.0 * ctx.alpha - ctx.beta - 2.0 * ctx.mu) / 2.0;
    const double a_den = 1.0 + ctx.alpha - ctx.mu;
    const double ln_ratio = log_gamma((ctx.beta + 2.0 * ctx.mu - 2.0 * ctx.alpha) / 2.0) -
                            log_gamma(ctx.mu - ctx.alpha) +
                            ln_kummer_neg(a_num, nu_p) - ln_kummer_neg(a_den, nu_p);
    const double ln_gain = 0.5 * std::log(ctx.zeta / (ctx.mu + ctx.zeta)) -
                           0.5 * std::log(ctx.gamma) + ln_ratio / ctx.beta;
    return std::exp(ln_gain);
}

double gain_uncertain_phase(const GainContext& ctx, int quadrature_points) {
    ctx.validate();
    if (quadrature_points < 64)
        throw ConfigError("gain_uncertain_phase: need at least 64 quadrature points");
    const double pi = std::numbers::pi;
    const int n = quadrature_points;
    // Cap the effective a-posteriori SNR so the node exponents stay below
    // ~1e8/2, where double precision still resolves their differences. The
    // gain is converged in gamma to better than 1e-4 relative long before
    // the cap engages.
    const double gamma_cap = 1e8 * (ctx.mu + ctx.zeta) / (2.0 * ctx.zeta);
    const double gamma_eff = std::min(ctx.gamma, gamma_cap);
    const double c = std::sqrt(2.0 * ctx.zeta * gamma_eff / (ctx.mu + ctx.zeta));
    // Effective support of the von Mises density; the normalizer cancels
    // between the two moment integrals, as do the quadrature weights. The
    // prior alone would allow truncating at 10/sqrt(tau), but the moment
    // integrand can grow by up to c^2/2 in the log outside that window, so
    // keep widening until the prior's decay dominates that growth with
    // ~e^{-30} to spare.
    double span = pi;
    if (ctx.tau > 25.0) {
        const double need = (0.5 * c * c + 30.0) / ctx.tau;
        span = std::min(pi, std::max(10.0 / std::sqrt(ctx.tau),
                                     need >= 2.0 ? pi : std::acos(1.0 - need)));
    }
    const bool full_circle = span >= pi;
    const double p_num = 2.0 * ctx.mu + ctx.beta - 2.0 * ctx.alpha;
    const double p_den = 2.0 * ctx.mu - 2.0 * ctx.alpha;
    std::vector<double> ln_num, ln_den;
    ln_num.reserve(static_cast<std::size_t>(n) + 1);
    ln_den.reserve(static_cast<std::size_t>(n) + 1);
    const int last = full_circle ? n - 1 : n; // periodic grid drops the duplicate endpoint
    for (int i = 0; i <= last; ++i) {
        const double phi = -span + 2.0 * span * i / n; // theta_s - theta_s_estimate
        const double lw = ctx.tau * (std::cos(phi) - 1.0);
        const double nu = -c * std::cos(ctx.delta_theta - phi);
        double trap = 0.0;
        if (!full_circle && (i == 0 || i == n)) trap = std::log(0.5);
        ln_num.push_back(lw + pcf_ln_cached(p_num, nu) + trap);
        ln_den.push_back(lw + pcf_ln_cached(p_den, nu) + trap);
    }
    const double ln_ratio = log_gamma(p_num) - log_gamma(p_den) +
                            log_sum_exp(ln_num) - log_sum_exp(ln_den);
    const double ln_gain = 0.5 * std::log(0.5 * ctx.zeta / (ctx.mu + ctx.zeta)) -
                           0.5 * std::log(gamma_eff) + ln_ratio / ctx.beta;
    return std::exp(ln_gain);
}

double gain_uncertain_phase_checked(const GainContext& ctx, int quadrature_points) {
    const double coarse = gain_uncertain_phase(ctx, quadrature_points);
    const double fine = gain_uncertain_phase(ctx, 2 * quadrature_points);
    if (std::abs(fine - coarse) > 1e-6 * std::abs(fine))
        std::cerr << "warning: uncertain-phase quadrature not converged at "
                  << quadrature_points << " points (rel change "
                  << std::abs(fine - coarse) / std::abs(fine) << ")\n";
    return fine;
}

double apply_gain_floor(double gain, double floor_db) {
    return std::max(gain, std::pow(10.0, floor_db / 20.0));
}

} // namespace stsa
