#pragma once

// Bayesian STSA gain laws under the generalized chi amplitude prior and
// von Mises phase prior, with the auditory-model alpha/beta parameter
// schedules and the gain floor. All gain evaluation is pure and
// bin-parallel; the returned value is the spectral gain A_hat / R.

#include <cstddef>

namespace stsa {

struct GainContext {
    double zeta;        // a-priori SNR (linear)
    double gamma;       // a-posteriori SNR (linear)
    double noise_psd;   // sigma_w^2
    double mu;          // prior shape, > 0
    double alpha;       // cost exponent
    double beta;        // cost exponent, > 0
    double delta_theta; // theta_y - theta_s_estimate, wrapped to (-pi, pi]
    double tau;         // von Mises concentration, >= 0

    // Both Gamma arguments of the closed forms must be positive:
    // 2 mu - 2 alpha > 0 and 2 mu + beta - 2 alpha > 0. Throws ConfigError.
    void validate() const;
};

struct ParamSchedule {
    double alpha_low = 0.2;
    double alpha_high = 0.8;
    double beta_low = 1.0;
    double beta_high = 0.2;
    double q = 16.54; // tonotopic-mapping constant
    double l = 1.0;
};

// alpha(f): alpha_low below 2 kHz, then a linear ramp to alpha_high at
// Nyquist. Throws ConfigError if fs/2 <= 2 kHz (ramp undefined).
double alpha_schedule(double f_hz, double fs_hz, const ParamSchedule& sched = {});

// beta(f): log-frequency interpolation from beta_low at DC to beta_high
// at Nyquist.
double beta_schedule(double f_hz, double fs_hz, const ParamSchedule& sched = {});

// Perfectly known phase estimate (concentration -> infinity): the
// parabolic-cylinder closed form evaluated at
//   nu = -sqrt(2 zeta gamma / (mu + zeta)) cos(delta_theta).
double gain_known_phase(const GainContext& ctx);

// Phase-blind (uniform phase prior): Kummer-function closed form at
// nu' = zeta gamma / (mu + zeta). Independent of delta_theta and tau.
double gain_phase_blind(const GainContext& ctx);

// Uncertain phase estimate: the conditional-moment ratio with the phase
// integrals evaluated by trapezoidal quadrature over the von Mises
// density at the given resolution (>= 64 points). For large tau the grid
// is concentrated on the effective support of the density.
double gain_uncertain_phase(const GainContext& ctx, int quadrature_points);

// As above, but doubles the grid once and warns on stderr if the result
// moved by more than 1e-6 relative.
double gain_uncertain_phase_checked(const GainContext& ctx, int quadrature_points);

// max(gain, 10^{floor_db/20})
double apply_gain_floor(double gain, double floor_db);

} // namespace stsa
