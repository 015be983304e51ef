#pragma once

// Special-function kernels used by the closed-form spectral amplitude
// estimators: log-gamma, modified Bessel I_n, the Kummer confluent
// hypergeometric function M(a,b,x), and the parabolic cylinder function
// D_nu(z) in exponentially scaled form.
//
// All functions are pure and safe for concurrent use.

namespace stsa {

// ln Gamma(x) for x > 0. Throws InputError for x <= 0.
double log_gamma(double x);

// Modified Bessel function I_n(x) for integer n >= 0, x >= 0.
// Throws InputError on a bad domain and NumericalError on overflow.
double bessel_i(int n, double x);

// Kummer confluent hypergeometric M(a,b,x), b > 0.
// Power series for x >= 0; the Kummer transformation
// M(a,b,x) = e^x M(b-a,b,-x) for -200 <= x < 0 (avoids the cancellation
// of the alternating series); optimally truncated large-|x| asymptotic
// series for x < -200. |x| <= 1e4. Series caps at 500 terms; exceeding
// the cap throws NumericalError, never silently truncates.
double kummer_m(double a, double b, double x);

// Scaled parabolic cylinder product e^{z^2/4} D_nu(z), nu <= 0.
// Evaluated through the integral representation
//   e^{z^2/4} D_{-p}(z) = (1/Gamma(p)) Int_0^inf t^{p-1} e^{-t^2/2 - z t} dt,
// p = -nu. Throws ConfigError for nu > 0 and NumericalError if the
// result overflows a double (use pcf_d_scaled_ln for very negative z).
double pcf_d_scaled(double nu, double z);

// Natural log of pcf_d_scaled. Finite for the whole operating envelope
// including large negative z where the scaled product itself overflows.
// The gain laws consume only ratios of scaled values, i.e. differences
// of this function.
double pcf_d_scaled_ln(double nu, double z);

} // namespace stsa
