// Dimensionless shape functions of a first-order Markov drift process.
//
// x is elapsed time (or averaging time) over Tc. For x < 1 the closed forms
// lose most of their digits to cancellation, so a Taylor series is summed
// instead; both branches agree to a few ulp at the switch point.
#pragma once

namespace gyrofde::kernels {

/// Allan variance of a Markov process divided by K^2 Tc:
/// (1/x) * (1 - (3 - 4e^-x + e^-2x) / (2x)).
double allan_markov(double x);

/// Along-track in-flight drift variance divided by K^2 Tc^3 R^2:
/// x - (3 - 4e^-x + e^-2x) / 2.
double atrk_inflight(double x);

/// Along-track turn-on variance divided by K^2 Tc^3 R^2: (1 - e^-x)^2 / 2.
double atrk_turnon(double x);

/// Cross-track in-flight drift variance divided by K^2 Tc^5 v^2:
/// x^3/3 - x^2 + x(1 - 2e^-x) + (1 - e^-2x)/2.
double xtrk_inflight(double x);

/// Cross-track turn-on variance divided by K^2 Tc^5 v^2: (x - 1 + e^-x)^2 / 2.
double xtrk_turnon(double x);

/// x - 1 + e^-x, accurate for small x.
double excess_time(double x);

}  // namespace gyrofde::kernels
