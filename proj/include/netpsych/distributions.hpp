#pragma once

// Scalar distribution functions used across the library: normal CDF/quantile,
// regularized incomplete gamma/beta, and the chi-square / F / t tail areas
// built on them. Everything is plain double precision, accurate to ~1e-12 or
// better, with no external dependencies.

namespace netpsych {

// Standard normal CDF, survival function and density.
double norm_cdf(double x);
double norm_sf(double x);
double norm_pdf(double x);

// Inverse standard normal CDF. Rational approximation refined by one Halley
// step against erfc; |error| < 1e-13 on (0, 1).
double norm_quantile(double p);

// Regularized incomplete gamma P(a, x) and Q(a, x) = 1 - P(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Regularized incomplete beta I_x(a, b).
double inc_beta(double a, double b, double x);

// Upper tail areas.
double chi2_sf(double x, double df);
double f_sf(double x, double df1, double df2);
double t_sf(double x, double df);       // one-sided P(T > x)
double t_two_sided(double x, double df);

}  // namespace netpsych
