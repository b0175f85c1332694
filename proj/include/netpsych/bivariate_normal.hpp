#pragma once

namespace netpsych {

// P(X <= h, Y <= k) for a standard bivariate normal pair with correlation rho.
// Gauss-Legendre quadrature over the transformed correlation parameter
// (Drezner-Wesolowsky integral, Genz's node selection), absolute accuracy
// better than 1e-14 for |rho| <= 1.
double bvn_cdf(double h, double k, double rho);

// Upper orthant P(X > h, Y > k).
double bvn_upper(double h, double k, double rho);

}  // namespace netpsych
