#ifndef GSNCOP_NORMAL_HPP
#define GSNCOP_NORMAL_HPP

namespace gsncop {

/// Standard normal density.
double norm_pdf(double x);

/// log of the standard normal density.
double norm_logpdf(double x);

/// Standard normal CDF, absolute error below 1e-15.  Saturates to 0/1 in
/// the far tails and accepts +-infinity.
double norm_cdf(double x);

/// Inverse standard normal CDF (Wichura's AS 241 rational approximations,
/// accurate to roughly one part in 1e15).  Requires u in (0,1); returns
/// -+infinity at the endpoints.
double norm_quantile(double u);

/// Bivariate standard normal CDF P(X <= x, Y <= y) with correlation rho.
/// Deterministic Drezner-Wesolowsky/Genz quadrature, absolute error below
/// 1e-14.  x and y may be +-infinity; |rho| >= 1 is rejected.
double bvn_cdf(double x, double y, double rho);

/// P(xlo < X <= xhi, ylo < Y <= yhi) for a standard bivariate normal pair,
/// clamped to [0,1].  Bounds may be +-infinity.
double bvn_rectangle(double xlo, double xhi, double ylo, double yhi, double rho);

} // namespace gsncop

#endif
