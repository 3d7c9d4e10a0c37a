#ifndef GSNCOP_SPECIAL_HPP
#define GSNCOP_SPECIAL_HPP

namespace gsncop {

double digamma(double x);
double trigamma(double x);

/// Regularized lower incomplete gamma P(a,x), relative error below ~1e-13.
double reg_inc_gamma_p(double a, double x);

/// Inverse of P(a,.) in x for p in (0,1).
double inv_reg_inc_gamma_p(double a, double p);

} // namespace gsncop

#endif
