#pragma once

#include "hilfer/order.hpp"
#include "hilfer/time_grid.hpp"

namespace hilfer {

// Discrete fractional integrals and derivatives on a shared grid. All
// operators take nodal samples and return nodal values; samples between
// nodes are treated as piecewise linear, and each cell's contribution to a
// convolution integral is evaluated in closed form (product integration).
// That keeps the weakly singular kernels exact per cell instead of pushing
// them through a quadrature rule that cannot resolve the singularity.
//
// Data that blows up at an end of the interval is passed as-is: an inf or
// NaN sample at t=0 (left operators) or t=T (right operators) switches the
// adjacent cell to a power-law model c*s^p fitted through the next two
// samples, integrated in closed form. Piecewise-linear bridging cannot carry
// an integrable singularity, and the derivative compositions below are only
// distinguishable across nu on such data, so flattening the end cell would
// quietly change which operator is computed.

// I^alpha f at every node, integrating from 0 up to t_i. alpha = 0 copies.
SampledFunction rl_integral_left(const SampledFunction& f, double alpha);

// Right-sided companion, integrating from t_i to the horizon.
SampledFunction rl_integral_right(const SampledFunction& f, double alpha);

// Composition I^{nu(1-mu)} d/dt I^{(1-nu)(1-mu)} f. nu = 1 is the Caputo
// derivative, nu = 0 the Riemann-Liouville one, mu = 1 plain d/dt.
SampledFunction hilfer_deriv_left(const SampledFunction& f, const HilferOrder& order);

// Right-sided variant -I_R^{nu(1-mu)} d/dt I_R^{(1-nu)(1-mu)} f; the adjoint
// problem runs this operator backwards from the horizon.
SampledFunction hilfer_deriv_right(const SampledFunction& f, const HilferOrder& order);

// I^alpha t^p = Gamma(p+1)/Gamma(p+1+alpha) t^{p+alpha}, evaluated through
// log-gamma so large exponents stay stable. Needs p > -1 and t > 0.
double power_rule(double alpha, double p, double t);

// Residual of the bilinear identity coupling the left and right derivatives:
//   |integral(v * D^{mu,nu} u) - boundary bracket - integral(u * D_R^{mu,1-nu} v)|.
// Both samples must live on the same grid. Endpoint values of the bracket
// and of both integrands are one-sided limits extrapolated from the two
// nodes nearest each endpoint, so mode pairs singular at either end of the
// interval stay usable.
double integration_by_parts_residual(const SampledFunction& u,
                                     const SampledFunction& v,
                                     const HilferOrder& order);

} // namespace hilfer
