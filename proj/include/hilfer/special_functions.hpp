#pragma once

// Scalar special functions used by the fractional evolution solvers:
// the gamma function on the real line, its entire reciprocal, and the
// two-parameter Mittag-Leffler function E_{alpha,beta} for real argument
// together with the derivative and integral combinations that show up in
// mode relaxation kernels.

#include <stdexcept>

namespace hilfer {

// Gamma(x) for real x. Poles at x = 0, -1, -2, ... raise std::domain_error.
double gamma(double x);

// 1/Gamma(x), entire in x. Returns exactly 0 at the poles of Gamma.
double rgamma(double x);

enum class MLRegime { series, asymptotic, contour };

const char* regime_name(MLRegime r);

struct MLQuery {
    double alpha;   // 0 < alpha < 2
    double beta;    // -1 < beta <= 2
    double z;       // real; positive z accepted while exp(z^(1/alpha)) stays representable
};

struct EvalReport {
    double value;
    MLRegime regime;
    double est_rel_err;   // a-posteriori bound, >= 0
};

// E_{alpha,beta}(z) = sum_{n>=0} z^n / Gamma(alpha n + beta).
EvalReport mittag_leffler(const MLQuery& q);

inline EvalReport mittag_leffler(double alpha, double beta, double z) {
    return mittag_leffler(MLQuery{alpha, beta, z});
}

// d/dt E_{mu,mu}(-lambda t^mu) for t > 0, 0 < mu <= 1, lambda > 0.
// Equals [E_{mu,mu-1}(z) + (1-mu) E_{mu,mu}(z)] / t with z = -lambda t^mu,
// evaluated through a cancellation-free series when |z| is small.
double ml_mode_deriv(double mu, double lambda, double t);

// int_0^T s^{alpha-1} E_{alpha,alpha}(-lambda s^alpha) ds, the accumulated mass
// of the mode relaxation kernel. Equals (1 - E_{alpha,1}(-lambda T^alpha)) / lambda.
double ml_time_integral(double alpha, double lambda, double T);

namespace detail {

// sin(pi x) with argument reduction done in exact arithmetic.
double sinpi(double x);

// Core evaluator with the beta range relaxed to beta <= 4.7 so that the
// product-integration kernel moments (which need E_{mu,c+2} with c up to
// mu + gamma + ... < 2.7) can reuse it. Public API validates the narrower box.
EvalReport ml_eval(double alpha, double beta, double z);

} // namespace detail

} // namespace hilfer
