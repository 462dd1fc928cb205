#pragma once

#include <stdexcept>

namespace hilfer {

// Interpolation pair (mu, nu) for the two-parameter derivative
// I^{nu(1-mu)} d/dt I^{(1-nu)(1-mu)}. nu = 0 gives the Riemann-Liouville
// form, nu = 1 the Caputo form, and mu = 1 collapses both to d/dt.
struct HilferOrder {
    double mu;
    double nu;

    HilferOrder(double mu_, double nu_) : mu(mu_), nu(nu_) {
        if (!(mu > 0.0 && mu <= 1.0)) throw std::invalid_argument("order: mu must lie in (0, 1]");
        if (!(nu >= 0.0 && nu <= 1.0)) throw std::invalid_argument("order: nu must lie in [0, 1]");
    }

    // beta + gamma = 1 always; they reduce to mu = 1 and 0 in the classical limit
    double beta() const { return mu + nu * (1.0 - mu); }
    double gamma() const { return (1.0 - nu) * (1.0 - mu); }
};

} // namespace hilfer
