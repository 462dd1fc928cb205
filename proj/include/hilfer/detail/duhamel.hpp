#pragma once

#include "hilfer/special_functions.hpp"

#include <cmath>

namespace hilfer::detail {

// Running integrals of the Duhamel kernel K(s) = s^{c-1} E_{mu,c}(-lam s^mu):
//   F(s) = int_0^s K       = s^c     E_{mu,c+1}(-lam s^mu)
//   G(s) = int_0^s sigma K = s^{c+1}[E_{mu,c+1} - E_{mu,c+2}](-lam s^mu)
// With these, the exact integral of K against a linear segment of the data
// follows from two endpoint evaluations per cell. mu = 1 forces c = 1 and
// the kernel collapses to exp(-lam s), handled in closed form.
struct KernelTable {
    double mu, c, lam;

    double F(double s) const {
        if (s <= 0.0) return 0.0;
        if (mu == 1.0) return -std::expm1(-lam * s) / lam;
        double z = -lam * std::pow(s, mu);
        return std::pow(s, c) * ml_eval(mu, c + 1.0, z).value;
    }
    double G(double s) const {
        if (s <= 0.0) return 0.0;
        if (mu == 1.0) {
            double x = lam * s;
            if (x < 1e-4) return s * s * (0.5 - x / 3.0 + x * x / 8.0);
            return (-std::expm1(-x) - x * std::exp(-x)) / (lam * lam);
        }
        double z = -lam * std::pow(s, mu);
        return std::pow(s, c + 1.0)
             * (ml_eval(mu, c + 1.0, z).value - ml_eval(mu, c + 2.0, z).value);
    }
};

} // namespace hilfer::detail
