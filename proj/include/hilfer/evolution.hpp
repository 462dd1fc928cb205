#pragma once

#include "hilfer/control_signal.hpp"
#include "hilfer/order.hpp"
#include "hilfer/spectral_operator.hpp"
#include "hilfer/time_grid.hpp"

#include <string>
#include <vector>

namespace hilfer {

// Coefficient vector aligned with a SpectralOperator's modes.
using ModalState = std::vector<double>;

// Modal trajectory: states[j] aligns with grid.nodes[j]. Forward solutions
// with gamma = (1-nu)(1-mu) > 0 blow up like t^{-gamma} as t -> 0, and
// backward (adjoint) solutions mirror that at t = T; the singular node
// holds NaN and carries no state information. Initial data is recovered
// through mean_state, the final datum of an adjoint run through
// adjoint_mean, both of which are regular.
struct Trajectory {
    TimeGrid grid;
    HilferOrder order{1.0, 1.0};
    std::vector<double> eigenvalues;
    ModalState initial;        // u0 for forward runs, v0 for adjoint runs
    bool adjoint = false;
    bool forced = false;
    ControlSignal forcing;     // meaningful only when forced
    std::vector<ModalState> states;
};

// Coefficient-wise action of the solution family at one time:
// c_n -> E_{mu,mu}(-lambda_n t^mu) c_n. At t = 0 this is scaling by
// 1/Gamma(mu).
ModalState s_mu_apply(const SpectralOperator& op, double mu, double t, const ModalState& c);

// Time derivative of the family's action, defined for t > 0 only.
ModalState s_mu_deriv_apply(const SpectralOperator& op, double mu, double t,
                            const ModalState& c);

// Mode amplitudes t^{-gamma} E_{mu,beta}(-lambda_n t^mu) u0_n.
Trajectory solve_homogeneous(const SpectralOperator& op, const HilferOrder& order,
                             const ModalState& u0, const TimeGrid& grid);

// Homogeneous part plus the Duhamel convolution with kernel
// (t-tau)^{mu-1} E_{mu,mu}(-lambda_n (t-tau)^mu), integrated exactly for
// piecewise-linear modal forcing (cell moments in closed form).
Trajectory solve_forced(const SpectralOperator& op, const HilferOrder& order,
                        const ModalState& u0, const ControlSignal& f, const TimeGrid& grid);

// Backward modes (T-t)^{-eta} E_{mu,1-eta}(-lambda_n (T-t)^mu) v0_n with
// eta = nu(1-mu); T is the grid horizon.
Trajectory solve_adjoint(const SpectralOperator& op, const HilferOrder& order,
                         const ModalState& v0, const TimeGrid& grid);

// One-time evaluations of the forced solution that skip the O(J^2) full
// trajectory: the state u(t), and the fractional mean I^{gamma} u(t) whose
// forced part uses the shifted kernel order mu + gamma. The mean is regular
// down to t = 0, where it returns u0 exactly.
ModalState forced_state_at(const SpectralOperator& op, const HilferOrder& order,
                           const ModalState& u0, const ControlSignal& f, double t);
ModalState forced_mean_at(const SpectralOperator& op, const HilferOrder& order,
                          const ModalState& u0, const ControlSignal& f, double t);

// Fractional mean of a stored trajectory at any t in [0, horizon].
ModalState mean_state(const Trajectory& traj, double t);

// Backward mean I_{t,T}^{nu(1-mu)} v with mode amplitude
// E_{mu,1}(-lambda_n (T-t)^mu) v0_n; returns v0 exactly at t = T.
ModalState adjoint_mean(const SpectralOperator& op, const HilferOrder& order,
                        const ModalState& v0, double horizon, double t);

// Truncation diagnostic for coefficients extending past the operator's
// mode count: sum of the squared tail damped by the uniform envelope
// 1/(1 + lambda_M t^mu) of the mode amplitudes (unit constant).
double tail_estimate(const SpectralOperator& op, double mu, double t,
                     const std::vector<double>& full_coeffs);

// CSV rows (t, mode_index, coefficient) plus a JSON metadata sidecar
// carrying the order, grid, and spectrum.
void export_trajectory(const Trajectory& traj, const std::string& csv_path,
                       const std::string& meta_path);

} // namespace hilfer
