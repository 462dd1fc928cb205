#pragma once

#include "hilfer/control_signal.hpp"
#include "hilfer/evolution.hpp"
#include "hilfer/order.hpp"
#include "hilfer/spectral_operator.hpp"
#include "hilfer/time_grid.hpp"

#include <string>
#include <vector>

namespace hilfer {

// Outcome of a steering run: what the forced solve reached at the terminal
// time against what was asked for. Energy is the time quadrature of the
// squared modal samples, i.e. the L2 norm of the control's component in the
// resolved mode span.
struct SteeringReport {
    ModalState achieved;
    ModalState target;
    double abs_error = 0.0;   // l2 distance at the terminal time
    double rel_error = 0.0;   // abs_error / |target|, or abs_error for zero target
    double energy = 0.0;      // squared L2(0,T) norm of the modal samples
    int modes = 0;
    int grid_cells = 0;

    std::string to_json() const;
};

// Space-time samples of a field restricted to a spatial window: one value
// row per time node, columns indexed by the operator sample points inside
// the window. Rows at a singular time layer carry NaN, matching the
// trajectory convention.
struct ObservedField {
    TimeGrid grid;
    std::vector<int> sample_ids;        // operator sample indices inside the window
    std::vector<double> coords;         // their coordinates (interval and discrete kinds)
    std::vector<std::vector<double>> values;
};

// Back-graded grid that resolves the terminal kernel layer of the steering
// problem; the exponent doubles the one needed for the t^{mu-1} family
// because the integrand couples two such kernels.
TimeGrid steering_grid(double mu, double T, int cells);

// Closed-form steering control supported on the whole domain. Per mode,
//   psi_n(t) = (Gamma(mu)^2 / T) (T-t)^{1-mu}
//              [ E_{mu,mu}(-lam_n (T-t)^mu) - 2 t d_s E_{mu,mu}(-lam_n s^mu)|_{s=T-t} ]
//              target_n,
// whose Duhamel image at time T telescopes to exactly target_n. The factor
// (T-t)^{1-mu} cancels the kernel singularity, so the samples stay finite
// up to t = T, where the limit value is filled in analytically.
ControlSignal synthesize_exact_control(const SpectralOperator& op, double mu,
                                       const ModalState& target, const TimeGrid& grid);

// Runs the forced solve from zero data under f and reports the terminal
// state (or the terminal weighted mean when mean_mode is set) against the
// target. Steering from nonzero data reduces to this by subtracting the
// free trajectory from the target first.
SteeringReport verify_steering(const SpectralOperator& op, const HilferOrder& order,
                               const ControlSignal& f, const ModalState& target,
                               const TimeGrid& grid, bool mean_mode = false);

// Per-mode relative defect of the exact-control identity: the Duhamel image
// of the closed-form control at time T, minus the unit target it should
// reproduce. Integrates in the backward variable s = T - t with a
// front-graded grid of `cells` cells, so the terminal layer is resolved far
// below the spacing of representable doubles near T. Nodal verification
// through verify_steering hits a floor of about lam^2 eps^{2 mu} for small
// mu and large lam (the control has a (T-t)^mu cusp whose scale drops below
// the double gap at T); this route is immune to it.
std::vector<double> steering_identity_residual(const SpectralOperator& op, double mu,
                                               double T, int cells);

// Least-squares steering with the control constrained to a spatial window.
// The control ansatz is piecewise constant on up to 32 groups of grid cells
// in time and spans windowed eigenfunction restrictions in space; the
// reachability matrix is assembled column by column from the forced solver,
// then a Tikhonov-regularized minimum-norm solve picks the coefficients.
// `ridge` is dimensionless: the penalty added to the normal equations is
// ridge times the largest squared singular value. ridge = 0 falls back to a
// truncated pseudoinverse (minimum-norm least squares).
ControlSignal synthesize_localized_control(const SpectralOperator& op,
                                           const HilferOrder& order,
                                           const SpatialWindow& window,
                                           const ModalState& target, const TimeGrid& grid,
                                           double ridge, bool mean_mode = false);

inline constexpr double default_control_ridge = 1e-8;

// Both sides of the control-to-adjoint pairing: lhs = (weighted mean at T,
// v0), rhs = int_0^T (f(t), v(t)) dt where v is the backward run from v0.
// The time integral uses the trapezoid rule away from the terminal layer
// and a closed-form kernel moment on the last cell, where v is singular.
struct DualityReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;  // |lhs - rhs|
};

DualityReport duality_pairing(const SpectralOperator& op, const HilferOrder& order,
                              const ControlSignal& f, const ModalState& v0,
                              const TimeGrid& grid);

double duality_residual(const SpectralOperator& op, const HilferOrder& order,
                        const ControlSignal& f, const ModalState& v0,
                        const TimeGrid& grid);

// Backward run from v0 sampled on the window: the map v0 -> v|_omega.
ObservedField adjoint_observation(const SpectralOperator& op, const HilferOrder& order,
                                  const ModalState& v0, const SpatialWindow& window,
                                  const TimeGrid& grid);

// Kernel variant: psi -> (T-t)^{mu-1} sum_n (phi_n, psi) E_{mu,mu}(-lam_n (T-t)^mu) phi_n
// sampled on the window. psi enters through its modal coefficients.
ObservedField adjoint_observation_kernel(const SpectralOperator& op, double mu,
                                         const ModalState& psi_coeffs,
                                         const SpatialWindow& window, const TimeGrid& grid);

// CSV rows (t, mode, value) plus a JSON sidecar with the grid and window.
void export_control(const ControlSignal& f, const std::string& csv_path,
                    const std::string& meta_path);

} // namespace hilfer
