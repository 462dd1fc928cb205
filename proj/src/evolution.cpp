#include "hilfer/evolution.hpp"

#include "hilfer/detail/duhamel.hpp"

#include "hilfer/special_functions.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace hilfer {

namespace {

constexpr double qnan = std::numeric_limits<double>::quiet_NaN();

void check_state(const SpectralOperator& op, const ModalState& c, const char* who) {
    if (c.size() != static_cast<std::size_t>(op.modes()))
        throw std::invalid_argument(std::string(who) + ": state length must match the mode count");
}

void check_mu(double mu) {
    if (!(mu > 0.0 && mu <= 1.0))
        throw std::invalid_argument("evolution: mu must lie in (0, 1]");
}

void check_signal(const SpectralOperator& op, const ControlSignal& f, const TimeGrid& grid) {
    if (!f.grid.same_nodes(grid))
        throw std::invalid_argument("evolution: forcing grid does not match the solve grid");
    if (f.modal.size() != grid.nodes.size())
        throw std::invalid_argument("evolution: forcing needs one coefficient vector per node");
    for (const auto& row : f.modal) {
        if (row.size() != static_cast<std::size_t>(op.modes()))
            throw std::invalid_argument("evolution: forcing width must match the mode count");
        for (double v : row)
            if (!std::isfinite(v))
                throw std::invalid_argument("evolution: forcing samples must be finite");
    }
}

using detail::KernelTable;

// Exact product integration of K(t - tau) f(tau) over [0, min(t, horizon)]
// for piecewise-linear nodal samples f (mode stride = modes).
double duhamel_one(const TimeGrid& g, const std::vector<std::vector<double>>& modal, int mode,
                   const KernelTable& kt, double t) {
    const auto& nodes = g.nodes;
    long double acc = 0.0L;
    double f_prev = modal[0][mode];
    double F_prev = kt.F(t), G_prev = kt.G(t);
    for (std::size_t i = 0; i + 1 < nodes.size() && nodes[i] < t; ++i) {
        double a = nodes[i], b = nodes[i + 1];
        if (b <= a) {  // extreme gradings collapse nodes at double precision
            f_prev = modal[i + 1][mode];
            continue;
        }
        double bp = std::min(b, t);
        double sb = t - bp;
        double Fb = kt.F(sb), Gb = kt.G(sb);
        double sa = t - a;
        double slope = (modal[i + 1][mode] - f_prev) / (b - a);
        acc += f_prev * (F_prev - Fb)
             + static_cast<long double>(slope) * (sa * (F_prev - Fb) - (G_prev - Gb));
        f_prev = modal[i + 1][mode];
        F_prev = Fb;
        G_prev = Gb;
    }
    return static_cast<double>(acc);
}

// t^{-gamma} E_{mu,beta}(-lam t^mu); NaN at the singular origin
double forward_amp(const HilferOrder& o, double lam, double t) {
    if (t == 0.0) return o.gamma() > 0.0 ? qnan : 1.0;
    double z = -lam * std::pow(t, o.mu);
    double e = detail::ml_eval(o.mu, o.beta(), z).value;
    return o.gamma() > 0.0 ? std::pow(t, -o.gamma()) * e : e;
}

// (T-t)^{-eta} E_{mu,1-eta}(-lam (T-t)^mu) with eta = nu(1-mu)
double backward_amp(const HilferOrder& o, double lam, double T, double t) {
    double eta = o.nu * (1.0 - o.mu);
    double s = T - t;
    if (s == 0.0) return eta > 0.0 ? qnan : 1.0;
    double z = -lam * std::pow(s, o.mu);
    double e = detail::ml_eval(o.mu, 1.0 - eta, z).value;
    return eta > 0.0 ? std::pow(s, -eta) * e : e;
}

ModalState forced_eval(const SpectralOperator& op, const HilferOrder& order,
                       const ModalState& u0, const ControlSignal* f, double t, bool mean) {
    ModalState out(op.modes(), 0.0);
    double c_order = mean ? order.mu + order.gamma() : order.mu;
    for (int n = 0; n < op.modes(); ++n) {
        double lam = op.eigenvalues[n];
        double amp;
        if (mean) {
            amp = t == 0.0 ? 1.0 : detail::ml_eval(order.mu, 1.0, -lam * std::pow(t, order.mu)).value;
        } else {
            amp = forward_amp(order, lam, t);
        }
        double v = amp * u0[n];
        if (f != nullptr && t > 0.0)
            v += duhamel_one(f->grid, f->modal, n, KernelTable{order.mu, c_order, lam}, t);
        out[n] = v;
    }
    return out;
}

} // namespace

ModalState s_mu_apply(const SpectralOperator& op, double mu, double t, const ModalState& c) {
    check_mu(mu);
    check_state(op, c, "s_mu_apply");
    if (!(t >= 0.0)) throw std::invalid_argument("s_mu_apply: time must be nonnegative");
    ModalState out(c.size());
    for (int n = 0; n < op.modes(); ++n) {
        double z = -op.eigenvalues[n] * std::pow(t, mu);
        out[n] = detail::ml_eval(mu, mu, z).value * c[n];
    }
    return out;
}

ModalState s_mu_deriv_apply(const SpectralOperator& op, double mu, double t,
                            const ModalState& c) {
    check_mu(mu);
    check_state(op, c, "s_mu_deriv_apply");
    if (!(t > 0.0)) throw std::invalid_argument("s_mu_deriv_apply: time must be positive");
    ModalState out(c.size());
    for (int n = 0; n < op.modes(); ++n)
        out[n] = ml_mode_deriv(mu, op.eigenvalues[n], t) * c[n];
    return out;
}

Trajectory solve_homogeneous(const SpectralOperator& op, const HilferOrder& order,
                             const ModalState& u0, const TimeGrid& grid) {
    check_state(op, u0, "solve_homogeneous");
    Trajectory traj;
    traj.grid = grid;
    traj.order = order;
    traj.eigenvalues = op.eigenvalues;
    traj.initial = u0;
    traj.states.resize(grid.nodes.size());
    for (std::size_t j = 0; j < grid.nodes.size(); ++j) {
        ModalState& s = traj.states[j];
        s.resize(op.modes());
        for (int n = 0; n < op.modes(); ++n)
            s[n] = forward_amp(order, op.eigenvalues[n], grid.nodes[j]) * u0[n];
        if (grid.nodes[j] == 0.0 && order.gamma() > 0.0)
            s.assign(op.modes(), qnan);  // singular origin, no state information
    }
    return traj;
}

Trajectory solve_forced(const SpectralOperator& op, const HilferOrder& order,
                        const ModalState& u0, const ControlSignal& f, const TimeGrid& grid) {
    check_state(op, u0, "solve_forced");
    check_signal(op, f, grid);
    Trajectory traj;
    traj.grid = grid;
    traj.order = order;
    traj.eigenvalues = op.eigenvalues;
    traj.initial = u0;
    traj.forced = true;
    traj.forcing = f;
    traj.states.resize(grid.nodes.size());
    for (std::size_t j = 0; j < grid.nodes.size(); ++j) {
        double t = grid.nodes[j];
        if (t == 0.0 && order.gamma() > 0.0) {
            traj.states[j].assign(op.modes(), qnan);
            continue;
        }
        traj.states[j] = forced_eval(op, order, u0, &f, t, false);
    }
    return traj;
}

Trajectory solve_adjoint(const SpectralOperator& op, const HilferOrder& order,
                         const ModalState& v0, const TimeGrid& grid) {
    check_state(op, v0, "solve_adjoint");
    double T = grid.horizon;
    Trajectory traj;
    traj.grid = grid;
    traj.order = order;
    traj.eigenvalues = op.eigenvalues;
    traj.initial = v0;
    traj.adjoint = true;
    traj.states.resize(grid.nodes.size());
    double eta = order.nu * (1.0 - order.mu);
    for (std::size_t j = 0; j < grid.nodes.size(); ++j) {
        ModalState& s = traj.states[j];
        s.resize(op.modes());
        for (int n = 0; n < op.modes(); ++n)
            s[n] = backward_amp(order, op.eigenvalues[n], T, grid.nodes[j]) * v0[n];
        if (grid.nodes[j] == T && eta > 0.0)
            s.assign(op.modes(), qnan);  // singular terminal node
    }
    return traj;
}

ModalState forced_state_at(const SpectralOperator& op, const HilferOrder& order,
                           const ModalState& u0, const ControlSignal& f, double t) {
    check_state(op, u0, "forced_state_at");
    check_signal(op, f, f.grid);
    if (!(t >= 0.0 && t <= f.grid.horizon))
        throw std::invalid_argument("forced_state_at: time outside the signal horizon");
    if (t == 0.0 && order.gamma() > 0.0)
        throw std::invalid_argument("forced_state_at: state is singular at t = 0");
    return forced_eval(op, order, u0, &f, t, false);
}

ModalState forced_mean_at(const SpectralOperator& op, const HilferOrder& order,
                          const ModalState& u0, const ControlSignal& f, double t) {
    check_state(op, u0, "forced_mean_at");
    check_signal(op, f, f.grid);
    if (!(t >= 0.0 && t <= f.grid.horizon))
        throw std::invalid_argument("forced_mean_at: time outside the signal horizon");
    return forced_eval(op, order, u0, &f, t, true);
}

ModalState mean_state(const Trajectory& traj, double t) {
    if (traj.adjoint)
        throw std::invalid_argument("mean_state: adjoint trajectories use adjoint_mean");
    if (!(t >= 0.0 && t <= traj.grid.horizon))
        throw std::invalid_argument("mean_state: time outside the trajectory horizon");
    SpectralOperator shim;  // modal evaluation needs only the spectrum
    shim.kind = DomainKind::discrete;
    shim.eigenvalues = traj.eigenvalues;
    return forced_eval(shim, traj.order, traj.initial, traj.forced ? &traj.forcing : nullptr, t,
                       true);
}

ModalState adjoint_mean(const SpectralOperator& op, const HilferOrder& order,
                        const ModalState& v0, double horizon, double t) {
    check_state(op, v0, "adjoint_mean");
    if (!(horizon > 0.0)) throw std::invalid_argument("adjoint_mean: horizon must be positive");
    if (!(t >= 0.0 && t <= horizon))
        throw std::invalid_argument("adjoint_mean: time outside [0, horizon]");
    ModalState out(op.modes());
    double s = horizon - t;
    for (int n = 0; n < op.modes(); ++n) {
        double amp = s == 0.0
                         ? 1.0
                         : detail::ml_eval(order.mu, 1.0, -op.eigenvalues[n] * std::pow(s, order.mu))
                               .value;
        out[n] = amp * v0[n];
    }
    return out;
}

double tail_estimate(const SpectralOperator& op, double mu, double t,
                     const std::vector<double>& full_coeffs) {
    check_mu(mu);
    if (!(t >= 0.0)) throw std::invalid_argument("tail_estimate: time must be nonnegative");
    if (full_coeffs.size() <= static_cast<std::size_t>(op.modes())) return 0.0;
    double lam_top = op.eigenvalues.back();
    double damp = 1.0 + lam_top * std::pow(t, mu);
    double mass = 0.0;
    for (std::size_t n = op.modes(); n < full_coeffs.size(); ++n)
        mass += full_coeffs[n] * full_coeffs[n];
    return mass / (damp * damp);
}

void export_trajectory(const Trajectory& traj, const std::string& csv_path,
                       const std::string& meta_path) {
    std::FILE* csv = std::fopen(csv_path.c_str(), "w");
    if (csv == nullptr)
        throw std::invalid_argument("export_trajectory: cannot open " + csv_path);
    std::fprintf(csv, "t,mode_index,coefficient\n");
    for (std::size_t j = 0; j < traj.grid.nodes.size(); ++j)
        for (std::size_t n = 0; n < traj.states[j].size(); ++n)
            std::fprintf(csv, "%.16e,%zu,%.16e\n", traj.grid.nodes[j], n, traj.states[j][n]);
    std::fclose(csv);

    nlohmann::json meta;
    meta["order"] = {{"mu", traj.order.mu}, {"nu", traj.order.nu}};
    meta["grid"] = {{"horizon", traj.grid.horizon},
                    {"cells", traj.grid.cells()},
                    {"grading", traj.grid.grading}};
    meta["eigenvalues"] = traj.eigenvalues;
    meta["adjoint"] = traj.adjoint;
    meta["forced"] = traj.forced;
    std::ofstream out(meta_path);
    if (!out) throw std::invalid_argument("export_trajectory: cannot open " + meta_path);
    out << meta.dump(2) << "\n";
}

} // namespace hilfer
