#include "hilfer/control.hpp"

#include "hilfer/detail/duhamel.hpp"
#include "hilfer/runtime.hpp"
#include "hilfer/special_functions.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>

namespace hilfer {

namespace {

constexpr double qnan = std::numeric_limits<double>::quiet_NaN();

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double l2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void check_target(const SpectralOperator& op, const ModalState& target, const char* who) {
    if (target.empty()) throw std::invalid_argument(std::string(who) + ": empty target");
    if (target.size() != static_cast<std::size_t>(op.modes()))
        throw std::invalid_argument(std::string(who) + ": target length must match the mode count");
}

// squared L2(0,T) norm of the modal samples, trapezoid in time
double signal_energy(const ControlSignal& f) {
    std::vector<double> e(f.grid.nodes.size(), 0.0);
    for (std::size_t j = 0; j < e.size(); ++j) e[j] = dot(f.modal[j], f.modal[j]);
    double total = 0.0;
    for (int j = 0; j < f.grid.cells(); ++j) total += 0.5 * (e[j] + e[j + 1]) * f.grid.dt(j);
    return total;
}

// sample indices of the operator grid inside the window
std::vector<int> window_samples(const SpectralOperator& op, const SpatialWindow& w,
                                const char* who) {
    std::vector<int> ids;
    switch (w.kind) {
        case WindowKind::full:
            for (int i = 0; i < op.sample_count(); ++i) ids.push_back(i);
            break;
        case WindowKind::interval: {
            if (op.kind == DomainKind::rectangle)
                throw std::invalid_argument(std::string(who)
                                            + ": rectangle operators support full windows only");
            if (!(w.lo < w.hi))
                throw std::invalid_argument(std::string(who) + ": window has no width");
            for (int i = 0; i < op.sample_count(); ++i) {
                double x = op.sample_coord(i);
                if (x > w.lo && x < w.hi) ids.push_back(i);
            }
            break;
        }
        case WindowKind::mask: {
            if (op.kind != DomainKind::discrete)
                throw std::invalid_argument(std::string(who)
                                            + ": node masks need a discrete operator");
            for (int i : w.mask) {
                if (i < 0 || i >= op.sample_count())
                    throw std::invalid_argument(std::string(who) + ": mask index out of range");
                ids.push_back(i);
            }
            break;
        }
    }
    if (ids.empty())
        throw std::invalid_argument(std::string(who) + ": window contains no sample points");
    return ids;
}

// window overlap matrix (chi_w phi_k, phi_n) for the active modes; identity
// on the full domain
Eigen::MatrixXd window_overlaps(const SpectralOperator& op, const SpatialWindow& w,
                                const char* who) {
    int m = op.modes();
    if (w.kind == WindowKind::full) return Eigen::MatrixXd::Identity(m, m);
    GramResult gr = w.kind == WindowKind::interval ? window_gram(op, w.lo, w.hi, m)
                                                   : window_gram(op, w.mask, m);
    if (!(gr.min_eigenvalue > 0.0))
        throw std::runtime_error(std::string(who)
                                 + ": window cannot reach the requested mode span");
    Eigen::MatrixXd S(m, m);
    for (int k = 0; k < m; ++k)
        for (int n = 0; n < m; ++n) S(k, n) = gr.matrix[k * m + n];
    return S;
}

} // namespace

std::string SteeringReport::to_json() const {
    nlohmann::json j;
    j["achieved"] = achieved;
    j["target"] = target;
    j["abs_error"] = abs_error;
    j["rel_error"] = rel_error;
    j["energy"] = energy;
    j["modes"] = modes;
    j["grid_cells"] = grid_cells;
    return j.dump(2);
}

TimeGrid steering_grid(double mu, double T, int cells) {
    if (!(mu > 0.0 && mu <= 1.0)) throw std::invalid_argument("steering_grid: mu out of range");
    return TimeGrid::graded_back(T, cells, 2.0 * TimeGrid::default_exponent(mu));
}

ControlSignal synthesize_exact_control(const SpectralOperator& op, double mu,
                                       const ModalState& target, const TimeGrid& grid) {
    if (!(mu > 0.0 && mu <= 1.0))
        throw std::invalid_argument("synthesize_exact_control: mu out of range");
    check_target(op, target, "synthesize_exact_control");
    double T = grid.horizon;
    if (!(T > 0.0)) throw std::invalid_argument("synthesize_exact_control: empty horizon");
    std::size_t J = grid.nodes.size() - 1;
    if (J < 2 || T - grid.nodes[J - 1] > 0.25 * T)
        throw std::invalid_argument(
            "synthesize_exact_control: grid cannot resolve the terminal kernel layer");

    double g2 = gamma(mu) * gamma(mu);
    ControlSignal f;
    f.grid = grid;
    f.modal.assign(grid.nodes.size(), ModalState(op.modes(), 0.0));
    for (std::size_t j = 0; j < grid.nodes.size(); ++j) {
        double t = grid.nodes[j];
        double s = T - t;
        for (int n = 0; n < op.modes(); ++n) {
            double lam = op.eigenvalues[n];
            double val;
            if (s == 0.0) {
                // limit of the cancellation (T-t)^{1-mu} * kernel derivative
                val = mu < 1.0 ? 2.0 * mu * lam * g2 / gamma(2.0 * mu)
                               : (1.0 + 2.0 * T * lam) / T;
            } else {
                double bracket = detail::ml_eval(mu, mu, -lam * std::pow(s, mu)).value
                               - 2.0 * t * ml_mode_deriv(mu, lam, s);
                val = (g2 / T) * std::pow(s, 1.0 - mu) * bracket;
            }
            val *= target[n];
            if (!std::isfinite(val))
                throw std::runtime_error("synthesize_exact_control: nonfinite sample");
            f.modal[j][n] = val;
        }
    }
    return f;
}

SteeringReport verify_steering(const SpectralOperator& op, const HilferOrder& order,
                               const ControlSignal& f, const ModalState& target,
                               const TimeGrid& grid, bool mean_mode) {
    check_target(op, target, "verify_steering");
    if (!f.grid.same_nodes(grid))
        throw std::invalid_argument("verify_steering: control grid does not match");
    ModalState zero(op.modes(), 0.0);
    double T = grid.horizon;
    SteeringReport rep;
    rep.achieved = mean_mode ? forced_mean_at(op, order, zero, f, T)
                             : forced_state_at(op, order, zero, f, T);
    rep.target = target;
    std::vector<double> diff(target.size());
    for (std::size_t n = 0; n < target.size(); ++n) diff[n] = rep.achieved[n] - target[n];
    rep.abs_error = l2(diff);
    double tn = l2(target);
    rep.rel_error = tn > 0.0 ? rep.abs_error / tn : rep.abs_error;
    rep.energy = signal_energy(f);
    rep.modes = op.modes();
    rep.grid_cells = grid.cells();
    return rep;
}

std::vector<double> steering_identity_residual(const SpectralOperator& op, double mu,
                                               double T, int cells) {
    if (!(mu > 0.0 && mu <= 1.0))
        throw std::invalid_argument("steering_identity_residual: mu out of range");
    if (!(T > 0.0)) throw std::invalid_argument("steering_identity_residual: empty horizon");
    if (cells < 2) throw std::invalid_argument("steering_identity_residual: too few cells");

    // Substituting s = T - tau turns the Duhamel image of the control into
    //   int_0^T s^{mu-1} E_{mu,mu}(-lam s^mu) psi(T - s) ds,
    // integrated by the same kernel-moment product rule as the forced solver
    // but on a front-graded grid in s itself. Near s = 0 the control varies
    // on the scale lam^{-1/mu}, which for small mu sits far below the gap
    // between representable doubles at T; sampling in s keeps it resolved.
    TimeGrid sg = TimeGrid::graded_front(T, cells, 2.0 * TimeGrid::default_exponent(mu));
    double g2 = gamma(mu) * gamma(mu);
    std::vector<double> out(op.modes());
    for (int n = 0; n < op.modes(); ++n) {
        double lam = op.eigenvalues[n];
        auto psi_back = [&](double s) {
            if (s == 0.0)
                return mu < 1.0 ? 2.0 * mu * lam * g2 / gamma(2.0 * mu)
                                : (1.0 + 2.0 * T * lam) / T;
            double bracket = detail::ml_eval(mu, mu, -lam * std::pow(s, mu)).value
                           - 2.0 * (T - s) * ml_mode_deriv(mu, lam, s);
            return (g2 / T) * std::pow(s, 1.0 - mu) * bracket;
        };
        detail::KernelTable kt{mu, mu, lam};
        long double acc = 0.0L;
        double g_prev = psi_back(sg.nodes[0]);
        double F_prev = kt.F(sg.nodes[0]), G_prev = kt.G(sg.nodes[0]);
        for (std::size_t i = 0; i + 1 < sg.nodes.size(); ++i) {
            double a = sg.nodes[i], b = sg.nodes[i + 1];
            double g_b = psi_back(b);
            if (b <= a) { g_prev = g_b; continue; }
            double Fb = kt.F(b), Gb = kt.G(b);
            double slope = (g_b - g_prev) / (b - a);
            acc += g_prev * (Fb - F_prev)
                 + static_cast<long double>(slope) * ((Gb - G_prev) - a * (Fb - F_prev));
            g_prev = g_b;
            F_prev = Fb;
            G_prev = Gb;
        }
        out[n] = std::fabs(static_cast<double>(acc) - 1.0);
    }
    return out;
}

ControlSignal synthesize_localized_control(const SpectralOperator& op,
                                           const HilferOrder& order,
                                           const SpatialWindow& window,
                                           const ModalState& target, const TimeGrid& grid,
                                           double ridge, bool mean_mode) {
    check_target(op, target, "synthesize_localized_control");
    if (!(ridge >= 0.0))
        throw std::invalid_argument("synthesize_localized_control: ridge must be >= 0");
    int M = op.modes();
    int J = grid.cells();
    if (J < 1) throw std::invalid_argument("synthesize_localized_control: empty grid");
    Eigen::MatrixXd S = window_overlaps(op, window, "synthesize_localized_control");

    // piecewise-constant time basis on contiguous cell groups; node j sits in
    // the group of cell j (closed left, open right), terminal node in the last
    int n_g = std::min(32, J);
    auto group_of_cell = [&](int c) {
        int g = static_cast<int>((static_cast<long long>(c) * n_g) / J);
        return std::min(g, n_g - 1);
    };
    std::vector<int> node_group(grid.nodes.size());
    for (int j = 0; j < J; ++j) node_group[j] = group_of_cell(j);
    node_group[J] = n_g - 1;
    std::vector<double> duration(n_g, 0.0);
    for (int c = 0; c < J; ++c) duration[group_of_cell(c)] += grid.dt(c);

    // reachability matrix, one forced solve per basis control; columns are
    // independent, so they split across workers
    double T = grid.horizon;
    int cols = n_g * M;
    Eigen::MatrixXd L(M, cols);
    auto fill_columns = [&](int col_lo, int col_hi) {
        ModalState zero(M, 0.0);
        ControlSignal basis;
        basis.grid = grid;
        basis.window = window;
        for (int col = col_lo; col < col_hi; ++col) {
            int g = col / M, k = col % M;
            basis.modal.assign(grid.nodes.size(), ModalState(M, 0.0));
            for (std::size_t j = 0; j < grid.nodes.size(); ++j)
                if (node_group[j] == g)
                    for (int n = 0; n < M; ++n) basis.modal[j][n] = S(k, n);
            ModalState img = mean_mode ? forced_mean_at(op, order, zero, basis, T)
                                       : forced_state_at(op, order, zero, basis, T);
            for (int n = 0; n < M; ++n) L(n, col) = img[n];
        }
    };
    int workers = std::min(thread_count(), cols);
    if (workers <= 1) {
        fill_columns(0, cols);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(fill_columns, cols * w / workers, cols * (w + 1) / workers);
        for (auto& th : pool) th.join();
    }

    // duration-weighted Tikhonov: penalize sum_g dur_g |c_g|^2, solved by an
    // SVD of the column-rescaled map; ridge scales with the top singular value
    Eigen::MatrixXd B = L;
    for (int g = 0; g < n_g; ++g)
        B.middleCols(g * M, M) /= std::sqrt(duration[g]);
    Eigen::VectorXd b(M);
    for (int n = 0; n < M; ++n) b(n) = target[n];
    Eigen::BDCSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
    double smax = svd.singularValues()(0);
    if (!(smax > 0.0))
        throw std::runtime_error("synthesize_localized_control: reachability map is zero");
    Eigen::VectorXd ub = svd.matrixU().transpose() * b;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(svd.matrixV().cols());
    for (int i = 0; i < svd.singularValues().size(); ++i) {
        double s = svd.singularValues()(i);
        if (ridge == 0.0) {
            if (s <= 1e-13 * smax) continue;  // minimum-norm cut
            y(i) = ub(i) / s;
        } else {
            y(i) = s * ub(i) / (s * s + ridge * smax * smax);
        }
    }
    Eigen::VectorXd c = svd.matrixV() * y;
    for (int g = 0; g < n_g; ++g)
        c.segment(g * M, M) /= std::sqrt(duration[g]);

    ControlSignal f;
    f.grid = grid;
    f.window = window;
    f.modal.assign(grid.nodes.size(), ModalState(M, 0.0));
    for (std::size_t j = 0; j < grid.nodes.size(); ++j) {
        int g = node_group[j];
        for (int n = 0; n < M; ++n) {
            double v = 0.0;
            for (int k = 0; k < M; ++k) v += c(g * M + k) * S(k, n);
            f.modal[j][n] = v;
        }
    }
    return f;
}

DualityReport duality_pairing(const SpectralOperator& op, const HilferOrder& order,
                              const ControlSignal& f, const ModalState& v0,
                              const TimeGrid& grid) {
    check_target(op, v0, "duality_pairing");
    if (!f.grid.same_nodes(grid))
        throw std::invalid_argument("duality_pairing: control grid does not match");
    int M = op.modes();
    int J = grid.cells();
    double T = grid.horizon;
    ModalState zero(M, 0.0);

    double lhs = dot(forced_mean_at(op, order, zero, f, T), v0);

    auto v = solve_adjoint(op, order, v0, grid);
    std::vector<double> pairing(grid.nodes.size(), 0.0);
    for (int j = 0; j < J; ++j) pairing[j] = dot(f.modal[j], v.states[j]);
    double rhs = 0.0;
    for (int j = 0; j + 1 < J; ++j) rhs += 0.5 * (pairing[j] + pairing[j + 1]) * grid.dt(j);
    // last cell in closed form: v is singular there, so integrate the kernel
    // moment against the frozen left-endpoint value of f
    double eta = order.nu * (1.0 - order.mu);
    double h = T - grid.nodes[J - 1];
    for (int n = 0; n < M; ++n) {
        double moment = std::pow(h, 1.0 - eta)
                      * detail::ml_eval(order.mu, 2.0 - eta,
                                        -op.eigenvalues[n] * std::pow(h, order.mu))
                            .value;
        rhs += f.modal[J - 1][n] * v0[n] * moment;
    }
    return DualityReport{lhs, rhs, std::fabs(lhs - rhs)};
}

double duality_residual(const SpectralOperator& op, const HilferOrder& order,
                        const ControlSignal& f, const ModalState& v0,
                        const TimeGrid& grid) {
    return duality_pairing(op, order, f, v0, grid).residual;
}

ObservedField adjoint_observation(const SpectralOperator& op, const HilferOrder& order,
                                  const ModalState& v0, const SpatialWindow& window,
                                  const TimeGrid& grid) {
    check_target(op, v0, "adjoint_observation");
    auto ids = window_samples(op, window, "adjoint_observation");
    auto traj = solve_adjoint(op, order, v0, grid);
    ObservedField obs;
    obs.grid = grid;
    obs.sample_ids = ids;
    if (op.kind != DomainKind::rectangle)
        for (int i : ids) obs.coords.push_back(op.sample_coord(i));
    obs.values.assign(grid.nodes.size(), std::vector<double>(ids.size(), 0.0));
    for (std::size_t j = 0; j < grid.nodes.size(); ++j)
        for (std::size_t q = 0; q < ids.size(); ++q) {
            double acc = 0.0;
            for (int n = 0; n < op.modes(); ++n)
                acc += traj.states[j][n] * op.basis_sample(n, ids[q]);
            obs.values[j][q] = acc;
        }
    return obs;
}

ObservedField adjoint_observation_kernel(const SpectralOperator& op, double mu,
                                         const ModalState& psi_coeffs,
                                         const SpatialWindow& window, const TimeGrid& grid) {
    if (!(mu > 0.0 && mu <= 1.0))
        throw std::invalid_argument("adjoint_observation_kernel: mu out of range");
    check_target(op, psi_coeffs, "adjoint_observation_kernel");
    auto ids = window_samples(op, window, "adjoint_observation_kernel");
    double T = grid.horizon;
    ObservedField obs;
    obs.grid = grid;
    obs.sample_ids = ids;
    if (op.kind != DomainKind::rectangle)
        for (int i : ids) obs.coords.push_back(op.sample_coord(i));
    obs.values.assign(grid.nodes.size(), std::vector<double>(ids.size(), 0.0));
    std::vector<double> amp(op.modes());
    for (std::size_t j = 0; j < grid.nodes.size(); ++j) {
        double s = T - grid.nodes[j];
        if (s == 0.0 && mu < 1.0) {
            obs.values[j].assign(ids.size(), qnan);  // kernel blows up at t = T
            continue;
        }
        double factor = mu == 1.0 ? 1.0 : std::pow(s, mu - 1.0);
        for (int n = 0; n < op.modes(); ++n)
            amp[n] = psi_coeffs[n]
                   * detail::ml_eval(mu, mu, -op.eigenvalues[n] * std::pow(s, mu)).value;
        for (std::size_t q = 0; q < ids.size(); ++q) {
            double acc = 0.0;
            for (int n = 0; n < op.modes(); ++n) acc += amp[n] * op.basis_sample(n, ids[q]);
            obs.values[j][q] = factor * acc;
        }
    }
    return obs;
}

void export_control(const ControlSignal& f, const std::string& csv_path,
                    const std::string& meta_path) {
    std::FILE* csv = std::fopen(csv_path.c_str(), "w");
    if (csv == nullptr) throw std::invalid_argument("export_control: cannot open " + csv_path);
    std::fprintf(csv, "t,mode_index,value\n");
    for (std::size_t j = 0; j < f.grid.nodes.size(); ++j)
        for (std::size_t n = 0; n < f.modal[j].size(); ++n)
            std::fprintf(csv, "%.16e,%zu,%.16e\n", f.grid.nodes[j], n, f.modal[j][n]);
    std::fclose(csv);

    nlohmann::json meta;
    meta["grid"] = {{"horizon", f.grid.horizon},
                    {"cells", f.grid.cells()},
                    {"grading", f.grid.grading}};
    const char* kinds[] = {"full", "interval", "mask"};
    meta["window"]["kind"] = kinds[static_cast<int>(f.window.kind)];
    if (f.window.kind == WindowKind::interval) {
        meta["window"]["lo"] = f.window.lo;
        meta["window"]["hi"] = f.window.hi;
    }
    if (f.window.kind == WindowKind::mask) meta["window"]["mask"] = f.window.mask;
    std::ofstream out(meta_path);
    if (!out) throw std::invalid_argument("export_control: cannot open " + meta_path);
    out << meta.dump(2) << "\n";
}

} // namespace hilfer
