#include "hilfer/selftest.hpp"

#include "hilfer/control.hpp"
#include "hilfer/evolution.hpp"
#include "hilfer/fractional_calculus.hpp"
#include "hilfer/special_functions.hpp"
#include "hilfer/spectral_operator.hpp"

#include <cmath>
#include <cstdio>

namespace hilfer {

namespace {

void record(SelfTestResult& r, const char* name, double measured, double bound) {
    bool ok = measured <= bound;
    char line[160];
    std::snprintf(line, sizeof line, "%-4s %-38s %.3e (bound %.1e)\n",
                  ok ? "ok" : "FAIL", name, measured, bound);
    r.log += line;
    ++r.checks;
    if (!ok) ++r.failures;
}

SpectralOperator modes_with(std::vector<double> lams) {
    SpectralOperator op;
    op.kind = DomainKind::discrete;
    op.eigenvalues = std::move(lams);
    return op;
}

} // namespace

SelfTestResult run_selftest() {
    SelfTestResult r;

    // special-function spot values
    double e11 = mittag_leffler(1.0, 1.0, -1.0).value;
    record(r, "mittag-leffler classical point", std::fabs(e11 - std::exp(-1.0)), 1e-13);
    double e51 = mittag_leffler(0.5, 1.0, -1.0).value;
    double erfc_oracle = std::exp(1.0) * std::erfc(1.0);  // E_{1/2,1}(-x) = e^{x^2} erfc(x)
    record(r, "mittag-leffler half-order point", std::fabs(e51 - erfc_oracle), 1e-12);
    double e0 = mittag_leffler(0.75, 0.75, 0.0).value;
    record(r, "mittag-leffler at zero", std::fabs(e0 - 1.0 / gamma(0.75)), 1e-14);
    {
        double t = 0.6, lam = 3.0, h = 1e-5;
        double fd = (mittag_leffler(0.5, 0.5, -lam * std::pow(t + h, 0.5)).value
                         * std::pow(t + h, -0.5)
                     - mittag_leffler(0.5, 0.5, -lam * std::pow(t - h, 0.5)).value
                           * std::pow(t - h, -0.5));
        // d/dt [t^{mu-1} E_{mu,mu}(-lam t^mu)] has no closed form; compare the
        // mode-derivative combination against the centered difference of the
        // full kernel, scaled back by the product rule terms
        double kd = (std::pow(t, -0.5) * ml_mode_deriv(0.5, lam, t)
                     - 0.5 * std::pow(t, -1.5)
                           * mittag_leffler(0.5, 0.5, -lam * std::pow(t, 0.5)).value);
        record(r, "kernel derivative vs finite diff", std::fabs(fd / (2.0 * h) - kd),
               1e-5);
    }

    // power rule: the product-integration integral is exact on linear data
    {
        TimeGrid g = TimeGrid::uniform(1.0, 2048);
        SampledFunction f{g, g.nodes};
        auto I = rl_integral_left(f, 0.5);
        double worst = 0.0;
        for (std::size_t j = 1; j < g.nodes.size(); ++j)
            worst = std::max(worst,
                             std::fabs(I.values[j] - power_rule(0.5, 1.0, g.nodes[j])));
        record(r, "half-order integral power rule", worst, 1e-12);
    }

    // eigenrelation: the sampled mode solves the modal equation
    {
        auto op = modes_with({2.0});
        HilferOrder order{0.5, 0.5};
        TimeGrid g = TimeGrid::graded_front(1.0, 512, 2.0);
        auto traj = solve_homogeneous(op, order, ModalState{1.0}, g);
        std::vector<double> u(g.nodes.size());
        for (std::size_t j = 0; j < u.size(); ++j) u[j] = traj.states[j][0];
        auto d = hilfer_deriv_left(SampledFunction{g, u}, order);
        double sup_got = 0.0, sup_want = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j) {
            double t = g.nodes[j];
            if (t < 0.1 || t > 0.95) continue;
            sup_got = std::max(sup_got, std::fabs(d.values[j] + 2.0 * u[j]));
            sup_want = std::max(sup_want, std::fabs(2.0 * u[j]));
        }
        record(r, "modal eigenrelation band residual", sup_got / sup_want, 1e-2);
    }

    // kernel moment identity through the forced solver
    {
        auto op = modes_with({1.0});
        TimeGrid g = TimeGrid::graded_back(1.0, 64, 2.0);
        ControlSignal f;
        f.grid = g;
        f.modal.assign(g.nodes.size(), ModalState{1.0});
        auto u = forced_state_at(op, HilferOrder{0.5, 0.5}, ModalState{0.0}, f, 1.0);
        double want = 1.0 - mittag_leffler(0.5, 1.0, -1.0).value;
        record(r, "constant-forcing kernel moment", std::fabs(u[0] - want), 1e-12);
    }

    // classical reduction
    {
        auto op = modes_with({1.0, 4.0});
        TimeGrid g = TimeGrid::uniform(1.0, 128);
        auto traj = solve_homogeneous(op, HilferOrder{1.0, 0.3}, ModalState{1.0, 1.0}, g);
        double worst = 0.0;
        for (std::size_t j = 0; j < g.nodes.size(); ++j)
            for (int n = 0; n < 2; ++n)
                worst = std::max(worst, std::fabs(traj.states[j][n]
                                                  - std::exp(-op.eigenvalues[n]
                                                             * g.nodes[j])));
        record(r, "classical limit trajectory", worst, 1e-10);
    }

    // the weighted mean recovers the initial data as t -> 0
    {
        auto op = modes_with({1.0, 4.0});
        TimeGrid g = TimeGrid::graded_front(1.0, 64, 2.0);
        auto traj = solve_homogeneous(op, HilferOrder{0.5, 0.5}, ModalState{1.0, 0.5}, g);
        auto m = mean_state(traj, 1e-8);
        double worst = std::max(std::fabs(m[0] - 1.0), std::fabs(m[1] - 0.5));
        record(r, "mean recovers initial data", worst, 1e-3);
    }

    // steering identity for the exact control
    {
        auto op = modes_with({1.0, 10.0});
        double worst = 0.0;
        for (double mu : {0.5, 1.0})
            for (double v : steering_identity_residual(op, mu, 1.0, 4096))
                worst = std::max(worst, v);
        record(r, "exact-control steering identity", worst, 1e-5);
    }

    // duality pairing between the forced mean and the backward run
    {
        auto op = modes_with({1.0});
        TimeGrid g = TimeGrid::graded_back(1.0, 512, 4.0);
        ControlSignal f;
        f.grid = g;
        f.modal.assign(g.nodes.size(), ModalState{1.0});
        record(r, "duality pairing residual",
               duality_residual(op, HilferOrder{0.5, 0.5}, f, ModalState{1.0}, g), 1e-4);
    }

    // windowed gram floor and localized steering smoke test
    {
        auto op = dirichlet_laplacian_1d(3.14159265358979323846, 3);
        auto gr = window_gram(op, 0.3, 0.6, 3);
        record(r, "window gram floor positive",
               gr.min_eigenvalue > 0.0 ? 0.0 : 1.0, 0.5);
        HilferOrder order{0.5, 0.5};
        TimeGrid g = steering_grid(0.5, 1.0, 32);
        ModalState e1{1.0, 0.0, 0.0};
        SpatialWindow w{WindowKind::interval, 0.3, 0.6, {}};
        auto f = synthesize_localized_control(op, order, w, e1, g, 1e-10);
        record(r, "localized steering smoke run",
               verify_steering(op, order, f, e1, g).rel_error, 1e-2);
    }

    return r;
}

} // namespace hilfer
