#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hilfer/fractional_calculus.hpp"
#include "hilfer/special_functions.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

using namespace hilfer;

namespace {

SampledFunction sample(const TimeGrid& g, const std::function<double(double)>& fn) {
    SampledFunction s{g, std::vector<double>(g.nodes.size())};
    for (std::size_t j = 0; j < g.nodes.size(); ++j) s.values[j] = fn(g.nodes[j]);
    return s;
}

// Normalized sup-norm residual over the time band [lo, hi]:
// sup |got - want| / sup |want|, both sups over nodes inside the band.
double band_resid(const TimeGrid& g, const std::vector<double>& got,
                  const std::function<double(double)>& want, double lo, double hi) {
    double worst = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < g.nodes.size(); ++j) {
        double t = g.nodes[j];
        if (t < lo || t > hi) continue;
        double w = want(t);
        scale = std::max(scale, std::fabs(w));
        worst = std::max(worst, std::fabs(got[j] - w));
    }
    REQUIRE(scale > 0.0);
    return worst / scale;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j)
        worst = std::max(worst, std::fabs(a[j] - b[j]));
    return worst;
}

// Forward eigenmode t^{beta-1} E_{mu,beta}(-lambda t^mu); unbounded at t = 0
// when beta < 1, which the sampling convention encodes as an inf node value.
SampledFunction forward_mode(const TimeGrid& g, double mu, double nu, double lambda) {
    double beta = mu + nu * (1.0 - mu);
    return sample(g, [=](double t) {
        return std::pow(t, beta - 1.0) * detail::ml_eval(mu, beta, -lambda * std::pow(t, mu)).value;
    });
}

// Backward eigenmode of the right-sided derivative of order (mu, nu):
// (T-t)^{beta-1} E_{mu,beta}(-lambda (T-t)^mu).
SampledFunction backward_mode(const TimeGrid& g, double mu, double nu, double lambda) {
    double beta = mu + nu * (1.0 - mu);
    double T = g.nodes.back();
    return sample(g, [=](double t) {
        double s = T - t;
        return std::pow(s, beta - 1.0) * detail::ml_eval(mu, beta, -lambda * std::pow(s, mu)).value;
    });
}

} // namespace

TEST_CASE("power rule closed form") {
    CHECK(power_rule(1.0, 1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(power_rule(0.5, 1.0, 1.0) == doctest::Approx(0.7522527780636750).epsilon(1e-14));
    CHECK(power_rule(0.0, 0.3, 2.0) == doctest::Approx(std::pow(2.0, 0.3)).epsilon(1e-15));
    // generic case vs direct gamma-ratio evaluation
    double a = 0.7, p = 1.3, t = 2.5;
    double want = hilfer::gamma(p + 1.0) / hilfer::gamma(p + a + 1.0) * std::pow(t, p + a);
    CHECK(power_rule(a, p, t) == doctest::Approx(want).epsilon(1e-13));
    // near the lower exponent limit the gamma ratio must stay finite
    CHECK(std::isfinite(power_rule(0.5, -0.999, 1.0)));

    CHECK_THROWS_AS(power_rule(-0.5, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(power_rule(0.5, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(power_rule(0.5, -1.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(power_rule(0.5, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(power_rule(0.5, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("left integral exact on piecewise linear data") {
    TimeGrid g = TimeGrid::uniform(1.0, 64);
    SampledFunction f = sample(g, [](double t) { return t; });

    SUBCASE("order one gives the running integral") {
        SampledFunction I = rl_integral_left(f, 1.0);
        for (std::size_t j = 0; j < g.nodes.size(); ++j)
            CHECK(std::fabs(I.values[j] - 0.5 * g.nodes[j] * g.nodes[j]) < 1e-14);
    }
    SUBCASE("half order matches the power rule at every node") {
        SampledFunction I = rl_integral_left(f, 0.5);
        CHECK(I.values[0] == 0.0);
        for (std::size_t j = 1; j < g.nodes.size(); ++j)
            CHECK(std::fabs(I.values[j] - power_rule(0.5, 1.0, g.nodes[j])) < 1e-13);
        CHECK(I.values.back() == doctest::Approx(0.7522527780636750).epsilon(1e-13));
    }
    SUBCASE("order zero is the identity") {
        SampledFunction I = rl_integral_left(f, 0.0);
        CHECK(sup_diff(I.values, f.values) == 0.0);
    }
    SUBCASE("affine data on a graded grid") {
        TimeGrid gg = TimeGrid::graded_front(1.0, 200, 2.0);
        SampledFunction h = sample(gg, [](double t) { return 2.0 * t + 0.25; });
        SampledFunction I = rl_integral_left(h, 0.7);
        CHECK(I.values[0] == 0.0);
        for (std::size_t j = 1; j < gg.nodes.size(); ++j) {
            double t = gg.nodes[j];
            double want = 2.0 * power_rule(0.7, 1.0, t) + 0.25 * power_rule(0.7, 0.0, t);
            CHECK(std::fabs(I.values[j] - want) < 1e-13);
        }
    }
}

TEST_CASE("right integral exact on piecewise linear data") {
    TimeGrid g = TimeGrid::uniform(1.0, 64);

    SUBCASE("constant data, order one") {
        SampledFunction f = sample(g, [](double) { return 1.0; });
        SampledFunction I = rl_integral_right(f, 1.0);
        CHECK(I.values[0] == doctest::Approx(1.0).epsilon(1e-14));
        for (std::size_t j = 0; j < g.nodes.size(); ++j)
            CHECK(std::fabs(I.values[j] - (1.0 - g.nodes[j])) < 1e-14);
    }
    SUBCASE("constant data, half order") {
        SampledFunction f = sample(g, [](double) { return 1.0; });
        SampledFunction I = rl_integral_right(f, 0.5);
        CHECK(I.values[0] == doctest::Approx(1.1283791670955126).epsilon(1e-13));
        for (std::size_t j = 0; j < g.nodes.size(); ++j) {
            double want = std::sqrt(1.0 - g.nodes[j]) / hilfer::gamma(1.5);
            CHECK(std::fabs(I.values[j] - want) < 1e-13);
        }
    }
    SUBCASE("linear data, half order") {
        SampledFunction f = sample(g, [](double t) { return t; });
        SampledFunction I = rl_integral_right(f, 0.5);
        for (std::size_t j = 0; j < g.nodes.size(); ++j) {
            double t = g.nodes[j];
            double want = ((2.0 / 3.0) * std::pow(1.0 - t, 1.5)
                           + 2.0 * t * std::sqrt(1.0 - t)) / hilfer::gamma(0.5);
            CHECK(std::fabs(I.values[j] - want) < 1e-13);
        }
    }
    SUBCASE("order zero is the identity") {
        SampledFunction f = sample(g, [](double t) { return std::cos(t); });
        SampledFunction I = rl_integral_right(f, 0.0);
        CHECK(sup_diff(I.values, f.values) == 0.0);
    }
}

TEST_CASE("quadrature converges at first order or better on smooth data") {
    // t^{3/2} is not piecewise linear, so the node values pick up the
    // interpolation error; it should vanish at order >= 1.
    double prev = 0.0;
    for (int J : {128, 256, 512}) {
        TimeGrid g = TimeGrid::uniform(1.0, J);
        SampledFunction f = sample(g, [](double t) { return std::pow(t, 1.5); });
        SampledFunction I = rl_integral_left(f, 0.5);
        double worst = 0.0;
        for (int j = 1; j <= J; ++j)
            worst = std::max(worst, std::fabs(I.values[j] - power_rule(0.5, 1.5, g.nodes[j])));
        if (prev > 0.0) {
            double order = std::log2(prev / worst);
            CHECK(order >= 1.0);
        }
        prev = worst;
        CHECK(worst < 1e-4);
    }
}

TEST_CASE("semigroup property of repeated fractional integration") {
    const double orders[] = {0.25, 0.5, 0.75};

    SUBCASE("uniform grid, data vanishing at the origin") {
        double prev = 0.0;
        for (int J : {256, 512}) {
            TimeGrid g = TimeGrid::uniform(1.0, J);
            SampledFunction f = sample(g, [](double t) { return std::sin(2.0 * t); });
            double worst = 0.0;
            for (double a : orders)
                for (double b : orders) {
                    SampledFunction two = rl_integral_left(rl_integral_left(f, b), a);
                    SampledFunction one = rl_integral_left(f, a + b);
                    worst = std::max(worst, sup_diff(two.values, one.values));
                }
            CHECK(worst <= 0.02 / J);  // well under one grid spacing
            if (prev > 0.0) CHECK(worst < prev);
            prev = worst;
        }
    }
    SUBCASE("graded grid, data finite but nonzero at the origin") {
        double prev = 0.0;
        for (int J : {256, 512}) {
            TimeGrid g = TimeGrid::graded_front(1.0, J, 2.0);
            double hmax = 0.0;
            for (int j = 0; j < J; ++j) hmax = std::max(hmax, g.dt(j));
            SampledFunction f =
                sample(g, [](double t) { return std::sin(2.0 * t) + 0.5 * std::cos(t); });
            double worst = 0.0;
            for (double a : orders)
                for (double b : orders) {
                    SampledFunction two = rl_integral_left(rl_integral_left(f, b), a);
                    SampledFunction one = rl_integral_left(f, a + b);
                    worst = std::max(worst, sup_diff(two.values, one.values));
                }
            CHECK(worst <= 0.1 * hmax);
            if (prev > 0.0) CHECK(worst <= 0.65 * prev);
            prev = worst;
        }
    }
}

TEST_CASE("fractional integration commutes with convolution") {
    int J = 512;
    TimeGrid g = TimeGrid::uniform(1.0, J);
    SampledFunction f = sample(g, [](double t) { return std::sin(2.0 * t); });
    SampledFunction gfun = sample(g, [](double t) { return std::cos(t); });

    auto convolve = [&](const std::vector<double>& a, const std::vector<double>& b) {
        // trapezoid rule on the convolution integral at each node
        std::vector<double> out(a.size(), 0.0);
        double h = 1.0 / J;
        for (int i = 0; i <= J; ++i) {
            double acc = 0.0;
            for (int j = 0; j <= i; ++j) {
                double w = (j == 0 || j == i) ? 0.5 : 1.0;
                acc += w * a[i - j] * b[j];
            }
            out[i] = acc * h;
        }
        return out;
    };

    SampledFunction If = rl_integral_left(f, 0.5);
    SampledFunction Ig = rl_integral_left(gfun, 0.5);
    std::vector<double> lhs = convolve(If.values, gfun.values);
    std::vector<double> rhs = convolve(f.values, Ig.values);
    CHECK(sup_diff(lhs, rhs) < 1e-4);
}

TEST_CASE("derivative reduces to classical cases") {
    SUBCASE("constants are annihilated when the inner weight is absent") {
        TimeGrid g = TimeGrid::uniform(1.0, 128);
        SampledFunction f = sample(g, [](double) { return 3.5; });
        SampledFunction D = hilfer_deriv_left(f, HilferOrder(0.5, 1.0));
        for (double v : D.values) CHECK(std::fabs(v) < 1e-12);
        SampledFunction Dr = hilfer_deriv_right(f, HilferOrder(0.5, 1.0));
        for (double v : Dr.values) CHECK(std::fabs(v) < 1e-12);
    }
    SUBCASE("order one left derivative is exact on quadratics") {
        TimeGrid g = TimeGrid::uniform(1.0, 64);
        SampledFunction f = sample(g, [](double t) { return 1.0 + 2.0 * t - 3.0 * t * t; });
        SampledFunction D = hilfer_deriv_left(f, HilferOrder(1.0, 0.3));
        for (std::size_t j = 0; j < g.nodes.size(); ++j)
            CHECK(std::fabs(D.values[j] - (2.0 - 6.0 * g.nodes[j])) < 1e-10);
    }
    SUBCASE("order one right derivative negates the slope") {
        TimeGrid g = TimeGrid::uniform(2.0, 64);
        SampledFunction f = sample(g, [](double t) { return 4.0 - 1.5 * t; });
        SampledFunction D = hilfer_deriv_right(f, HilferOrder(1.0, 0.7));
        for (double v : D.values) CHECK(std::fabs(v - 1.5) < 1e-10);
    }
    SUBCASE("half order derivative of t with full inner weight") {
        TimeGrid g = TimeGrid::uniform(1.0, 256);
        SampledFunction f = sample(g, [](double t) { return t; });
        SampledFunction D = hilfer_deriv_left(f, HilferOrder(0.5, 1.0));
        for (std::size_t j = 0; j < g.nodes.size(); ++j)
            CHECK(std::fabs(D.values[j] - std::sqrt(g.nodes[j]) / hilfer::gamma(1.5)) < 1e-12);
    }
    SUBCASE("half order derivative of t with no inner weight") {
        TimeGrid g = TimeGrid::uniform(1.0, 512);
        SampledFunction f = sample(g, [](double t) { return t; });
        SampledFunction D = hilfer_deriv_left(f, HilferOrder(0.5, 0.0));
        CHECK(band_resid(g, D.values,
                         [](double t) { return std::sqrt(t) / hilfer::gamma(1.5); },
                         0.1, 0.95) < 5e-5);
    }
}

TEST_CASE("eigenfunction relations of the fractional derivative") {
    SUBCASE("forward mode, interpolating type") {
        double mu = 0.5, nu = 0.5, lambda = 2.0;
        TimeGrid g = TimeGrid::graded_front(1.0, 2048, 3.0);
        SampledFunction f = forward_mode(g, mu, nu, lambda);
        SampledFunction D = hilfer_deriv_left(f, HilferOrder(mu, nu));
        double r = band_resid(g, D.values,
                              [&](double t) {
                                  double beta = mu + nu * (1.0 - mu);
                                  return -lambda * std::pow(t, beta - 1.0)
                                       * detail::ml_eval(mu, beta, -lambda * std::pow(t, mu)).value;
                              },
                              0.05, 0.95);
        CHECK(r < 2e-4);
    }
    SUBCASE("forward mode residual decreases under refinement") {
        double mu = 0.5, nu = 0.5, lambda = 2.0;
        double prev = std::numeric_limits<double>::infinity();
        for (int J : {512, 1024, 2048, 4096}) {
            TimeGrid g = TimeGrid::graded_front(1.0, J, 2.0);
            SampledFunction f = forward_mode(g, mu, nu, lambda);
            SampledFunction D = hilfer_deriv_left(f, HilferOrder(mu, nu));
            double r = band_resid(g, D.values,
                                  [&](double t) {
                                      double beta = mu + nu * (1.0 - mu);
                                      return -lambda * std::pow(t, beta - 1.0)
                                           * detail::ml_eval(mu, beta,
                                                             -lambda * std::pow(t, mu)).value;
                                  },
                                  0.05, 0.95);
            CHECK(r < prev);
            prev = r;
        }
        CHECK(prev < 2e-3);
    }
    SUBCASE("mode with full inner weight stays bounded at the origin") {
        double mu = 0.6, nu = 1.0, lambda = 3.0;
        TimeGrid g = TimeGrid::graded_front(1.0, 2048, TimeGrid::default_exponent(mu));
        SampledFunction f = forward_mode(g, mu, nu, lambda);  // beta = 1: finite everywhere
        REQUIRE(std::isfinite(f.values[0]));
        SampledFunction D = hilfer_deriv_left(f, HilferOrder(mu, nu));
        double r = band_resid(g, D.values,
                              [&](double t) {
                                  return -lambda
                                       * detail::ml_eval(mu, 1.0, -lambda * std::pow(t, mu)).value;
                              },
                              0.05, 0.95);
        CHECK(r < 5e-3);
    }
    SUBCASE("mode with no inner weight") {
        double mu = 0.5, nu = 0.0, lambda = 2.0;
        TimeGrid g = TimeGrid::graded_front(1.0, 2048, 3.0);
        SampledFunction f = forward_mode(g, mu, nu, lambda);
        SampledFunction D = hilfer_deriv_left(f, HilferOrder(mu, nu));
        double r = band_resid(g, D.values,
                              [&](double t) {
                                  return -lambda * std::pow(t, mu - 1.0)
                                       * detail::ml_eval(mu, mu, -lambda * std::pow(t, mu)).value;
                              },
                              0.05, 0.95);
        CHECK(r < 2e-5);
    }
    SUBCASE("backward mode under the right-sided derivative") {
        // order (mu, 1-nu) so the mode exponent matches that operator's kernel
        double mu = 0.5, nu = 0.25, lambda = 2.0;
        TimeGrid g = TimeGrid::graded_back(1.0, 2048, 3.0);
        SampledFunction f = backward_mode(g, mu, 1.0 - nu, lambda);
        SampledFunction D = hilfer_deriv_right(f, HilferOrder(mu, 1.0 - nu));
        double beta = mu + (1.0 - nu) * (1.0 - mu);
        double r = band_resid(g, D.values,
                              [&](double t) {
                                  double s = 1.0 - t;
                                  return -lambda * std::pow(s, beta - 1.0)
                                       * detail::ml_eval(mu, beta, -lambda * std::pow(s, mu)).value;
                              },
                              0.05, 0.95);
        CHECK(r < 3e-4);
    }
    SUBCASE("kernel power is annihilated") {
        double mu = 0.5, nu = 0.0;
        TimeGrid g = TimeGrid::graded_front(1.0, 2048, 3.0);
        SampledFunction f = sample(g, [=](double t) { return std::pow(t, mu - 1.0); });
        SampledFunction D = hilfer_deriv_left(f, HilferOrder(mu, nu));
        double worst = 0.0;
        for (std::size_t j = 0; j < g.nodes.size(); ++j) {
            double t = g.nodes[j];
            if (t < 0.05 || t > 0.95) continue;
            worst = std::max(worst, std::fabs(D.values[j]));
        }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("integration by parts identity") {
    SUBCASE("classical order on polynomial pairs") {
        TimeGrid g = TimeGrid::uniform(1.0, 65536);
        SampledFunction u = sample(g, [](double t) { return 1.0 + 2.0 * t; });
        SampledFunction v = sample(g, [](double t) { return 3.0 - t; });
        CHECK(integration_by_parts_residual(u, v, HilferOrder(1.0, 0.3)) < 1e-8);

        SampledFunction uq = sample(g, [](double t) { return t * t; });
        SampledFunction vq = sample(g, [](double t) { return 1.0 - t + 0.5 * t * t; });
        CHECK(integration_by_parts_residual(uq, vq, HilferOrder(1.0, 1.0)) < 1e-8);
    }
    SUBCASE("eigenmode pair at half order") {
        double mu = 0.5, nu = 0.5;
        TimeGrid g = TimeGrid::graded_both(1.0, 2048, 3.0);
        SampledFunction u = forward_mode(g, mu, nu, 2.0);
        // right-derivative partner of order (mu, 1-nu): exponent -nu(1-mu)
        double sig = nu * (1.0 - mu);
        SampledFunction v = sample(g, [=](double t) {
            double s = 1.0 - t;
            return std::pow(s, -sig) * detail::ml_eval(mu, 1.0 - sig, -3.0 * std::pow(s, mu)).value;
        });
        CHECK(integration_by_parts_residual(u, v, HilferOrder(mu, nu)) < 1e-4);
    }
    SUBCASE("mismatched grids are rejected") {
        TimeGrid g1 = TimeGrid::uniform(1.0, 64);
        TimeGrid g2 = TimeGrid::uniform(1.0, 128);
        SampledFunction u = sample(g1, [](double t) { return t; });
        SampledFunction v = sample(g2, [](double t) { return 1.0 - t; });
        CHECK_THROWS_AS(integration_by_parts_residual(u, v, HilferOrder(0.5, 0.5)),
                        std::invalid_argument);
    }
}

TEST_CASE("input validation") {
    TimeGrid g = TimeGrid::uniform(1.0, 16);
    SampledFunction f = sample(g, [](double t) { return t; });

    SUBCASE("negative integration order") {
        CHECK_THROWS_AS(rl_integral_left(f, -0.25), std::invalid_argument);
        CHECK_THROWS_AS(rl_integral_right(f, -0.25), std::invalid_argument);
    }
    SUBCASE("sample count must match the grid") {
        SampledFunction bad = f;
        bad.values.pop_back();
        CHECK_THROWS_AS(rl_integral_left(bad, 0.5), std::invalid_argument);
    }
    SUBCASE("grids must start at zero with increasing nodes") {
        SampledFunction bad = f;
        bad.grid.nodes[0] = 0.01;
        CHECK_THROWS_AS(rl_integral_left(bad, 0.5), std::invalid_argument);
        SampledFunction bad2 = f;
        std::swap(bad2.grid.nodes[3], bad2.grid.nodes[4]);
        CHECK_THROWS_AS(rl_integral_left(bad2, 0.5), std::invalid_argument);
    }
    SUBCASE("derivatives need at least three nodes") {
        TimeGrid tiny{1.0, 1.0, {0.0, 1.0}};
        SampledFunction s{tiny, {0.0, 1.0}};
        CHECK_THROWS_AS(hilfer_deriv_left(s, HilferOrder(0.5, 0.5)), std::invalid_argument);
    }
    SUBCASE("interior samples must be finite") {
        SampledFunction bad = f;
        bad.values[5] = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(rl_integral_left(bad, 0.5), std::invalid_argument);
    }
    SUBCASE("singular origin incompatible with a missing inner weight") {
        // mu = 1 leaves no inner integral to absorb the singularity
        SampledFunction s = sample(g, [](double t) { return std::pow(t, -0.3); });
        CHECK_THROWS_AS(hilfer_deriv_left(s, HilferOrder(1.0, 0.5)), std::invalid_argument);
    }
    SUBCASE("singular fit requires one-signed neighbour samples") {
        SampledFunction s = f;
        s.values[0] = std::numeric_limits<double>::infinity();
        s.values[1] = -s.values[1];
        CHECK_THROWS_AS(rl_integral_left(s, 0.5), std::invalid_argument);
    }
    SUBCASE("exponents below the kernel order are rejected") {
        // t^{-0.9} against gamma = 0.5: too singular for this operator
        TimeGrid gg = TimeGrid::graded_front(1.0, 256, 2.0);
        SampledFunction s = sample(gg, [](double t) { return std::pow(t, -0.9); });
        CHECK_THROWS_AS(hilfer_deriv_left(s, HilferOrder(0.5, 0.0)), std::invalid_argument);
    }
    SUBCASE("order parameters are range checked") {
        CHECK_THROWS_AS(HilferOrder(0.0, 0.5), std::invalid_argument);
        CHECK_THROWS_AS(HilferOrder(1.5, 0.5), std::invalid_argument);
        CHECK_THROWS_AS(HilferOrder(0.5, -0.1), std::invalid_argument);
        CHECK_THROWS_AS(HilferOrder(0.5, 1.1), std::invalid_argument);
    }
}

TEST_CASE("time grid construction") {
    SUBCASE("uniform spacing") {
        TimeGrid g = TimeGrid::uniform(2.0, 8);
        CHECK(g.cells() == 8);
        CHECK(g.nodes.front() == 0.0);
        CHECK(g.nodes.back() == 2.0);
        for (int j = 0; j < 8; ++j) CHECK(g.dt(j) == doctest::Approx(0.25).epsilon(1e-15));
    }
    SUBCASE("front grading compresses near zero") {
        TimeGrid g = TimeGrid::graded_front(1.0, 16, 2.0);
        CHECK(g.nodes.front() == 0.0);
        CHECK(g.nodes.back() == 1.0);
        CHECK(g.dt(0) < g.dt(15));
        for (int j = 0; j < 16; ++j) CHECK(g.dt(j) > 0.0);
    }
    SUBCASE("back grading compresses near the horizon") {
        TimeGrid g = TimeGrid::graded_back(1.0, 16, 2.0);
        CHECK(g.nodes.front() == 0.0);
        CHECK(g.nodes.back() == 1.0);
        CHECK(g.dt(15) < g.dt(0));
    }
    SUBCASE("double grading compresses both ends") {
        TimeGrid g = TimeGrid::graded_both(1.0, 16, 3.0);
        CHECK(g.nodes.front() == 0.0);
        CHECK(g.nodes.back() == 1.0);
        CHECK(g.dt(0) < g.dt(8));
        CHECK(g.dt(15) < g.dt(8));
    }
    SUBCASE("grading exponent default scales with the order") {
        CHECK(TimeGrid::default_exponent(1.0) == 1.0);
        CHECK(TimeGrid::default_exponent(0.5) == 2.0);
        CHECK(TimeGrid::default_exponent(0.25) == 4.0);
    }
    SUBCASE("invalid arguments") {
        CHECK_THROWS_AS(TimeGrid::uniform(0.0, 8), std::invalid_argument);
        CHECK_THROWS_AS(TimeGrid::uniform(1.0, 0), std::invalid_argument);
        CHECK_THROWS_AS(TimeGrid::graded_front(1.0, 8, 0.5), std::invalid_argument);
    }
}
