#include "hilfer/fractional_calculus.hpp"
#include "hilfer/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace hilfer {

namespace {

constexpr double NaN = std::numeric_limits<double>::quiet_NaN();

// Interior samples must be finite; the end nodes may carry inf/NaN to mark
// data that blows up there (see the singular-end handling below).
void validate_samples(const SampledFunction& f) {
    const auto& t = f.grid.nodes;
    if (t.size() < 2) throw std::invalid_argument("sampled function: grid needs at least two nodes");
    if (f.values.size() != t.size()) throw std::invalid_argument("sampled function: one value per node required");
    for (std::size_t j = 1; j < t.size(); ++j)
        if (!(t[j] > t[j - 1])) throw std::invalid_argument("sampled function: nodes must increase strictly");
    if (t.front() != 0.0) throw std::invalid_argument("sampled function: grid must start at 0");
    for (std::size_t j = 1; j + 1 < t.size(); ++j)
        if (!std::isfinite(f.values[j]))
            throw std::invalid_argument("sampled function: interior samples must be finite");
}

// Moments of the power kernel over one cell, 0 <= A < B:
//   i0 = integral of s^{a-1}        over [A, B]
//   i1 = integral of s^{a-1} (B-s)  over [A, B]
// Written through expm1/log1p of q = (B-A)/A; the naive B^a - A^a form loses
// all significant digits once the cell is thin relative to its distance from
// the singularity, which is the normal situation on graded grids.
struct CellMoments {
    double i0;
    double i1;
};

CellMoments power_moments(double A, double B, double a) {
    if (A <= 0.0) {
        double i0 = std::pow(B, a) / a;
        return {i0, B * i0 / (a + 1.0)};
    }
    double q = (B - A) / A;
    double y = std::log1p(q);
    double Aa = std::pow(A, a);
    double i0 = Aa * std::expm1(a * y) / a;
    double i1 = (Aa * A / a) * (std::expm1((a + 1.0) * y) / (a + 1.0) - q);
    return {i0, i1};
}

// Leading power law c * s^p behind a nonfinite end sample, fitted through
// the two neighbouring samples at distances s1 < s2 from that end. Samples
// cannot carry an integrable singularity through piecewise-linear bridging:
// the interpolation error of c*s^p on self-similar graded cells feeds the
// downstream nodes at an amplitude independent of the node count, so the
// blow-up has to be split off and integrated in closed form instead.
struct SingularFit {
    double p;
    double c;
};

SingularFit fit_singular_end(double s1, double f1, double s2, double f2) {
    if (!(f1 * f2 > 0.0))
        throw std::invalid_argument("singular end: the two neighbouring samples must share a sign");
    double p = std::log(f1 / f2) / std::log(s1 / s2);
    if (!(p > -0.999) || !std::isfinite(p))
        throw std::invalid_argument("singular end: samples do not fit an integrable power law");
    return {p, f1 / std::pow(s1, p)};
}

// Remainder samples once the fitted power is subtracted. Vanishes exactly at
// the two fit nodes and at the singular end itself, finite everywhere.
std::vector<double> subtract_power_left(const SampledFunction& f, const SingularFit& sc) {
    std::vector<double> r(f.values.size(), 0.0);
    for (std::size_t j = 1; j < f.values.size(); ++j)
        if (std::isfinite(f.values[j]))
            r[j] = f.values[j] - sc.c * std::pow(f.grid.nodes[j], sc.p);
        else
            r[j] = f.values[j];
    r[1] = 0.0;
    return r;
}

std::vector<double> subtract_power_right(const SampledFunction& f, const SingularFit& sc) {
    std::size_t J = f.values.size() - 1;
    double T = f.grid.nodes[J];
    std::vector<double> r(f.values.size(), 0.0);
    for (std::size_t j = 0; j < J; ++j)
        if (std::isfinite(f.values[j]))
            r[j] = f.values[j] - sc.c * std::pow(T - f.grid.nodes[j], sc.p);
        else
            r[j] = f.values[j];
    r[J - 1] = 0.0;
    return r;
}

// Value of c*Gamma(p+1)/Gamma(p+1+a) * s^{p+a} with the s -> 0 limit spelled
// out: 0 when the exponent stays positive, the finite constant when it
// cancels, otherwise not a representable nodal value.
double power_integral_at(const SingularFit& sc, double a, double s) {
    double coef = sc.c * std::exp(std::lgamma(sc.p + 1.0) - std::lgamma(sc.p + 1.0 + a));
    if (s > 0.0) return coef * std::pow(s, sc.p + a);
    if (sc.p + a > 1e-9) return 0.0;
    if (sc.p + a > -1e-9) return coef;
    return NaN;
}

// First derivative from the quadratic through three neighbouring nodes;
// second order on arbitrary spacings, exact for quadratics.
std::vector<double> node_derivative(const TimeGrid& g, const std::vector<double>& f) {
    const auto& t = g.nodes;
    int J = g.cells();
    std::vector<double> d(J + 1);
    for (int i = 1; i < J; ++i) {
        double ha = t[i] - t[i - 1];
        double hb = t[i + 1] - t[i];
        d[i] = -hb / (ha * (ha + hb)) * f[i - 1]
             + (hb - ha) / (ha * hb) * f[i]
             + ha / (hb * (ha + hb)) * f[i + 1];
    }
    double h1 = t[1] - t[0], h2 = t[2] - t[1];
    d[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * f[0]
         + (h1 + h2) / (h1 * h2) * f[1]
         - h1 / (h2 * (h1 + h2)) * f[2];
    double k1 = t[J] - t[J - 1], k2 = t[J - 1] - t[J - 2];
    d[J] = (2.0 * k1 + k2) / (k1 * (k1 + k2)) * f[J]
         - (k1 + k2) / (k1 * k2) * f[J - 1]
         + k1 / (k2 * (k1 + k2)) * f[J - 2];
    return d;
}

void check_order_grid(const SampledFunction& f) {
    if (f.grid.nodes.size() < 3)
        throw std::invalid_argument("derivative: need at least 3 nodes for the interior stencils");
}

// Core product-integration sweeps on finite samples.
std::vector<double> pi_left(const TimeGrid& grid, const std::vector<double>& fv, double alpha) {
    const auto& t = grid.nodes;
    int J = grid.cells();
    std::vector<double> out(J + 1, 0.0);
    double norm = 1.0 / gamma(alpha);
    for (int i = 1; i <= J; ++i) {
        long double acc = 0.0L;
        double ti = t[i];
        for (int j = 0; j < i; ++j) {
            double h = t[j + 1] - t[j];
            // substitute s = t_i - tau; the sample runs backwards in s
            CellMoments m = power_moments(ti - t[j + 1], ti - t[j], alpha);
            double slope = (fv[j + 1] - fv[j]) / h;
            acc += static_cast<long double>(fv[j]) * m.i0
                 + static_cast<long double>(slope) * m.i1;
        }
        out[i] = norm * static_cast<double>(acc);
    }
    return out;
}

std::vector<double> pi_right(const TimeGrid& grid, const std::vector<double>& fv, double alpha) {
    const auto& t = grid.nodes;
    int J = grid.cells();
    std::vector<double> out(J + 1, 0.0);
    double norm = 1.0 / gamma(alpha);
    for (int i = J - 1; i >= 0; --i) {
        long double acc = 0.0L;
        double ti = t[i];
        for (int j = i; j < J; ++j) {
            double h = t[j + 1] - t[j];
            // s = tau - t_i increases across the cell, so the linear part of
            // the sample contributes h*i0 - i1 rather than i1
            CellMoments m = power_moments(t[j] - ti, t[j + 1] - ti, alpha);
            double slope = (fv[j + 1] - fv[j]) / h;
            acc += static_cast<long double>(fv[j]) * m.i0
                 + static_cast<long double>(slope) * (h * m.i0 - m.i1);
        }
        out[i] = norm * static_cast<double>(acc);
    }
    return out;
}

} // namespace

SampledFunction rl_integral_left(const SampledFunction& f, double alpha) {
    validate_samples(f);
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("fractional integral: order must be nonnegative");
    if (alpha == 0.0) return f;

    const auto& t = f.grid.nodes;
    int J = f.grid.cells();
    if (std::isfinite(f.values[0]))
        return {f.grid, pi_left(f.grid, f.values, alpha)};

    if (J < 2) throw std::invalid_argument("fractional integral: singular end needs 3 nodes");
    SingularFit sc = fit_singular_end(t[1], f.values[1], t[2], f.values[2]);
    SampledFunction out{f.grid, pi_left(f.grid, subtract_power_left(f, sc), alpha)};
    for (int i = 0; i <= J; ++i) {
        double add = power_integral_at(sc, alpha, t[i]);
        out.values[i] = (i == 0) ? add : out.values[i] + add;
    }
    return out;
}

SampledFunction rl_integral_right(const SampledFunction& f, double alpha) {
    validate_samples(f);
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("fractional integral: order must be nonnegative");
    if (alpha == 0.0) return f;

    const auto& t = f.grid.nodes;
    int J = f.grid.cells();
    double T = t[J];
    if (std::isfinite(f.values[J]))
        return {f.grid, pi_right(f.grid, f.values, alpha)};

    if (J < 2) throw std::invalid_argument("fractional integral: singular end needs 3 nodes");
    SingularFit sc = fit_singular_end(T - t[J - 1], f.values[J - 1], T - t[J - 2], f.values[J - 2]);
    SampledFunction out{f.grid, pi_right(f.grid, subtract_power_right(f, sc), alpha)};
    for (int i = 0; i <= J; ++i) {
        double add = power_integral_at(sc, alpha, T - t[i]);
        out.values[i] = (i == J) ? add : out.values[i] + add;
    }
    return out;
}

namespace {

// Derivative of the split-off power term. The map p -> D^{mu,nu} t^p jumps
// at p = -gamma: that exact power is annihilated (it spans the operator's
// kernel), while every neighbouring exponent keeps an O(1) image. Samples
// cannot tell the two apart, so exponents within snap_tol of -gamma are
// taken to be exactly -gamma. Fit noise on resolvable grids sits well below
// the threshold; data genuinely straddling it is an ill-posed input.
constexpr double snap_tol = 0.05;

struct PowerDeriv {
    SingularFit fit;     // exponent actually used (possibly snapped)
    bool annihilated;    // exponent is the kernel direction
};

PowerDeriv split_power_deriv(double s1, double f1, double s2, double f2, const HilferOrder& order) {
    SingularFit sc = fit_singular_end(s1, f1, s2, f2);
    double g = order.gamma();
    if (std::abs(sc.p + g) <= snap_tol) {
        sc.p = -g;
        sc.c = f1 / std::pow(s1, sc.p);
        return {sc, true};
    }
    if (sc.p + g < 0.0)
        throw std::invalid_argument("derivative: singular exponent below the operator's kernel order");
    return {sc, false};
}

// c * Gamma(p+1)/Gamma(p+1-mu) * s^{p-mu}, with the s -> 0 limit spelled out.
double power_deriv_at(const SingularFit& sc, double mu, double s) {
    double coef = sc.c * gamma(sc.p + 1.0) * rgamma(sc.p + 1.0 - mu);
    if (s > 0.0) return coef * std::pow(s, sc.p - mu);
    if (sc.p - mu > 1e-9) return 0.0;
    if (sc.p - mu > -1e-9) return coef;
    return NaN;
}

} // namespace

SampledFunction hilfer_deriv_left(const SampledFunction& f, const HilferOrder& order) {
    validate_samples(f);
    check_order_grid(f);
    double g = order.gamma();
    double s = order.nu * (1.0 - order.mu);
    const auto& t = f.grid.nodes;
    int J = f.grid.cells();

    std::vector<double> fv = f.values;
    bool split = !std::isfinite(fv[0]);
    PowerDeriv pd{};
    if (split) {
        if (g == 0.0)
            throw std::invalid_argument("derivative: data singular at 0 needs a positive inner order");
        pd = split_power_deriv(t[1], fv[1], t[2], fv[2], order);
        fv = subtract_power_left(f, pd.fit);
    }

    std::vector<double> inner = (g > 0.0) ? pi_left(f.grid, fv, g) : fv;
    std::vector<double> d = node_derivative(f.grid, inner);
    SampledFunction out{f.grid, (s > 0.0) ? pi_left(f.grid, d, s) : d};
    if (split && !pd.annihilated)
        for (int i = 0; i <= J; ++i) {
            double add = power_deriv_at(pd.fit, order.mu, t[i]);
            out.values[i] = (i == 0) ? add : out.values[i] + add;
        }
    return out;
}

SampledFunction hilfer_deriv_right(const SampledFunction& f, const HilferOrder& order) {
    validate_samples(f);
    check_order_grid(f);
    double g = order.gamma();
    double s = order.nu * (1.0 - order.mu);
    const auto& t = f.grid.nodes;
    int J = f.grid.cells();
    double T = t[J];

    std::vector<double> fv = f.values;
    bool split = !std::isfinite(fv[J]);
    PowerDeriv pd{};
    if (split) {
        if (g == 0.0)
            throw std::invalid_argument("derivative: data singular at the horizon needs a positive inner order");
        pd = split_power_deriv(T - t[J - 1], fv[J - 1], T - t[J - 2], fv[J - 2], order);
        fv = subtract_power_right(f, pd.fit);
    }

    std::vector<double> inner = (g > 0.0) ? pi_right(f.grid, fv, g) : fv;
    std::vector<double> d = node_derivative(f.grid, inner);
    SampledFunction out{f.grid, (s > 0.0) ? pi_right(f.grid, d, s) : d};
    for (auto& v : out.values) v = -v;
    // the reflected composition turns d/dt into -d/ds, so the power term
    // enters with the same sign as on the left
    if (split && !pd.annihilated)
        for (int i = 0; i <= J; ++i) {
            double add = power_deriv_at(pd.fit, order.mu, T - t[i]);
            out.values[i] = (i == J) ? add : out.values[i] + add;
        }
    return out;
}

double power_rule(double alpha, double p, double t) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("power rule: order must be nonnegative");
    if (!(p > -1.0)) throw std::invalid_argument("power rule: exponent must exceed -1");
    if (!(t > 0.0)) throw std::invalid_argument("power rule: time must be positive");
    if (alpha == 0.0) return std::pow(t, p);
    return std::exp(std::lgamma(p + 1.0) - std::lgamma(p + alpha + 1.0)
                    + (p + alpha) * std::log(t));
}

namespace {

// Straight line through (x1,y1), (x2,y2) evaluated at x.
double extrapolate(double x1, double y1, double x2, double y2, double x) {
    return y1 + (x - x1) * (y2 - y1) / (x2 - x1);
}

// Trapezoid over the whole grid with the endpoint integrand values replaced
// by one-sided limits from the two nearest interior nodes. Integrands built
// from modes singular at an endpoint are unreliable exactly there, and the
// true integrals converge, so the limit value is the honest choice.
double trapezoid_interior_limit(const TimeGrid& g, const std::vector<double>& y) {
    const auto& t = g.nodes;
    int J = g.cells();
    double y0 = extrapolate(t[1], y[1], t[2], y[2], t[0]);
    double yJ = extrapolate(t[J - 2], y[J - 2], t[J - 1], y[J - 1], t[J]);
    long double acc = 0.0L;
    for (int j = 0; j < J; ++j) {
        double a = (j == 0) ? y0 : y[j];
        double b = (j == J - 1) ? yJ : y[j + 1];
        acc += 0.5L * static_cast<long double>(t[j + 1] - t[j]) * (a + b);
    }
    return static_cast<double>(acc);
}

} // namespace

double integration_by_parts_residual(const SampledFunction& u,
                                     const SampledFunction& v,
                                     const HilferOrder& order) {
    validate_samples(u);
    validate_samples(v);
    if (!u.grid.same_nodes(v.grid))
        throw std::invalid_argument("integration by parts: samples must share one grid");
    const auto& t = u.grid.nodes;
    int J = u.grid.cells();
    if (J < 3) throw std::invalid_argument("integration by parts: need at least 4 nodes");

    double gam = order.gamma();
    double sig = order.nu * (1.0 - order.mu);

    SampledFunction du = hilfer_deriv_left(u, order);
    SampledFunction dv = hilfer_deriv_right(v, HilferOrder(order.mu, 1.0 - order.nu));

    for (int j = 1; j < J; ++j)
        if (!std::isfinite(du.values[j]) || !std::isfinite(dv.values[j]))
            throw std::invalid_argument("integration by parts: derivatives must be finite inside the interval");

    // boundary bracket of (I^gamma u)(I_R^sigma v), one-sided limits at both ends
    SampledFunction P = (gam > 0.0) ? rl_integral_left(u, gam) : u;
    SampledFunction Q = (sig > 0.0) ? rl_integral_right(v, sig) : v;
    std::vector<double> R(J + 1);
    for (int j = 0; j <= J; ++j) R[j] = P.values[j] * Q.values[j];
    double bracket = extrapolate(t[J - 2], R[J - 2], t[J - 1], R[J - 1], t[J])
                   - extrapolate(t[1], R[1], t[2], R[2], t[0]);

    std::vector<double> lhs(J + 1), rhs(J + 1);
    for (int j = 0; j <= J; ++j) {
        lhs[j] = v.values[j] * du.values[j];
        rhs[j] = u.values[j] * dv.values[j];
    }
    double left = trapezoid_interior_limit(u.grid, lhs);
    double right = trapezoid_interior_limit(u.grid, rhs);
    return std::abs(left - bracket - right);
}

} // namespace hilfer
