#include "hilfer/spectral_operator.hpp"

#include <Eigen/Dense>
#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace hilfer {

namespace {

// fixed quadrature resolutions for the analytic kinds
constexpr int interval_cells = 1024;
constexpr int rect_cells = 128;

void check_modes(int modes) {
    if (modes < 1) throw std::invalid_argument("spectral operator: modes must be positive");
}

double sine_basis(double length, int n, double x) {
    return std::sqrt(2.0 / length) * std::sin(n * M_PI * x / length);
}

// ---- quad precision symmetric eigensolve (cyclic Jacobi) ----------------
//
// The window Gram of an analytic sine family has smallest eigenvalues far
// below double roundoff (1e-25 and smaller for eight modes on a short
// window), so both the matrix entries and the rotations are evaluated in
// __float128.

using quad = __float128;

std::vector<quad> jacobi_eigenvalues(std::vector<quad> a, int n) {
    auto at = [&](int i, int j) -> quad& { return a[i * n + j]; };
    for (int sweep = 0; sweep < 100; ++sweep) {
        quad off = 0.0q, diag = 0.0q;
        for (int i = 0; i < n; ++i) {
            diag += at(i, i) * at(i, i);
            for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
        }
        if (off <= (diag + 1.0q) * 1e-68q) break;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) {
                quad apq = at(p, q);
                if (fabsq(apq) == 0.0q) continue;
                quad theta = (at(q, q) - at(p, p)) / (2.0q * apq);
                quad t = 1.0q / (fabsq(theta) + sqrtq(theta * theta + 1.0q));
                if (theta < 0.0q) t = -t;
                quad c = 1.0q / sqrtq(t * t + 1.0q);
                quad s = t * c;
                quad app = at(p, p), aqq = at(q, q);
                at(p, p) = app - t * apq;
                at(q, q) = aqq + t * apq;
                at(p, q) = 0.0q;
                for (int r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    quad& arp = r < p ? at(r, p) : at(p, r);
                    quad& arq = r < q ? at(r, q) : at(q, r);
                    quad vp = arp, vq = arq;
                    arp = c * vp - s * vq;
                    arq = s * vp + c * vq;
                }
            }
    }
    std::vector<quad> eigs(n);
    for (int i = 0; i < n; ++i) eigs[i] = at(i, i);
    std::sort(eigs.begin(), eigs.end());
    return eigs;
}

// closed-form (2/L) int_a^b sin(m pi x / L) sin(n pi x / L) dx
quad sine_overlap(quad length, quad a, quad b, int m, int n) {
    const quad pi = M_PIq;
    auto S = [&](int k) { return sinq(k * pi * b / length) - sinq(k * pi * a / length); };
    if (m == n) return (b - a) / length - S(2 * m) / (2 * m * pi);
    return (S(m - n) / (m - n) - S(m + n) / (m + n)) / pi;
}

GramResult finish_gram(std::vector<quad> g, int dim) {
    GramResult out;
    out.dim = dim;
    out.matrix.resize(dim * dim);
    for (int i = 0; i < dim * dim; ++i) out.matrix[i] = static_cast<double>(g[i]);
    std::vector<quad> eigs = jacobi_eigenvalues(std::move(g), dim);
    out.eigenvalues.reserve(dim);
    for (quad e : eigs) out.eigenvalues.push_back(static_cast<double>(e));
    out.min_eigenvalue = out.eigenvalues.front();
    return out;
}

SpectralOperator solve_generalized(const Eigen::MatrixXd& K, const Eigen::VectorXd& w,
                                   int modes, std::vector<double> coords) {
    const int dim = static_cast<int>(w.size());
    Eigen::MatrixXd W = w.asDiagonal();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, W);
    if (es.info() != Eigen::Success)
        throw std::invalid_argument("spectral operator: eigendecomposition failed");

    const auto& vals = es.eigenvalues();
    double scale = std::max(1.0, std::abs(vals(dim - 1)));
    if (!(vals(0) > 1e-10 * scale))
        throw std::invalid_argument("spectral operator: smallest eigenvalue must be positive");

    SpectralOperator op;
    op.kind = DomainKind::discrete;
    op.eigenvalues.assign(vals.data(), vals.data() + modes);
    op.grid = std::move(coords);
    op.weights.assign(w.data(), w.data() + dim);
    op.basis.resize(static_cast<std::size_t>(dim) * modes);
    for (int i = 0; i < dim; ++i)
        for (int n = 0; n < modes; ++n) op.basis[i * modes + n] = es.eigenvectors()(i, n);
    return op;
}

} // namespace

int SpectralOperator::sample_count() const {
    switch (kind) {
        case DomainKind::interval: return interval_cells + 1;
        case DomainKind::rectangle: return (rect_cells + 1) * (rect_cells + 1);
        case DomainKind::discrete: return static_cast<int>(grid.size());
    }
    return 0;
}

double SpectralOperator::sample_coord(int i) const {
    if (kind == DomainKind::interval) return lx * i / interval_cells;
    if (kind == DomainKind::discrete) return grid[i];
    throw std::invalid_argument("spectral operator: scalar coordinates need a 1d domain");
}

double SpectralOperator::quad_weight(int i) const {
    switch (kind) {
        case DomainKind::interval: {
            double h = lx / interval_cells;
            return (i == 0 || i == interval_cells) ? 0.5 * h : h;
        }
        case DomainKind::rectangle: {
            int nx = rect_cells + 1;
            int ix = i % nx, iy = i / nx;
            double hx = lx / rect_cells, hy = ly / rect_cells;
            double wx = (ix == 0 || ix == rect_cells) ? 0.5 * hx : hx;
            double wy = (iy == 0 || iy == rect_cells) ? 0.5 * hy : hy;
            return wx * wy;
        }
        case DomainKind::discrete: return weights[i];
    }
    return 0.0;
}

double SpectralOperator::basis_sample(int n, int i) const {
    switch (kind) {
        case DomainKind::interval:
            return sine_basis(lx, mode_ids[n].first, sample_coord(i));
        case DomainKind::rectangle: {
            int nx = rect_cells + 1;
            double x = lx * (i % nx) / rect_cells;
            double y = ly * (i / nx) / rect_cells;
            return sine_basis(lx, mode_ids[n].first, x) * sine_basis(ly, mode_ids[n].second, y);
        }
        case DomainKind::discrete: return basis[static_cast<std::size_t>(i) * modes() + n];
    }
    return 0.0;
}

SpectralOperator dirichlet_laplacian_1d(double length, int modes) {
    if (!(length > 0.0) || !std::isfinite(length))
        throw std::invalid_argument("spectral operator: length must be positive");
    check_modes(modes);
    SpectralOperator op;
    op.kind = DomainKind::interval;
    op.lx = length;
    op.eigenvalues.reserve(modes);
    op.mode_ids.reserve(modes);
    for (int n = 1; n <= modes; ++n) {
        double k = n * M_PI / length;
        op.eigenvalues.push_back(k * k);
        op.mode_ids.emplace_back(n, 0);
    }
    return op;
}

SpectralOperator dirichlet_laplacian_rect(double lx, double ly, int modes) {
    if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly))
        throw std::invalid_argument("spectral operator: side lengths must be positive");
    check_modes(modes);
    // the smallest `modes` eigenvalues all have m, n <= modes
    std::vector<std::tuple<double, int, int>> cand;
    cand.reserve(static_cast<std::size_t>(modes) * modes);
    for (int m = 1; m <= modes; ++m)
        for (int n = 1; n <= modes; ++n) {
            double kx = m * M_PI / lx, ky = n * M_PI / ly;
            cand.emplace_back(kx * kx + ky * ky, m, n);
        }
    std::sort(cand.begin(), cand.end());
    SpectralOperator op;
    op.kind = DomainKind::rectangle;
    op.lx = lx;
    op.ly = ly;
    for (int i = 0; i < modes; ++i) {
        op.eigenvalues.push_back(std::get<0>(cand[i]));
        op.mode_ids.emplace_back(std::get<1>(cand[i]), std::get<2>(cand[i]));
    }
    return op;
}

SpectralOperator robin_laplacian_1d_fd(double length, double beta_coef, int grid_size,
                                       int modes) {
    if (!(length > 0.0)) throw std::invalid_argument("spectral operator: length must be positive");
    if (!(beta_coef > 0.0))
        throw std::invalid_argument("spectral operator: boundary coefficient must be positive");
    check_modes(modes);
    if (grid_size < modes + 2)
        throw std::invalid_argument("spectral operator: grid too small for requested modes");

    const int dim = grid_size;
    const double h = length / (grid_size - 1);
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd w(dim);
    for (int i = 0; i < dim; ++i) {
        bool end = (i == 0 || i == dim - 1);
        K(i, i) = end ? 1.0 / h + beta_coef : 2.0 / h;
        if (i + 1 < dim) K(i, i + 1) = K(i + 1, i) = -1.0 / h;
        w(i) = end ? 0.5 * h : h;
    }
    std::vector<double> coords(dim);
    for (int i = 0; i < dim; ++i) coords[i] = i * h;
    return solve_generalized(K, w, modes, std::move(coords));
}

SpectralOperator from_matrix(const std::vector<double>& stiffness,
                             const std::vector<double>& weights, int modes) {
    const int dim = static_cast<int>(weights.size());
    check_modes(modes);
    if (dim < 1 || stiffness.size() != static_cast<std::size_t>(dim) * dim)
        throw std::invalid_argument("spectral operator: stiffness size must be dim^2");
    if (modes > dim) throw std::invalid_argument("spectral operator: more modes than rows");

    double amax = 0.0;
    for (double v : stiffness) {
        if (!std::isfinite(v)) throw std::invalid_argument("spectral operator: nonfinite entry");
        amax = std::max(amax, std::abs(v));
    }
    Eigen::MatrixXd K(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) K(i, j) = stiffness[i * dim + j];
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j)
            if (std::abs(K(i, j) - K(j, i)) > 1e-12 * std::max(1.0, amax))
                throw std::invalid_argument("spectral operator: stiffness must be symmetric");

    Eigen::VectorXd w(dim);
    for (int i = 0; i < dim; ++i) {
        if (!(weights[i] > 0.0))
            throw std::invalid_argument("spectral operator: weights must be positive");
        w(i) = weights[i];
    }
    std::vector<double> coords(dim);
    for (int i = 0; i < dim; ++i) coords[i] = i;
    return solve_generalized(K, w, modes, std::move(coords));
}

SpectralOperator from_matrix_csv(const std::string& path, int modes) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("spectral operator: cannot open " + path);
    std::string header;
    std::getline(in, header);
    int dim = 0;
    if (std::sscanf(header.c_str(), "n=%d", &dim) != 1 || dim < 1)
        throw std::invalid_argument("spectral operator: expected header n=<dim>");

    std::vector<double> entries;
    entries.reserve(static_cast<std::size_t>(dim) * dim);
    std::string token;
    while (entries.size() < static_cast<std::size_t>(dim) * dim && in >> token) {
        // tolerate comma separated rows
        std::replace(token.begin(), token.end(), ',', ' ');
        std::istringstream ts(token);
        double v;
        while (ts >> v) entries.push_back(v);
    }
    if (entries.size() != static_cast<std::size_t>(dim) * dim)
        throw std::invalid_argument("spectral operator: matrix data truncated");
    return from_matrix(entries, std::vector<double>(dim, 1.0), modes);
}

SpectralOperator spectral_power(const SpectralOperator& op, double s) {
    if (!(s > 0.0 && s < 1.0))
        throw std::invalid_argument("spectral operator: power must lie in (0, 1)");
    SpectralOperator out = op;
    for (double& lam : out.eigenvalues) lam = std::pow(lam, s);
    return out;
}

std::vector<double> project(const SpectralOperator& op, const Field& field) {
    if (field.values.size() != static_cast<std::size_t>(op.sample_count()))
        throw std::invalid_argument("project: field sample count does not match the grid");
    std::vector<double> coeffs(op.modes(), 0.0);
    for (int n = 0; n < op.modes(); ++n) {
        double acc = 0.0;
        for (int i = 0; i < op.sample_count(); ++i)
            acc += op.quad_weight(i) * field.values[i] * op.basis_sample(n, i);
        coeffs[n] = acc;
    }
    return coeffs;
}

Field synthesize(const SpectralOperator& op, const std::vector<double>& coeffs) {
    if (coeffs.size() != static_cast<std::size_t>(op.modes()))
        throw std::invalid_argument("synthesize: coefficient count does not match the modes");
    Field f;
    f.values.assign(op.sample_count(), 0.0);
    for (int i = 0; i < op.sample_count(); ++i) {
        double acc = 0.0;
        for (int n = 0; n < op.modes(); ++n) acc += coeffs[n] * op.basis_sample(n, i);
        f.values[i] = acc;
    }
    return f;
}

Field synthesize(const SpectralOperator& op, const std::vector<double>& coeffs,
                 const std::vector<double>& points) {
    if (points.empty()) return synthesize(op, coeffs);
    if (op.kind != DomainKind::interval)
        throw std::invalid_argument("synthesize: free evaluation points need an interval domain");
    if (coeffs.size() != static_cast<std::size_t>(op.modes()))
        throw std::invalid_argument("synthesize: coefficient count does not match the modes");
    Field f;
    f.values.assign(points.size(), 0.0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        double acc = 0.0;
        for (int n = 0; n < op.modes(); ++n)
            acc += coeffs[n] * sine_basis(op.lx, op.mode_ids[n].first, points[i]);
        f.values[i] = acc;
    }
    return f;
}

GramResult window_gram(const SpectralOperator& op, double window_lo, double window_hi,
                       int modes) {
    if (modes < 1 || modes > op.modes())
        throw std::invalid_argument("window gram: mode count out of range");

    if (op.kind == DomainKind::discrete) {
        std::vector<int> mask;
        for (std::size_t i = 0; i < op.grid.size(); ++i)
            if (op.grid[i] >= window_lo && op.grid[i] <= window_hi)
                mask.push_back(static_cast<int>(i));
        return window_gram(op, mask, modes);
    }

    double a = std::max(window_lo, 0.0);
    double b = std::min(window_hi, op.lx);
    if (!(a < b)) throw std::invalid_argument("window gram: window must have positive measure");

    std::vector<quad> g(static_cast<std::size_t>(modes) * modes);
    for (int i = 0; i < modes; ++i)
        for (int j = i; j < modes; ++j) {
            quad v;
            if (op.kind == DomainKind::interval) {
                v = sine_overlap(op.lx, a, b, op.mode_ids[i].first, op.mode_ids[j].first);
            } else {
                // window is the strip (a, b) x (0, ly): the y factor is the
                // full-domain overlap, orthonormal across distinct indices
                v = op.mode_ids[i].second == op.mode_ids[j].second
                        ? sine_overlap(op.lx, a, b, op.mode_ids[i].first, op.mode_ids[j].first)
                        : quad(0);
            }
            g[i * modes + j] = g[j * modes + i] = v;
        }
    return finish_gram(std::move(g), modes);
}

GramResult window_gram(const SpectralOperator& op, const std::vector<int>& node_mask,
                       int modes) {
    if (op.kind != DomainKind::discrete)
        throw std::invalid_argument("window gram: node masks need a discrete operator");
    if (modes < 1 || modes > op.modes())
        throw std::invalid_argument("window gram: mode count out of range");
    if (node_mask.empty())
        throw std::invalid_argument("window gram: window must have positive measure");

    std::vector<quad> g(static_cast<std::size_t>(modes) * modes, quad(0));
    for (int i : node_mask) {
        if (i < 0 || i >= op.sample_count())
            throw std::invalid_argument("window gram: mask index out of range");
        quad w = op.weights[i];
        for (int m = 0; m < modes; ++m) {
            quad bm = op.basis[static_cast<std::size_t>(i) * op.modes() + m];
            for (int n = m; n < modes; ++n)
                g[m * modes + n] += w * bm * op.basis[static_cast<std::size_t>(i) * op.modes() + n];
        }
    }
    for (int m = 0; m < modes; ++m)
        for (int n = m + 1; n < modes; ++n) g[n * modes + m] = g[m * modes + n];
    return finish_gram(std::move(g), modes);
}

std::vector<std::pair<int, int>> eigenvalue_groups(const SpectralOperator& op, double tol) {
    std::vector<std::pair<int, int>> groups;
    int start = 0;
    for (int i = 1; i <= op.modes(); ++i) {
        if (i == op.modes()
            || std::abs(op.eigenvalues[i] - op.eigenvalues[i - 1])
                   > tol * std::max(1.0, std::abs(op.eigenvalues[i - 1]))) {
            groups.emplace_back(start, i - start);
            start = i;
        }
    }
    return groups;
}

} // namespace hilfer
