#pragma once

#include <string>
#include <utility>
#include <vector>

namespace hilfer {

// Eigenvalue/eigenfunction realization of a selfadjoint operator with
// positive spectrum. Three kinds of realization share one container:
//
//   interval   analytic sine basis on (0, lx), quadrature on a fixed
//              uniform grid (1024 cells)
//   rectangle  tensor sine basis on (0, lx) x (0, ly), tensor trapezoid
//              quadrature (128 cells per axis)
//   discrete   eigenvectors of a (generalized) matrix eigenproblem,
//              orthonormal in the weighted inner product sum_i w_i u_i v_i
//
// Eigenvalues are ascending and strictly positive. Repeated eigenvalues
// keep a deterministic order (see the constructors); eigenvalue_groups
// recovers the multiplicity structure when a diagnostic needs it.
enum class DomainKind { interval, rectangle, discrete };

// Spatial samples on the operator's quadrature grid, one value per node.
struct Field {
    std::vector<double> values;
};

struct GramResult {
    int dim = 0;
    std::vector<double> matrix;       // row-major dim x dim, symmetric
    std::vector<double> eigenvalues;  // ascending
    double min_eigenvalue = 0.0;
};

struct SpectralOperator {
    DomainKind kind = DomainKind::interval;
    double lx = 0.0;
    double ly = 0.0;
    std::vector<double> eigenvalues;
    // sine indices behind each eigenvalue: (n, 0) on intervals, (m, n) on
    // rectangles; unused for discrete operators
    std::vector<std::pair<int, int>> mode_ids;

    // discrete kind only
    std::vector<double> grid;     // node coordinates
    std::vector<double> weights;  // quadrature weights (lumped mass)
    std::vector<double> basis;    // row-major: node i, mode n at [i * modes() + n]

    int modes() const { return static_cast<int>(eigenvalues.size()); }
    int sample_count() const;
    double sample_coord(int i) const;  // interval and discrete kinds
    double quad_weight(int i) const;
    double basis_sample(int n, int i) const;
};

SpectralOperator dirichlet_laplacian_1d(double length, int modes);

// Tensor sine eigenpairs on a rectangle, sorted ascending; exact ties are
// broken by (m, n) lexicographic order.
SpectralOperator dirichlet_laplacian_rect(double lx, double ly, int modes);

// Second-order finite-difference surrogate for the Robin problem
// -u'' = lambda u, u'(0) = beta u(0), -u'(L) = beta u(L). Lumped mass,
// dense symmetric eigensolve; eigenvalues converge to the transcendental
// Robin spectrum as the grid refines.
SpectralOperator robin_laplacian_1d_fd(double length, double beta_coef,
                                       int grid_size, int modes);

// Generalized eigenproblem K v = lambda W v for a symmetric stiffness
// matrix (row-major, dim x dim) and positive diagonal weights. Rejects
// asymmetry beyond 1e-12 and a nonpositive smallest eigenvalue.
SpectralOperator from_matrix(const std::vector<double>& stiffness,
                             const std::vector<double>& weights, int modes);

// Reads a dense row-major matrix from a text/CSV file with a one-line
// header "n=<dim>", then calls from_matrix with unit weights.
SpectralOperator from_matrix_csv(const std::string& path, int modes);

// Same eigenfunctions, eigenvalues raised to the power s in (0, 1).
SpectralOperator spectral_power(const SpectralOperator& op, double s);

// Coefficients (field, phi_n) in the operator's discrete inner product.
std::vector<double> project(const SpectralOperator& op, const Field& field);

// Series assembly sum_n c_n phi_n on the operator's own grid, or at caller
// supplied points (interval kind only).
Field synthesize(const SpectralOperator& op, const std::vector<double>& coeffs);
Field synthesize(const SpectralOperator& op, const std::vector<double>& coeffs,
                 const std::vector<double>& points);

// Gram matrix of the first `modes` eigenfunctions restricted to a window,
// with its smallest eigenvalue. A positive minimum certifies that no
// nonzero combination of those modes vanishes on the window. Analytic
// kinds use closed-form entries and a quad-precision eigensolve: the
// minimum decays exponentially in the mode count and lands far below
// double roundoff for windows of moderate size.
GramResult window_gram(const SpectralOperator& op, double window_lo,
                       double window_hi, int modes);
// Discrete operators can window by node mask instead.
GramResult window_gram(const SpectralOperator& op, const std::vector<int>& node_mask,
                       int modes);

// Runs of equal eigenvalues as (first index, count), where equality is
// |difference| <= tol * max(1, lambda).
std::vector<std::pair<int, int>> eigenvalue_groups(const SpectralOperator& op,
                                                   double tol = 1e-9);

} // namespace hilfer
