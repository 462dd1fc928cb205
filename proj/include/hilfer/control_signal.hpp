#pragma once

#include "hilfer/time_grid.hpp"

#include <vector>

namespace hilfer {

// Spatial support of a forcing term: the whole domain, a subinterval, or an
// explicit node mask on a discrete operator grid.
enum class WindowKind { full, interval, mask };

struct SpatialWindow {
    WindowKind kind = WindowKind::full;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<int> mask;
};

// Forcing in modal coordinates. modal[j] holds the coefficient vector
// (f(., t_j), phi_n) at grid node j; solvers treat the samples as piecewise
// linear in time. Synthesis windows in physical space first and projects
// second, so the samples here are already the projected coefficients; the
// window records where the physical signal lives.
struct ControlSignal {
    TimeGrid grid;
    std::vector<std::vector<double>> modal;
    SpatialWindow window;
};

} // namespace hilfer
