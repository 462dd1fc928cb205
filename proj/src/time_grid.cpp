#include "hilfer/time_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hilfer {

namespace {

void check_args(double T, int cells, double r) {
    if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("time grid: horizon must be positive");
    if (cells < 1) throw std::invalid_argument("time grid: need at least one cell");
    if (!(r >= 1.0) || !std::isfinite(r)) throw std::invalid_argument("time grid: grading exponent must be >= 1");
}

} // namespace

TimeGrid TimeGrid::uniform(double T, int cells) {
    check_args(T, cells, 1.0);
    TimeGrid g;
    g.horizon = T;
    g.grading = 1.0;
    g.nodes.resize(cells + 1);
    for (int j = 0; j <= cells; ++j)
        g.nodes[j] = T * (static_cast<double>(j) / cells);
    g.nodes[cells] = T;
    return g;
}

TimeGrid TimeGrid::graded_front(double T, int cells, double r) {
    check_args(T, cells, r);
    TimeGrid g;
    g.horizon = T;
    g.grading = r;
    g.nodes.resize(cells + 1);
    for (int j = 0; j <= cells; ++j)
        g.nodes[j] = T * std::pow(static_cast<double>(j) / cells, r);
    g.nodes[cells] = T;
    return g;
}

TimeGrid TimeGrid::graded_back(double T, int cells, double r) {
    check_args(T, cells, r);
    TimeGrid g;
    g.horizon = T;
    g.grading = r;
    g.nodes.resize(cells + 1);
    // accumulate from the far end so the smallest cells are exactly representable
    for (int j = 0; j <= cells; ++j)
        g.nodes[j] = T * (1.0 - std::pow(static_cast<double>(cells - j) / cells, r));
    g.nodes[0] = 0.0;
    g.nodes[cells] = T;
    return g;
}

TimeGrid TimeGrid::graded_both(double T, int cells, double r) {
    check_args(T, cells, r);
    TimeGrid g;
    g.horizon = T;
    g.grading = r;
    g.nodes.resize(cells + 1);
    for (int j = 0; j <= cells; ++j) {
        double s = static_cast<double>(j) / cells;
        double a = std::pow(s, r);
        double b = std::pow(1.0 - s, r);
        g.nodes[j] = T * (a / (a + b));
    }
    g.nodes[0] = 0.0;
    g.nodes[cells] = T;
    return g;
}

double TimeGrid::default_exponent(double mu) {
    return std::max(1.0, 1.0 / mu);
}

bool TimeGrid::same_nodes(const TimeGrid& other) const {
    return nodes == other.nodes;
}

} // namespace hilfer
