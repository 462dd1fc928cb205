#pragma once

#include <vector>

namespace hilfer {

// Discretization of [0, T]. Nodes are nondecreasing with t_0 = 0 and
// t_J = T; graded variants cluster nodes where solutions or kernels are
// singular (t^{beta-1} near 0 for forward runs, (T-t)^{-eta} near T for
// adjoint and Duhamel work). Strong grading on fine grids can collapse
// neighboring nodes to the same double at the clustered end; quadrature
// skips the resulting zero-width cells, while the derivative operators
// reject such grids because difference quotients need real cell widths.
struct TimeGrid {
    double horizon = 0.0;
    double grading = 1.0;      // exponent r of the node map
    std::vector<double> nodes;

    static TimeGrid uniform(double T, int cells);
    static TimeGrid graded_front(double T, int cells, double r);  // t_j = T (j/J)^r
    static TimeGrid graded_back(double T, int cells, double r);   // mirror image
    static TimeGrid graded_both(double T, int cells, double r);   // s^r/(s^r+(1-s)^r) map

    // grading exponent that resolves the t^{mu-1} kernel family
    static double default_exponent(double mu);

    int cells() const { return static_cast<int>(nodes.size()) - 1; }
    double dt(int j) const { return nodes[j + 1] - nodes[j]; }
    bool same_nodes(const TimeGrid& other) const;
};

struct SampledFunction {
    TimeGrid grid;
    std::vector<double> values;   // one per node
};

} // namespace hilfer
