#pragma once

namespace fracocp {

/// Uniform partition of [0, T] into N steps of size tau = T / N.
struct TimeGrid {
    int N = 1;
    double T = 1.0;
    double tau = 1.0;

    double t(int n) const { return n * tau; }
};

/// Uniform mesh of (0, 1) with M subintervals. Unknowns live on the M - 1
/// interior nodes x_i = i h; coefficient k belongs to node k + 1.
struct Mesh1D {
    int M = 2;
    double h = 0.5;

    int interior() const { return M - 1; }
    double node(int i) const { return i * h; }
    /// Coordinate of coefficient k.
    double coord(int k) const { return (k + 1) * h; }
};

/// Fine count = ratio * coarse count; coarse point k sits at fine point ratio * k.
struct NestingMap {
    int ratio = 1;

    int fine_index(int coarse_index) const { return ratio * coarse_index; }
};

TimeGrid make_time_grid(int N, double T);
Mesh1D make_mesh(int M);

NestingMap nesting(int coarse_count, int fine_count);
NestingMap nesting(const TimeGrid& coarse, const TimeGrid& fine);
NestingMap nesting(const Mesh1D& coarse, const Mesh1D& fine);

}  // namespace fracocp
