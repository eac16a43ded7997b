#include "fracocp/grid.hpp"

#include <cmath>
#include <string>

#include "fracocp/errors.hpp"

namespace fracocp {

TimeGrid make_time_grid(int N, double T) {
    if (N < 1) throw InvalidArgument("time grid needs N >= 1, got " + std::to_string(N));
    if (!(T > 0.0) || !std::isfinite(T)) throw InvalidArgument("time grid needs T > 0");
    return TimeGrid{N, T, T / N};
}

Mesh1D make_mesh(int M) {
    // M = 1 would leave no interior unknowns.
    if (M < 2) throw InvalidArgument("mesh needs M >= 2, got " + std::to_string(M));
    return Mesh1D{M, 1.0 / M};
}

NestingMap nesting(int coarse_count, int fine_count) {
    if (coarse_count < 1 || fine_count < 1) throw NestingError("grid counts must be positive");
    if (fine_count % coarse_count != 0) {
        throw NestingError("grid with " + std::to_string(fine_count) +
                           " intervals is not a refinement of one with " +
                           std::to_string(coarse_count));
    }
    return NestingMap{fine_count / coarse_count};
}

NestingMap nesting(const TimeGrid& coarse, const TimeGrid& fine) {
    if (std::abs(coarse.T - fine.T) > 1e-14 * coarse.T) {
        throw NestingError("time grids cover different intervals");
    }
    return nesting(coarse.N, fine.N);
}

NestingMap nesting(const Mesh1D& coarse, const Mesh1D& fine) { return nesting(coarse.M, fine.M); }

}  // namespace fracocp
