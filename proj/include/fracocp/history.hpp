#pragma once

#include <functional>
#include <span>

#include "fracocp/trajectory.hpp"

namespace fracocp {

/// How the convolution history H^n = sum_{k<n} beta_{n-k} x^k is evaluated while marching.
enum class HistoryMethod {
    Serial,     ///< direct sum per step, O(N^2) total; the reference path
    OpenMP,     ///< direct sum per step, parallel over the history terms
    Fft,        ///< divide and conquer with FFT block products, O(N log^2 N)
    Automatic,  ///< Serial for short runs, Fft otherwise
};

/// Computes x^n for one step given its history sum; writes into `out`.
using StepFn = std::function<void(int n, std::span<const double> history, std::span<double> out)>;

/// Implicit convolution marching: for n = 1..x.entries()-1 calls
/// step(n, H^n, x^n) with H^n = sum_{k=0}^{n-1} betas[n-k] x^k.
/// x[0] must be set by the caller. Every method produces the same H^n up to rounding.
void march(std::span<const double> betas, Trajectory& x, const StepFn& step,
           HistoryMethod method = HistoryMethod::Automatic);

namespace kernels {

/// out = sum_{k=0}^{n-1} betas[n-k] x^k, plain loop.
void history_serial(std::span<const double> betas, const Trajectory& x, int n, std::span<double> out);

/// Same sum, split over threads; partial sums are reduced in thread order so the
/// result is reproducible for a fixed thread count.
void history_omp(std::span<const double> betas, const Trajectory& x, int n, std::span<double> out);

}  // namespace kernels

}  // namespace fracocp
