#include "fracocp/history.hpp"

#include <fftw3.h>
#include <omp.h>

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "fracocp/errors.hpp"

namespace fracocp {

namespace kernels {

void history_serial(std::span<const double> betas, const Trajectory& x, int n, std::span<double> out) {
    const int dim = x.dim();
    std::fill(out.begin(), out.end(), 0.0);
    for (int k = 0; k < n; ++k) {
        const double b = betas[n - k];
        const auto row = x[k];
        for (int i = 0; i < dim; ++i) out[i] += b * row[i];
    }
}

void history_omp(std::span<const double> betas, const Trajectory& x, int n, std::span<double> out) {
    const int dim = x.dim();
    std::fill(out.begin(), out.end(), 0.0);
    const int threads = omp_get_max_threads();
    if (threads == 1 || std::size_t(n) * dim < 16384) {
        history_serial(betas, x, n, out);
        return;
    }
    std::vector<double> partial(std::size_t(threads) * dim, 0.0);
#pragma omp parallel num_threads(threads)
    {
        double* local = partial.data() + std::size_t(omp_get_thread_num()) * dim;
#pragma omp for schedule(static)
        for (int k = 0; k < n; ++k) {
            const double b = betas[n - k];
            const double* row = x[k].data();
#pragma omp simd
            for (int i = 0; i < dim; ++i) local[i] += b * row[i];
        }
    }
    for (int t = 0; t < threads; ++t) {
        const double* local = partial.data() + std::size_t(t) * dim;
        for (int i = 0; i < dim; ++i) out[i] += local[i];
    }
}

}  // namespace kernels

namespace {

// FFTW's planner is not thread-safe; execution of an existing plan is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

// Batched real convolution of `dim` signals of length `size` (a power of two).
class BatchPlan {
public:
    BatchPlan(int size, int dim) : size_(size), dim_(dim), spectrum_len_(size / 2 + 1) {
        real_.reset(fftw_alloc_real(std::size_t(size) * dim));
        spec_.reset(fftw_alloc_complex(std::size_t(spectrum_len_) * dim));
        std::lock_guard lock(planner_mutex());
        int n[] = {size};
        forward_ = fftw_plan_many_dft_r2c(1, n, dim, real_.get(), nullptr, 1, size, spec_.get(), nullptr, 1,
                                          spectrum_len_, FFTW_ESTIMATE);
        backward_ = fftw_plan_many_dft_c2r(1, n, dim, spec_.get(), nullptr, 1, spectrum_len_, real_.get(),
                                           nullptr, 1, size, FFTW_ESTIMATE);
        if (forward_ == nullptr || backward_ == nullptr) throw std::runtime_error("FFTW planning failed");
    }
    BatchPlan(const BatchPlan&) = delete;
    BatchPlan& operator=(const BatchPlan&) = delete;
    ~BatchPlan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
    }

    int size() const { return size_; }
    int spectrum_len() const { return spectrum_len_; }
    double* real() { return real_.get(); }
    fftw_complex* spectrum() { return spec_.get(); }
    void forward() { fftw_execute(forward_); }
    void backward() { fftw_execute(backward_); }

private:
    int size_;
    int dim_;
    int spectrum_len_;
    std::unique_ptr<double[], FftwFree> real_;
    std::unique_ptr<fftw_complex[], FftwFree> spec_;
    fftw_plan forward_ = nullptr;
    fftw_plan backward_ = nullptr;
};

// Divide and conquer over [lo, hi): solve the left half, push its contribution
// to the right half's histories with one batched FFT product, solve the right half.
class FftMarcher {
public:
    static constexpr int kLeaf = 64;

    FftMarcher(std::span<const double> betas, Trajectory& x, const StepFn& step)
        : betas_(betas), x_(x), step_(step), dim_(x.dim()), history_(std::size_t(x.entries()) * x.dim(), 0.0) {}

    void run() { solve(0, x_.entries()); }

private:
    std::span<double> hist(int n) { return {history_.data() + std::size_t(n) * dim_, std::size_t(dim_)}; }

    void solve(int lo, int hi) {
        if (hi - lo <= kLeaf) {
            for (int n = lo; n < hi; ++n) {
                auto h = hist(n);
                for (int k = lo; k < n; ++k) {
                    const double b = betas_[n - k];
                    const auto row = x_[k];
                    for (int i = 0; i < dim_; ++i) h[i] += b * row[i];
                }
                if (n >= 1) step_(n, h, x_[n]);
            }
            return;
        }
        const int mid = lo + (hi - lo) / 2;
        solve(lo, mid);
        push(lo, mid, hi);
        solve(mid, hi);
    }

    // hist[n] += sum_{k in [lo, mid)} beta_{n-k} x^k for n in [mid, hi).
    // A cyclic product of length >= hi - lo leaves the needed outputs unaliased.
    void push(int lo, int mid, int hi) {
        const int span = hi - lo;
        const int size = static_cast<int>(std::bit_ceil(static_cast<unsigned>(span)));
        BatchPlan& plan = plan_for(size);
        const auto& kernel = kernel_for(span, plan);
        const int len = mid - lo;
        double* in = plan.real();
        std::fill(in, in + std::size_t(size) * dim_, 0.0);
        for (int k = 0; k < len; ++k) {
            const auto row = x_[lo + k];
            for (int i = 0; i < dim_; ++i) in[std::size_t(i) * size + k] = row[i];
        }
        plan.forward();
        fftw_complex* spec = plan.spectrum();
        const int sl = plan.spectrum_len();
        for (int i = 0; i < dim_; ++i) {
            fftw_complex* s = spec + std::size_t(i) * sl;
            for (int f = 0; f < sl; ++f) {
                const double re = s[f][0] * kernel[f][0] - s[f][1] * kernel[f][1];
                const double im = s[f][0] * kernel[f][1] + s[f][1] * kernel[f][0];
                s[f][0] = re;
                s[f][1] = im;
            }
        }
        plan.backward();
        const double inv = 1.0 / size;
        for (int n = mid; n < hi; ++n) {
            auto h = hist(n);
            const int s = n - lo;
            for (int i = 0; i < dim_; ++i) h[i] += inv * in[std::size_t(i) * size + s];
        }
    }

    BatchPlan& plan_for(int size) {
        auto it = plans_.find(size);
        if (it == plans_.end()) it = plans_.emplace(size, std::make_unique<BatchPlan>(size, dim_)).first;
        return *it->second;
    }

    // Spectrum of betas[0 .. span) zero-padded to the plan size.
    const std::vector<std::array<double, 2>>& kernel_for(int span, BatchPlan& plan) {
        auto it = kernels_.find(span);
        if (it != kernels_.end()) return it->second;
        const int size = plan.size();
        std::vector<double> in(size, 0.0);
        std::copy_n(betas_.begin(), span, in.begin());
        std::vector<std::array<double, 2>> out(plan.spectrum_len());
        {
            std::lock_guard lock(planner_mutex());
            fftw_plan p = fftw_plan_dft_r2c_1d(size, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                               FFTW_ESTIMATE);
            fftw_execute(p);
            fftw_destroy_plan(p);
        }
        return kernels_.emplace(span, std::move(out)).first->second;
    }

    std::span<const double> betas_;
    Trajectory& x_;
    const StepFn& step_;
    int dim_;
    std::vector<double> history_;
    std::map<int, std::unique_ptr<BatchPlan>> plans_;
    std::map<int, std::vector<std::array<double, 2>>> kernels_;
};

}  // namespace

void march(std::span<const double> betas, Trajectory& x, const StepFn& step, HistoryMethod method) {
    const int entries = x.entries();
    if (static_cast<int>(betas.size()) < entries) throw InvalidArgument("march: fewer weights than steps");
    if (method == HistoryMethod::Automatic) {
        method = entries > 512 ? HistoryMethod::Fft : HistoryMethod::Serial;
    }
    if (method == HistoryMethod::Fft) {
        FftMarcher(betas, x, step).run();
        return;
    }
    std::vector<double> h(x.dim());
    for (int n = 1; n < entries; ++n) {
        if (method == HistoryMethod::OpenMP) {
            kernels::history_omp(betas, x, n, h);
        } else {
            kernels::history_serial(betas, x, n, h);
        }
        step(n, h, x[n]);
    }
}

}  // namespace fracocp
