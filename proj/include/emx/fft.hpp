#pragma once

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "emx/grid.hpp"

namespace emx::fft {

// FFTW-backed 3-D complex transforms, one cached plan pair per grid size.
// Plans are created with FFTW_ESTIMATE so the chosen algorithm (and hence
// rounding) is reproducible run to run. Execution is serialized with a
// mutex; the numerical kernels above this layer are pure value transforms.
class Engine {
public:
    explicit Engine(int n) : n_(n) {
        const std::size_t sz = std::size_t(n) * n * n;
        buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * sz));
        fwd_ = fftw_plan_dft_3d(n, n, n, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_3d(n, n, n, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~Engine() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(buf_);
    }
    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;

    // coeffs(m) = (1/n^3) sum_x f(x) exp(-i xi_m . x)
    void forward(const double* real_in, std::complex<double>* coeffs_out) {
        std::lock_guard<std::mutex> lock(mu_);
        const std::size_t sz = std::size_t(n_) * n_ * n_;
        for (std::size_t i = 0; i < sz; ++i) {
            buf_[i][0] = real_in[i];
            buf_[i][1] = 0.0;
        }
        fftw_execute(fwd_);
        const double scale = 1.0 / double(sz);
        for (std::size_t i = 0; i < sz; ++i)
            coeffs_out[i] = std::complex<double>(buf_[i][0] * scale, buf_[i][1] * scale);
    }

    // f(x) = sum_m coeffs(m) exp(+i xi_m . x); imaginary residue is returned
    // so callers can check Hermitian symmetry.
    double inverse(const std::complex<double>* coeffs_in, double* real_out) {
        std::lock_guard<std::mutex> lock(mu_);
        const std::size_t sz = std::size_t(n_) * n_ * n_;
        for (std::size_t i = 0; i < sz; ++i) {
            buf_[i][0] = coeffs_in[i].real();
            buf_[i][1] = coeffs_in[i].imag();
        }
        fftw_execute(bwd_);
        double imag_max = 0.0;
        for (std::size_t i = 0; i < sz; ++i) {
            real_out[i] = buf_[i][0];
            imag_max = std::max(imag_max, std::abs(buf_[i][1]));
        }
        return imag_max;
    }

    // Full complex inverse, for callers that need the imaginary part.
    void inverse_complex(const std::complex<double>* coeffs_in, std::complex<double>* out) {
        std::lock_guard<std::mutex> lock(mu_);
        const std::size_t sz = std::size_t(n_) * n_ * n_;
        for (std::size_t i = 0; i < sz; ++i) {
            buf_[i][0] = coeffs_in[i].real();
            buf_[i][1] = coeffs_in[i].imag();
        }
        fftw_execute(bwd_);
        for (std::size_t i = 0; i < sz; ++i)
            out[i] = std::complex<double>(buf_[i][0], buf_[i][1]);
    }

private:
    int n_;
    fftw_complex* buf_;
    fftw_plan fwd_, bwd_;
    std::mutex mu_;
};

inline Engine& engine_for(int n) {
    static std::mutex registry_mu;
    static std::map<int, std::unique_ptr<Engine>> registry;
    std::lock_guard<std::mutex> lock(registry_mu);
    auto it = registry.find(n);
    if (it == registry.end())
        it = registry.emplace(n, std::make_unique<Engine>(n)).first;
    return *it->second;
}

} // namespace emx::fft
