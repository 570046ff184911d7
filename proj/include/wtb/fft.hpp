#pragma once

#include <complex>
#include <mutex>
#include <vector>

#include <fftw3.h>

namespace wtb {

// Thin FFTW wrappers. Plans use FFTW_ESTIMATE so the algorithm choice (and
// therefore the output bit pattern) never depends on runtime measurement.
// The FFTW planner is not thread-safe; plan creation/destruction is locked.

inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

// Hermitian half-spectrum (n/2+1 bins) -> n real samples, unnormalised DFT sum.
inline void irfft(const std::vector<std::complex<double>>& half, std::vector<double>& out) {
    const std::size_t n = out.size();
    std::vector<std::complex<double>> in(half);  // c2r destroys its input
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        plan = fftw_plan_dft_c2r_1d(static_cast<int>(n),
                                    reinterpret_cast<fftw_complex*>(in.data()), out.data(),
                                    FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
}

// n real samples -> Hermitian half spectrum (n/2+1 bins), unnormalised.
inline void rfft(const std::vector<double>& in, std::vector<std::complex<double>>& half) {
    const std::size_t n = in.size();
    half.resize(n / 2 + 1);
    std::vector<double> tmp(in);  // keep caller's buffer intact
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), tmp.data(),
                                    reinterpret_cast<fftw_complex*>(half.data()), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
}

}  // namespace wtb
