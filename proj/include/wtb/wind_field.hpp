#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "wtb/errors.hpp"
#include "wtb/fft.hpp"
#include "wtb/rng.hpp"
#include "wtb/spectra.hpp"

namespace wtb {

// Multi-station turbulence record. samples[c][m][i] is component c at station
// m and time i*dt. Fields are immutable once generated and may be shared
// read-only across realisations.
struct WindField {
    TurbulenceSpec spec;
    std::vector<double> station_x;  // span coordinates, ascending
    double dt = 0.0;
    double duration = 0.0;
    std::uint64_t seed = 0;
    std::array<std::vector<std::vector<double>>, 3> samples;

    std::size_t sample_count() const {
        return samples[0].empty() ? 0 : samples[0][0].size();
    }

    // Linear interpolation in time at an exact station; t may touch duration
    // (the synthesised record is periodic, the final interval wraps).
    double at_station(WindComponent c, std::size_t m, double t) const {
        const auto& s = samples[static_cast<int>(c)][m];
        const std::size_t n = s.size();
        if (t < 0.0 || t > duration + 1e-9)
            throw DomainError("wind query at t=" + std::to_string(t) + " s outside [0, " +
                              std::to_string(duration) + "]");
        const double pos = t / dt;
        std::size_t i0 = static_cast<std::size_t>(pos);
        if (i0 >= n) i0 = n - 1;
        const double frac = pos - static_cast<double>(i0);
        const std::size_t i1 = (i0 + 1 < n) ? i0 + 1 : 0;
        return s[i0] + frac * (s[i1] - s[i0]);
    }

    // Linear interpolation in space and time.
    double at(WindComponent c, double x, double t) const {
        if (x < station_x.front() - 1e-9 || x > station_x.back() + 1e-9)
            throw DomainError("wind query at x=" + std::to_string(x) + " m outside station range");
        x = std::clamp(x, station_x.front(), station_x.back());
        auto it = std::upper_bound(station_x.begin(), station_x.end(), x);
        std::size_t m = (it == station_x.begin()) ? 0 : static_cast<std::size_t>(it - station_x.begin() - 1);
        if (m >= station_x.size() - 1) m = station_x.size() - 2;
        const double w1 = (x - station_x[m]) / (station_x[m + 1] - station_x[m]);
        return (1.0 - w1) * at_station(c, m, t) + w1 * at_station(c, m + 1, t);
    }
};

// Spectral-representation synthesis. Per frequency bin the cross-spectral
// structure S_ij = S(f) exp(-C f |x_i - x_j| / U) is exactly realised by a
// first-order recursion over the stations sorted along the span: the
// exponential kernel is Markov in x, so correlating each station with its
// neighbour by rho = exp(-C f dx / U) reproduces every pairwise coherence.
// This replaces a per-frequency Cholesky factorisation at O(M) cost.
inline WindField generate_wind_field(const TurbulenceSpec& spec,
                                     const std::vector<double>& stations, double dt,
                                     double duration, std::uint64_t seed,
                                     double max_field_doubles = 2.5e8) {
    spec.validate();
    if (!(dt > 0.0)) throw InvariantError("wind synthesis: dt must be positive");
    const double n_real = duration / dt;
    const std::size_t n = static_cast<std::size_t>(std::llround(n_real));
    if (n < 2 || std::abs(n_real - static_cast<double>(n)) > 1e-6)
        throw InvariantError("wind synthesis: duration must be a positive multiple of dt");
    if (stations.empty()) throw InvariantError("wind synthesis: no stations");
    for (std::size_t m = 1; m < stations.size(); ++m)
        if (!(stations[m] > stations[m - 1]))
            throw InvariantError("wind synthesis: stations must be strictly increasing");

    const std::size_t m_count = stations.size();
    if (3.0 * static_cast<double>(m_count) * static_cast<double>(n) > max_field_doubles)
        throw ResourceError("wind synthesis: " + std::to_string(m_count) + " stations x " +
                            std::to_string(n) + " samples x 3 components exceeds the memory budget");

    WindField field;
    field.spec = spec;
    field.station_x = stations;
    field.dt = dt;
    field.duration = duration;
    field.seed = seed;

    const std::size_t half = n / 2;
    const double df = 1.0 / duration;
    const char* stream_names[3] = {"wind-u", "wind-v", "wind-w"};
    const WindComponent comps[3] = {WindComponent::u, WindComponent::v, WindComponent::w};

    std::vector<std::vector<std::complex<double>>> coef(
        m_count, std::vector<std::complex<double>>(half + 1));
    std::vector<double> out(n);

    for (int ci = 0; ci < 3; ++ci) {
        const WindComponent c = comps[ci];
        Rng rng(derive_seed(seed, stream_names[ci], 0));
        const double decay = spec.decay(c);

        for (auto& row : coef) std::fill(row.begin(), row.end(), std::complex<double>(0.0, 0.0));

        // k = 0 (mean) and k = n/2 (Nyquist) stay zero: zero-mean field, the
        // synthesis band is [1/duration, Nyquist).
        for (std::size_t k = 1; k < half; ++k) {
            const double f = static_cast<double>(k) * df;
            const double amp = std::sqrt(0.5 * von_karman_psd(f, spec, c) * df);
            std::complex<double> prev(0.0, 0.0);
            for (std::size_t m = 0; m < m_count; ++m) {
                // complex standard normal: E|xi|^2 = 1
                const std::complex<double> xi(rng.normal() * 0.7071067811865475244,
                                              rng.normal() * 0.7071067811865475244);
                std::complex<double> a;
                if (m == 0) {
                    a = xi;
                } else {
                    const double rho =
                        std::exp(-decay * f * (stations[m] - stations[m - 1]) / spec.mean_speed_U);
                    a = rho * prev + std::sqrt(1.0 - rho * rho) * xi;
                }
                prev = a;
                coef[m][k] = amp * a;
            }
        }

        auto& comp_samples = field.samples[ci];
        comp_samples.resize(m_count);
        for (std::size_t m = 0; m < m_count; ++m) {
            irfft(coef[m], out);
            comp_samples[m] = out;
        }
    }
    return field;
}

}  // namespace wtb
