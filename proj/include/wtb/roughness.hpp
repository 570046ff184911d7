#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "wtb/errors.hpp"
#include "wtb/fft.hpp"
#include "wtb/rng.hpp"
#include "wtb/spectra.hpp"

namespace wtb {

// Road surface deviation z(x, y), up-positive, sampled as one longitudinal
// profile per wheel track. The two tracks of a lane (and tracks of different
// lanes) are drawn from one coherent field with wavenumber-domain coherence
// exp(-decay * n * |y_i - y_j|), so nearby tracks share long waves and
// diverge at short ones.
struct RoughnessSurface {
    RoughnessSpec spec;
    double dx = 0.0;
    double length = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> lane_offsets;            // lane centre y per lane
    std::vector<double> track_y;                 // lateral position per track
    std::vector<std::vector<double>> profiles;   // per track, up-positive [m]
    std::vector<std::pair<int, int>> lane_track; // per lane: (left, right) track index

    std::size_t track_count() const { return profiles.size(); }

    double sample(std::size_t track, double x) const {
        check_domain(track, x);
        const auto& p = profiles[track];
        const double pos = x / dx;
        std::size_t i0 = static_cast<std::size_t>(pos);
        if (i0 >= p.size() - 1) i0 = p.size() - 2;
        const double t = pos - static_cast<double>(i0);
        return p[i0] + t * (p[i0 + 1] - p[i0]);
    }

    // Segment slope dz/dx, used for the convective excitation of a rolling wheel.
    double slope(std::size_t track, double x) const {
        check_domain(track, x);
        const auto& p = profiles[track];
        std::size_t i0 = static_cast<std::size_t>(x / dx);
        if (i0 >= p.size() - 1) i0 = p.size() - 2;
        return (p[i0 + 1] - p[i0]) / dx;
    }

private:
    void check_domain(std::size_t track, double x) const {
        if (track >= profiles.size())
            throw DomainError("roughness track " + std::to_string(track) + " out of range");
        if (x < -1e-9 || x > length + 1e-9)
            throw DomainError("roughness query at x=" + std::to_string(x) + " m outside [0, " +
                              std::to_string(length) + "]");
    }
};

// Wavenumber-domain spectral synthesis, band-limited to [n_min, n_max],
// transverse coherence realised by the same Markov recursion as the wind
// field (tracks sorted by lateral position).
inline RoughnessSurface generate_roughness(const RoughnessSpec& spec, double length, double dx,
                                           const std::vector<double>& lane_offsets,
                                           double track_gap, std::uint64_t seed) {
    spec.validate();
    if (!(length > 0.0) || !(dx > 0.0)) throw InvariantError("roughness: need positive length and dx");
    if (dx > 0.5 / spec.n_max + 1e-12)
        throw ResourceError("roughness: dx=" + std::to_string(dx) +
                            " m cannot resolve n_max=" + std::to_string(spec.n_max) +
                            " cycles/m (need dx <= " + std::to_string(0.5 / spec.n_max) + ")");
    if (lane_offsets.empty()) throw InvariantError("roughness: no lanes");
    if (!(track_gap > 0.0)) throw InvariantError("roughness: track gap must be positive");

    RoughnessSurface surf;
    surf.spec = spec;
    surf.dx = dx;
    surf.length = length;
    surf.seed = seed;
    surf.lane_offsets = lane_offsets;

    // track list sorted by lateral position, remembering lane/side
    struct TrackRef {
        double y;
        int lane;
        int side;  // 0 left, 1 right
    };
    std::vector<TrackRef> refs;
    for (std::size_t l = 0; l < lane_offsets.size(); ++l) {
        refs.push_back({lane_offsets[l] - 0.5 * track_gap, static_cast<int>(l), 0});
        refs.push_back({lane_offsets[l] + 0.5 * track_gap, static_cast<int>(l), 1});
    }
    std::sort(refs.begin(), refs.end(), [](const TrackRef& a, const TrackRef& b) { return a.y < b.y; });

    const std::size_t n_tracks = refs.size();
    const std::size_t n_fft = static_cast<std::size_t>(std::ceil(length / dx)) + 1;
    const std::size_t half = n_fft / 2;
    const double dn = 1.0 / (static_cast<double>(n_fft) * dx);

    std::vector<std::vector<std::complex<double>>> coef(
        n_tracks, std::vector<std::complex<double>>(half + 1, {0.0, 0.0}));

    Rng rng(derive_seed(seed, "roughness", 0));
    for (std::size_t k = 1; k < half; ++k) {
        const double n_cyc = static_cast<double>(k) * dn;
        if (n_cyc < spec.n_min || n_cyc > spec.n_max) continue;
        const double amp = std::sqrt(0.5 * iso8608_psd(n_cyc, spec) * dn);
        std::complex<double> prev(0.0, 0.0);
        for (std::size_t m = 0; m < n_tracks; ++m) {
            const std::complex<double> xi(rng.normal() * 0.7071067811865475244,
                                          rng.normal() * 0.7071067811865475244);
            std::complex<double> a;
            if (m == 0) {
                a = xi;
            } else {
                const double rho = std::exp(-spec.transverse_decay * n_cyc * (refs[m].y - refs[m - 1].y));
                a = rho * prev + std::sqrt(std::max(0.0, 1.0 - rho * rho)) * xi;
            }
            prev = a;
            coef[m][k] = amp * a;
        }
    }

    surf.profiles.resize(n_tracks);
    surf.track_y.resize(n_tracks);
    surf.lane_track.assign(lane_offsets.size(), {-1, -1});
    std::vector<double> out(n_fft);
    for (std::size_t m = 0; m < n_tracks; ++m) {
        irfft(coef[m], out);
        surf.profiles[m] = out;
        surf.track_y[m] = refs[m].y;
        if (refs[m].side == 0)
            surf.lane_track[refs[m].lane].first = static_cast<int>(m);
        else
            surf.lane_track[refs[m].lane].second = static_cast<int>(m);
    }
    return surf;
}

}  // namespace wtb
