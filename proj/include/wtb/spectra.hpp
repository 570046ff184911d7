#pragma once

#include <cmath>
#include <string>

#include "wtb/errors.hpp"

namespace wtb {

// One-point target spectra and coherence models for the random-field
// generators. Frequencies f in Hz, wavenumbers n in cycles/m.

enum class WindComponent { u, v, w };

struct TurbulenceSpec {
    double mean_speed_U = 20.0;  // m/s
    double intensity_u = 0.10;   // sigma_i = I_i * U
    double intensity_v = 0.08;
    double intensity_w = 0.05;
    double length_u = 170.0;  // m; non-paper defaults, config-overridable
    double length_v = 60.0;
    double length_w = 30.0;
    double decay_u = 10.0;  // Davenport exponential decay coefficients
    double decay_v = 10.0;
    double decay_w = 10.0;
    double air_density = 1.25;  // kg/m^3

    double intensity(WindComponent c) const {
        return c == WindComponent::u ? intensity_u : c == WindComponent::v ? intensity_v : intensity_w;
    }
    double length_scale(WindComponent c) const {
        return c == WindComponent::u ? length_u : c == WindComponent::v ? length_v : length_w;
    }
    double decay(WindComponent c) const {
        return c == WindComponent::u ? decay_u : c == WindComponent::v ? decay_v : decay_w;
    }

    void validate() const {
        if (!(mean_speed_U > 0.0)) throw InvariantError("turbulence: mean speed U must be positive");
        if (intensity_u < 0 || intensity_v < 0 || intensity_w < 0)
            throw InvariantError("turbulence: intensities must be non-negative");
        if (!(length_u > 0) || !(length_v > 0) || !(length_w > 0))
            throw InvariantError("turbulence: length scales must be positive");
        if (!(decay_u > 0) || !(decay_v > 0) || !(decay_w > 0))
            throw InvariantError("turbulence: decay coefficients must be positive");
        if (!(air_density > 0)) throw InvariantError("turbulence: air density must be positive");
    }
};

// One-sided von Karman PSD in (m/s)^2/Hz. The longitudinal form
//   S_u = 4 s^2 (L/U) / (1 + 70.8 x^2)^(5/6),        x = f L / U
// and the lateral/vertical form
//   S_i = 4 s^2 (L/U) (1 + 755.2 x^2) / (1 + 283.2 x^2)^(11/6)
// both integrate to sigma^2 over f in (0, inf).
inline double von_karman_psd(double f, const TurbulenceSpec& spec, WindComponent c) {
    if (f < 0.0) throw DomainError("von_karman_psd: negative frequency");
    const double sigma = spec.intensity(c) * spec.mean_speed_U;
    const double L = spec.length_scale(c);
    const double x = f * L / spec.mean_speed_U;
    const double base = 4.0 * sigma * sigma * L / spec.mean_speed_U;
    if (c == WindComponent::u) return base / std::pow(1.0 + 70.8 * x * x, 5.0 / 6.0);
    return base * (1.0 + 755.2 * x * x) / std::pow(1.0 + 283.2 * x * x, 11.0 / 6.0);
}

// Davenport exponential coherence (root-coherence of the cross-spectrum).
inline double davenport_coherence(double f, double dx, double U, double C) {
    if (f < 0.0 || dx < 0.0) throw DomainError("davenport_coherence: f and dx must be >= 0");
    return std::exp(-C * f * dx / U);
}

// --- ISO 8608 road roughness -------------------------------------------------

enum class IsoClass { A, B, C, D, E, F, G, H };

// Geometric-centre displacement PSD G_d(n0) at n0 = 0.1 cycles/m per ISO 8608
// class; the ladder steps by a factor of 4 starting at 16e-6 m^3 for class A.
inline double iso8608_class_Gd(IsoClass c) {
    const double base = 16e-6;
    return base * std::pow(4.0, static_cast<double>(c));
}

inline IsoClass parse_iso_class(const std::string& s) {
    if (s.size() == 1 && s[0] >= 'A' && s[0] <= 'H')
        return static_cast<IsoClass>(s[0] - 'A');
    throw Error("unknown ISO 8608 class '" + s + "' (A..H)");
}

struct RoughnessSpec {
    IsoClass iso_class = IsoClass::B;
    double reference_psd = iso8608_class_Gd(IsoClass::B);  // G_d(n0), m^3
    double waviness = 2.0;                                 // power-law exponent
    double transverse_decay = 4.0;  // exponential coherence, analogous to Davenport
    double n_min = 0.01;            // cycles/m
    double n_max = 4.0;

    void validate() const {
        if (!(n_min > 0) || !(n_min < n_max))
            throw InvariantError("roughness: need 0 < n_min < n_max");
        if (!(reference_psd > 0)) throw InvariantError("roughness: G_d(n0) must be positive");
        // declared class must bracket the reference value (half-decade band,
        // factor 2 either side of the geometric centre)
        const double centre = iso8608_class_Gd(iso_class);
        if (reference_psd < centre / 2 - 1e-12 || reference_psd > centre * 2 + 1e-12)
            throw InvariantError("roughness: G_d(n0) outside the declared ISO class band");
        if (transverse_decay < 0) throw InvariantError("roughness: transverse decay must be >= 0");
    }
};

inline constexpr double kIsoRefWavenumber = 0.1;  // n0, cycles/m

// Displacement PSD G_d(n) = G_d(n0) (n/n0)^-w, in m^3.
inline double iso8608_psd(double n, const RoughnessSpec& spec) {
    if (!(n > 0.0)) throw DomainError("iso8608_psd: wavenumber must be positive");
    return spec.reference_psd * std::pow(n / kIsoRefWavenumber, -spec.waviness);
}

}  // namespace wtb
