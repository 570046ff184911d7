#pragma once

#include <atomic>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "wtb/bridge.hpp"
#include "wtb/csv.hpp"
#include "wtb/errors.hpp"
#include "wtb/wind_field.hpp"

namespace wtb {

// Quasi-steady sectional aerodynamics. Forces per unit deck length are built
// from the static coefficient curves at the instantaneous effective angle of
// attack and instantaneous resultant velocity (no linearisation):
//
//   vertical relative velocity   v_z,i = w + h_dot + m_i B alpha_dot
//   along-wind relative velocity v_x   = U + u - p_dot
//   alpha_e,i = alpha_s + alpha + arctan(v_z,i / v_x)
//   U_r,i     = sqrt(v_z,i^2 + v_x^2)
//   F_D = 1/2 rho U_r,D^2 B   C_D(alpha_e,D)
//   F_L = 1/2 rho U_r,L^2 B   C_L(alpha_e,L)
//   F_M = 1/2 rho U_r,M^2 B^2 C_M(alpha_e,M)
//
// D, L, M are then resolved with the flow-rotation angles
// phi_i = arctan(v_z,i / v_x). The default convention rotates the
// (drag, lift) pair from flow axes into deck axes,
//   D = F_D cos(phi_D) - F_L sin(phi_D)
//   L = F_L cos(phi_L) + F_D sin(phi_L),
// so the along-wind force is +F_D and lift +F_L when the flow is not
// rotated. The `equations_as_printed` switch selects the alternative
//   D = F_L sin(phi_D) - F_D cos(phi_D)
//   L = F_L cos(phi_L) - F_D sin(phi_L)
// instead. M = F_M in both conventions. D is positive along-wind (+p),
// L positive upward (-h), M positive windward-edge-up (+alpha).

struct AeroCoefficients {
    std::vector<double> alpha;  // rad, strictly increasing
    std::vector<double> cd, cl, cm;
    // Out-of-range queries clamp to the table ends; each clamp is counted so
    // long runs can report how often the table range was left.
    mutable std::atomic<long> clamp_count{0};

    AeroCoefficients() = default;
    AeroCoefficients(const AeroCoefficients& o)
        : alpha(o.alpha), cd(o.cd), cl(o.cl), cm(o.cm), clamp_count(o.clamp_count.load()) {}

    double alpha_lo() const { return alpha.front(); }
    double alpha_hi() const { return alpha.back(); }

    void validate() const {
        if (alpha.size() < 2) throw InvariantError("aero table: need at least two rows");
        if (cd.size() != alpha.size() || cl.size() != alpha.size() || cm.size() != alpha.size())
            throw InvariantError("aero table: column length mismatch");
        for (std::size_t i = 1; i < alpha.size(); ++i)
            if (!(alpha[i] > alpha[i - 1]))
                throw InvariantError("aero table: alpha must be strictly increasing (row " +
                                     std::to_string(i) + ")");
        const double ten_deg = 10.0 * 0.017453292519943295;
        if (alpha.front() > -ten_deg + 1e-12 || alpha.back() < ten_deg - 1e-12)
            throw InvariantError("aero table: alpha range must cover at least +/-10 degrees");
    }

    enum class Col { D, L, M };

    double lookup(Col col, double a) const {
        const std::vector<double>& v = col == Col::D ? cd : col == Col::L ? cl : cm;
        if (a <= alpha.front()) {
            if (a < alpha.front()) clamp_count.fetch_add(1, std::memory_order_relaxed);
            return v.front();
        }
        if (a >= alpha.back()) {
            if (a > alpha.back()) clamp_count.fetch_add(1, std::memory_order_relaxed);
            return v.back();
        }
        auto it = std::upper_bound(alpha.begin(), alpha.end(), a);
        const std::size_t i = static_cast<std::size_t>(it - alpha.begin()) - 1;
        const double t = (a - alpha[i]) / (alpha[i + 1] - alpha[i]);
        return v[i] + t * (v[i + 1] - v[i]);
    }
};

// Coefficient table file: CSV columns alpha_deg, CD, CL, CM (degrees in the
// file, radians in memory).
inline AeroCoefficients load_aero_coefficients(const std::string& path) {
    const CsvTable t = read_csv(path);
    const int ca = t.column("alpha_deg"), cd = t.column("CD"), cl = t.column("CL"),
              cm = t.column("CM");
    if (ca < 0 || cd < 0 || cl < 0 || cm < 0)
        throw ParseError(path, 1, "expected columns alpha_deg, CD, CL, CM");
    AeroCoefficients c;
    constexpr double deg = 0.017453292519943295;
    for (const auto& row : t.rows) {
        c.alpha.push_back(row[ca] * deg);
        c.cd.push_back(row[cd]);
        c.cl.push_back(row[cl]);
        c.cm.push_back(row[cm]);
    }
    c.validate();
    return c;
}

enum class AeroValidityPolicy { abort_run, clamp };

struct AeroConfig {
    double static_angle = 0.0;  // alpha_s [rad]
    double m_D = 0.0;           // aerodynamic-centre factors, |m_i| <= 1
    double m_L = 0.25;
    double m_M = 0.25;
    double width_B = 31.0;      // deck width [m]
    double density = 1.25;      // air [kg/m^3]
    bool equations_as_printed = false;
    AeroValidityPolicy validity_policy = AeroValidityPolicy::clamp;

    double centre_factor(int i) const { return i == 0 ? m_D : i == 1 ? m_L : m_M; }

    void validate() const {
        if (std::abs(m_D) > 1.0 || std::abs(m_L) > 1.0 || std::abs(m_M) > 1.0)
            throw InvariantError("aero config: |m_i| must be <= 1");
        if (!(width_B > 0)) throw InvariantError("aero config: B must be positive");
        if (!(density > 0)) throw InvariantError("aero config: density must be positive");
    }
};

struct DeckMotionSample {
    double h = 0, p = 0, alpha = 0;           // m, m, rad
    double h_dot = 0, p_dot = 0, alpha_dot = 0;  // m/s, m/s, rad/s
};

struct WindSample {
    double U = 0;  // mean, m/s
    double u = 0, w = 0;
    double v = 0;  // carried for completeness; not used by the force equations
};

namespace detail {

// Relative-velocity components for force component i in {0:D, 1:L, 2:M}.
// Throws or clamps when the along-wind relative velocity is not positive.
struct RelativeFlow {
    double vz = 0, vx = 0;
    bool clamped = false;
};

inline RelativeFlow relative_flow(const DeckMotionSample& m, const WindSample& wind,
                                  const AeroConfig& cfg, int i,
                                  long* clamp_events = nullptr) {
    RelativeFlow r;
    r.vz = wind.w + m.h_dot + cfg.centre_factor(i) * cfg.width_B * m.alpha_dot;
    r.vx = wind.U + wind.u - m.p_dot;
    if (r.vx <= 0.0) {
        if (cfg.validity_policy == AeroValidityPolicy::abort_run)
            throw ValidityError("quasi-steady validity violation: along-wind relative velocity " +
                                std::to_string(r.vx) + " m/s is not positive");
        r.vx = 1e-3 * std::max(wind.U, 1.0);
        r.clamped = true;
        if (clamp_events) ++*clamp_events;
    }
    return r;
}

}  // namespace detail

inline double effective_angle(const DeckMotionSample& motion, const WindSample& wind,
                              const AeroConfig& cfg, int i) {
    const auto r = detail::relative_flow(motion, wind, cfg, i);
    return cfg.static_angle + motion.alpha + std::atan(r.vz / r.vx);
}

inline double resultant_velocity(const DeckMotionSample& motion, const WindSample& wind,
                                 const AeroConfig& cfg, int i) {
    // magnitude is well defined even for reversed flow; no validity policy here
    const double vz = wind.w + motion.h_dot + cfg.centre_factor(i) * cfg.width_B * motion.alpha_dot;
    const double vx = wind.U + wind.u - motion.p_dot;
    return std::hypot(vz, vx);
}

struct SectionalForces {
    double D = 0;  // N/m, positive along-wind (+p)
    double L = 0;  // N/m, positive up (-h)
    double M = 0;  // N m/m, positive windward-edge-up (+alpha)
    long validity_clamps = 0;
};

inline SectionalForces quasi_steady_forces(const DeckMotionSample& motion, const WindSample& wind,
                                           const AeroCoefficients& coeffs, const AeroConfig& cfg) {
    SectionalForces out;
    double F[3], phi[3];
    for (int i = 0; i < 3; ++i) {
        const auto r = detail::relative_flow(motion, wind, cfg, i, &out.validity_clamps);
        phi[i] = std::atan(r.vz / r.vx);
        const double alpha_e = cfg.static_angle + motion.alpha + phi[i];
        const double q = 0.5 * cfg.density * (r.vz * r.vz + r.vx * r.vx) * cfg.width_B;
        switch (i) {
            case 0: F[0] = q * coeffs.lookup(AeroCoefficients::Col::D, alpha_e); break;
            case 1: F[1] = q * coeffs.lookup(AeroCoefficients::Col::L, alpha_e); break;
            default: F[2] = q * cfg.width_B * coeffs.lookup(AeroCoefficients::Col::M, alpha_e); break;
        }
    }
    if (cfg.equations_as_printed) {
        out.D = F[1] * std::sin(phi[0]) - F[0] * std::cos(phi[0]);
        out.L = F[1] * std::cos(phi[1]) - F[0] * std::sin(phi[1]);
    } else {
        out.D = F[0] * std::cos(phi[0]) - F[1] * std::sin(phi[0]);
        out.L = F[1] * std::cos(phi[1]) + F[0] * std::sin(phi[1]);
    }
    out.M = F[2];
    return out;
}

// Strip assembly of the generalised wind force vector. Stations are the wind
// field's stations; each carries a tributary length (half spacing at the
// ends). Deck motion is reconstructed from (q, q_dot) unless motion feedback
// is disabled, in which case forces are evaluated on the frozen undeformed
// deck (the linear-superposition reference configuration).
inline std::vector<double> assemble_wind_forces(
    const ModalBridge& bridge, const WindField& field, const std::vector<double>& q,
    const std::vector<double>& q_dot, const AeroCoefficients& coeffs, const AeroConfig& cfg,
    double t, bool motion_feedback = true, long* validity_clamps = nullptr,
    const std::vector<SpanLocation>* station_locs = nullptr) {
    const std::size_t n_modes = bridge.modes.size();
    const std::size_t n_st = field.station_x.size();
    std::vector<double> gen(n_modes, 0.0);
    long clamps = 0;
    for (std::size_t s = 0; s < n_st; ++s) {
        const double x = field.station_x[s];
        const double x_lo = s == 0 ? field.station_x.front() : 0.5 * (field.station_x[s - 1] + x);
        const double x_hi =
            s + 1 == n_st ? field.station_x.back() : 0.5 * (x + field.station_x[s + 1]);
        const double trib = x_hi - x_lo;

        const SpanLocation loc = station_locs ? (*station_locs)[s] : bridge.locate(x);
        DeckMotionSample motion;
        if (motion_feedback) {
            const DeckResponse d = physical_response_at(bridge, q.data(), q.size(), loc);
            const DeckResponse v = physical_response_at(bridge, q_dot.data(), q_dot.size(), loc);
            motion = {d.h, d.p, d.alpha, v.h, v.p, v.alpha};
        }
        WindSample ws;
        ws.U = field.spec.mean_speed_U;
        ws.u = field.at_station(WindComponent::u, s, t);
        ws.v = field.at_station(WindComponent::v, s, t);
        ws.w = field.at_station(WindComponent::w, s, t);

        SectionalForces f = quasi_steady_forces(motion, ws, coeffs, cfg);
        clamps += f.validity_clamps;
        // h is positive down, lift positive up
        PointForce pf{-f.L * trib, f.D * trib, f.M * trib};
        add_point_force(bridge, loc, pf, gen.data());
    }
    if (validity_clamps) *validity_clamps += clamps;
    return gen;
}

}  // namespace wtb
