#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wtb/errors.hpp"
#include "wtb/keyval.hpp"
#include "wtb/rng.hpp"

namespace wtb {

// Linear multi-DOF vehicle models. A body carries heave z (up-positive),
// pitch theta and roll phi; each wheel adds one vertical DOF. Wheels couple
// to the body through the suspension at lever arms (longitudinal, lateral)
// and to the road through the tyre spring/damper. The articulated truck is
// two bodies whose fifth-wheel coupling transmits vertical force and no
// moment; it is realised as a stiff vertical spring-damper at the hitch
// point, which keeps the system a plain linear ODE.
//
// States are perturbations about static equilibrium, so gravity drops out of
// the dynamics; static wheel loads are computed once from the grounded
// stiffness matrix and added back when contact forces are evaluated.

inline constexpr double kGravity = 9.80665;  // m/s^2

enum class VehicleClass { car, van, bus, truck2, truck3 };

inline const char* to_string(VehicleClass c) {
    switch (c) {
        case VehicleClass::car: return "car";
        case VehicleClass::van: return "van";
        case VehicleClass::bus: return "bus";
        case VehicleClass::truck2: return "truck2";
        default: return "truck3";
    }
}

inline VehicleClass parse_vehicle_class(const std::string& s) {
    if (s == "car") return VehicleClass::car;
    if (s == "van") return VehicleClass::van;
    if (s == "bus") return VehicleClass::bus;
    if (s == "truck2") return VehicleClass::truck2;
    if (s == "truck3") return VehicleClass::truck3;
    throw Error("unknown vehicle class '" + s + "'");
}

constexpr int kVehicleClassCount = 5;

struct WheelSpec {
    double long_offset = 0.0;  // m, + forward of the body reference
    double lat_offset = 0.0;   // m, + left
    double unsprung_mass = 0;  // kg
    double k_s = 0, c_s = 0;   // suspension N/m, N s/m
    double k_t = 0, c_t = 0;   // tyre N/m, N s/m
};

struct BodySpec {
    double sprung_mass = 0;    // kg
    double pitch_inertia = 0;  // kg m^2
    double roll_inertia = 0;   // kg m^2
    std::vector<WheelSpec> wheels;
};

struct HitchSpec {
    double x_front = 0;  // hitch longitudinal position on the front body
    double x_rear = 0;   // and on the rear body
    double stiffness = 2.5e7;
    double damping = 5e4;
};

struct VehicleParams {
    VehicleClass cls = VehicleClass::car;
    std::vector<BodySpec> bodies;  // 1, or 2 for the articulated truck
    std::optional<HitchSpec> hitch;
    double length = 4.5;         // m, footprint used by the traffic model
    double speed_cap_kmh = 130;  // class speed cap

    std::size_t wheel_count() const {
        std::size_t n = 0;
        for (const auto& b : bodies) n += b.wheels.size();
        return n;
    }
    std::size_t dof_count() const { return 3 * bodies.size() + wheel_count(); }
    double total_mass() const {
        double m = 0;
        for (const auto& b : bodies) {
            m += b.sprung_mass;
            for (const auto& w : b.wheels) m += w.unsprung_mass;
        }
        return m;
    }

    void validate() const {
        if (bodies.empty() || bodies.size() > 2)
            throw InvariantError("vehicle: need 1 or 2 bodies");
        if (bodies.size() == 2 && !hitch)
            throw InvariantError("vehicle: articulated vehicle needs a hitch");
        const std::size_t nw = wheel_count();
        if (nw != 4 && nw < 6)
            throw InvariantError("vehicle: wheel count must be 4 or >= 6, got " +
                                 std::to_string(nw));
        for (const auto& b : bodies) {
            if (!(b.sprung_mass > 0) || !(b.pitch_inertia > 0) || !(b.roll_inertia > 0))
                throw InvariantError("vehicle: masses and inertias must be positive");
            for (const auto& w : b.wheels) {
                if (!(w.unsprung_mass > 0) || !(w.k_s > 0) || !(w.k_t > 0))
                    throw InvariantError("vehicle: wheel masses and stiffnesses must be positive");
                if (w.c_s < 0 || w.c_t < 0)
                    throw InvariantError("vehicle: dampings must be non-negative");
            }
        }
        if (!(length > 0)) throw InvariantError("vehicle: length must be positive");
    }
};

// Flattened wheel bookkeeping for assembly and simulation.
struct WheelRef {
    int body = 0;
    int dof = 0;               // wheel DOF index in the assembled system
    double long_offset = 0;    // relative to the vehicle reference point
    double lat_offset = 0;
    double k_t = 0, c_t = 0;
    double static_load = 0;    // N, downward on the road at equilibrium
};

struct VehicleMatrices {
    Eigen::MatrixXd M, C, K;
};

namespace detail {

// corner-displacement row: u = z_b + l*theta_b + y*phi_b
inline Eigen::RowVectorXd corner_row(int n_dof, int body, double l, double y) {
    Eigen::RowVectorXd g = Eigen::RowVectorXd::Zero(n_dof);
    g(3 * body + 0) = 1.0;
    g(3 * body + 1) = l;
    g(3 * body + 2) = y;
    return g;
}

}  // namespace detail

// Assembles mass, damping and stiffness with tyres grounded. K without the
// tyre terms is positive semi-definite (rigid-body heave/pitch/roll remain);
// grounding makes it positive definite.
inline VehicleMatrices vehicle_matrices(const VehicleParams& p, bool ground_tyres = true) {
    p.validate();
    const int n = static_cast<int>(p.dof_count());
    const int n_bodies = static_cast<int>(p.bodies.size());
    VehicleMatrices vm;
    vm.M = Eigen::MatrixXd::Zero(n, n);
    vm.C = Eigen::MatrixXd::Zero(n, n);
    vm.K = Eigen::MatrixXd::Zero(n, n);

    int wheel_dof = 3 * n_bodies;
    for (int b = 0; b < n_bodies; ++b) {
        const BodySpec& body = p.bodies[b];
        vm.M(3 * b + 0, 3 * b + 0) = body.sprung_mass;
        vm.M(3 * b + 1, 3 * b + 1) = body.pitch_inertia;
        vm.M(3 * b + 2, 3 * b + 2) = body.roll_inertia;
        for (const WheelSpec& w : body.wheels) {
            vm.M(wheel_dof, wheel_dof) = w.unsprung_mass;
            Eigen::RowVectorXd g = detail::corner_row(n, b, w.long_offset, w.lat_offset);
            g(wheel_dof) -= 1.0;  // suspension strain = corner - wheel
            vm.K += w.k_s * g.transpose() * g;
            vm.C += w.c_s * g.transpose() * g;
            if (ground_tyres) {
                vm.K(wheel_dof, wheel_dof) += w.k_t;
                vm.C(wheel_dof, wheel_dof) += w.c_t;
            }
            ++wheel_dof;
        }
    }
    if (p.hitch) {
        Eigen::RowVectorXd g = detail::corner_row(n, 0, p.hitch->x_front, 0.0) -
                               detail::corner_row(n, 1, p.hitch->x_rear, 0.0);
        vm.K += p.hitch->stiffness * g.transpose() * g;
        vm.C += p.hitch->damping * g.transpose() * g;
    }
    return vm;
}

// Assembled, simulation-ready vehicle: matrices, wheel table with static
// loads. Wheel longitudinal offsets are measured from the vehicle reference
// point (body-0 origin; the rear body reference sits at hitch alignment).
struct VehicleModel {
    VehicleParams params;
    VehicleMatrices mat;
    std::vector<WheelRef> wheels;
    double weight = 0;  // N

    int dofs() const { return static_cast<int>(mat.M.rows()); }
};

inline VehicleModel build_vehicle_model(const VehicleParams& p) {
    VehicleModel m;
    m.params = p;
    m.mat = vehicle_matrices(p);
    const int n_bodies = static_cast<int>(p.bodies.size());

    // rear-body wheel offsets are expressed in the front body's frame: the
    // rear reference is placed so the two hitch points coincide
    double rear_shift = 0.0;
    if (p.hitch) rear_shift = p.hitch->x_front - p.hitch->x_rear;

    int wheel_dof = 3 * n_bodies;
    for (int b = 0; b < n_bodies; ++b) {
        for (const WheelSpec& w : p.bodies[b].wheels) {
            WheelRef r;
            r.body = b;
            r.dof = wheel_dof++;
            r.long_offset = w.long_offset + (b == 1 ? rear_shift : 0.0);
            r.lat_offset = w.lat_offset;
            r.k_t = w.k_t;
            r.c_t = w.c_t;
            m.wheels.push_back(r);
        }
    }

    // static equilibrium under gravity: K x = F_g, wheel load = -k_t x_wheel
    const int n = m.dofs();
    Eigen::VectorXd fg = Eigen::VectorXd::Zero(n);
    int dof = 3 * n_bodies;
    for (int b = 0; b < n_bodies; ++b) {
        fg(3 * b) = -p.bodies[b].sprung_mass * kGravity;
        for (const WheelSpec& ws : p.bodies[b].wheels) fg(dof++) = -ws.unsprung_mass * kGravity;
    }
    Eigen::VectorXd x = m.mat.K.ldlt().solve(fg);
    if (!x.allFinite()) throw SolverError("vehicle: singular static system");
    m.weight = p.total_mass() * kGravity;
    for (WheelRef& w : m.wheels) w.static_load = -w.k_t * x(w.dof);
    return m;
}

// Per-wheel contact kinematics at one instant: the road surface height under
// the wheel (up-positive, deck motion plus roughness) and its rate.
struct ContactPoint {
    double surface = 0;       // m
    double surface_rate = 0;  // m/s
};

// Downward force on the bridge from wheel w given the current perturbation
// state. Negative values mean tyre tension; contact is bilateral by default
// (the paper's always-in-contact assumption), an optional unilateral floor
// clamps at zero and counts the event.
inline double wheel_contact_force(const WheelRef& w, const Eigen::VectorXd& u,
                                  const Eigen::VectorXd& v, const ContactPoint& c,
                                  bool unilateral = false, long* separation_events = nullptr) {
    const double compression = c.surface - u(w.dof);
    const double compression_rate = c.surface_rate - v(w.dof);
    double f = w.static_load + w.k_t * compression + w.c_t * compression_rate;
    if (f < 0.0) {
        if (separation_events) ++*separation_events;
        if (unilateral) f = 0.0;
    }
    return f;
}

// Ground-input generalised force for the vehicle equations.
inline void ground_force(const VehicleModel& m, const std::vector<ContactPoint>& contacts,
                         Eigen::VectorXd& f) {
    f.setZero(m.dofs());
    for (std::size_t i = 0; i < m.wheels.size(); ++i) {
        const WheelRef& w = m.wheels[i];
        f(w.dof) += w.k_t * contacts[i].surface + w.c_t * contacts[i].surface_rate;
    }
}

// --- parameter variability ---------------------------------------------------

struct VariabilityOptions {
    double unsprung_cv = 0.05;  // coefficient of variation of the uniform draw
    bool randomize_sprung = false;
    double sprung_cv = 0.05;
};

// Unsprung masses are drawn uniformly with a standard deviation of
// unsprung_cv times the nominal value (half-width sqrt(3)*cv*mean).
inline VehicleParams sample_params(const VehicleParams& nominal, Rng& rng,
                                   const VariabilityOptions& opt = {}) {
    VehicleParams p = nominal;
    const double hw = std::sqrt(3.0) * opt.unsprung_cv;
    for (auto& b : p.bodies)
        for (auto& w : b.wheels) w.unsprung_mass *= 1.0 + rng.uniform(-hw, hw);
    if (opt.randomize_sprung) {
        const double hws = std::sqrt(3.0) * opt.sprung_cv;
        for (auto& b : p.bodies) b.sprung_mass *= 1.0 + rng.uniform(-hws, hws);
    }
    return p;
}

// --- catalog file -------------------------------------------------------------

// Catalog format: one [vehicle] section per class with scalar body data and
// one axle list per line; see data/FORMATS.md.
struct VehicleCatalog {
    std::map<VehicleClass, VehicleParams> classes;

    const VehicleParams& nominal(VehicleClass c) const {
        auto it = classes.find(c);
        if (it == classes.end())
            throw Error(std::string("vehicle catalog has no entry for class ") + to_string(c));
        return it->second;
    }
};

namespace detail {

// axle line: offset half_track unsprung_mass k_s c_s k_t c_t  (per wheel)
inline void add_axle(BodySpec& body, const std::vector<double>& a, const std::string& file,
                     int line) {
    if (a.size() != 7)
        throw ParseError(file, line,
                         "axle needs 7 numbers: offset half_track m k_s c_s k_t c_t");
    for (int side = 0; side < 2; ++side) {
        WheelSpec w;
        w.long_offset = a[0];
        w.lat_offset = side == 0 ? -a[1] : a[1];
        w.unsprung_mass = a[2];
        w.k_s = a[3];
        w.c_s = a[4];
        w.k_t = a[5];
        w.c_t = a[6];
        body.wheels.push_back(w);
    }
}

inline BodySpec parse_body(const KvSection& s, const std::string& prefix, const std::string& file) {
    BodySpec b;
    b.sprung_mass = s.get_double(prefix + "mass");
    b.pitch_inertia = s.get_double(prefix + "pitch_inertia");
    b.roll_inertia = s.get_double(prefix + "roll_inertia");
    for (int i = 1;; ++i) {
        const std::string key = prefix + "axle" + std::to_string(i);
        if (!s.has(key)) break;
        add_axle(b, s.get_doubles(key), file, s.find(key)->line);
    }
    if (b.wheels.empty()) throw ParseError(file, s.line, "body '" + prefix + "' has no axles");
    return b;
}

}  // namespace detail

inline VehicleCatalog load_vehicle_catalog(const std::string& path) {
    const KvFile kv = parse_keyval_file(path);
    VehicleCatalog cat;
    for (const KvSection* s : kv.all("vehicle")) {
        VehicleParams p;
        p.cls = parse_vehicle_class(s->get("class"));
        p.length = s->get_double("length");
        p.speed_cap_kmh = s->get_double("speed_cap_kmh");
        if (s->has("trailer_mass")) {
            p.bodies.push_back(detail::parse_body(*s, "", path));
            p.bodies.push_back(detail::parse_body(*s, "trailer_", path));
            HitchSpec h;
            h.x_front = s->get_double("hitch_x");
            h.x_rear = s->get_double("trailer_hitch_x");
            if (s->has("hitch_stiffness")) h.stiffness = s->get_double("hitch_stiffness");
            if (s->has("hitch_damping")) h.damping = s->get_double("hitch_damping");
            p.hitch = h;
        } else {
            p.bodies.push_back(detail::parse_body(*s, "", path));
        }
        p.validate();
        if (cat.classes.count(p.cls))
            throw ParseError(path, s->line, std::string("duplicate vehicle class ") + to_string(p.cls));
        cat.classes[p.cls] = std::move(p);
    }
    if (cat.classes.empty()) throw ParseError(path, 0, "vehicle catalog is empty");
    return cat;
}

}  // namespace wtb
