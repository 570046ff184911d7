#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "wtb/errors.hpp"
#include "wtb/keyval.hpp"

namespace wtb {

// Modal model of the bridge deck.
//
// Sign conventions used throughout the project:
//   h      vertical deck displacement, positive DOWNWARD
//   p      lateral deck displacement, positive along the mean wind
//   alpha  deck rotation, positive when the windward edge moves up; a
//          downward force F at lateral offset e (positive towards the
//          windward side) produces the generalised moment F*e, and the
//          downward surface displacement at that offset is h + e*alpha.
// With h positive down, the quasi-steady upwash term (w + h_dot + ...)
// is the relative vertical flow seen by a deck sinking into the wind.

enum class ModeKind { vertical, lateral, torsional };
enum class Dof { h, p, alpha };

inline Dof dof_of(ModeKind k) {
    switch (k) {
        case ModeKind::vertical: return Dof::h;
        case ModeKind::lateral: return Dof::p;
        default: return Dof::alpha;
    }
}

inline const char* to_string(ModeKind k) {
    switch (k) {
        case ModeKind::vertical: return "vertical";
        case ModeKind::lateral: return "lateral";
        default: return "torsional";
    }
}

struct DeckSection {
    double width_B = 0.0;                     // m
    double depth_H = 0.0;                     // m
    double mass_per_length = 0.0;             // kg/m
    double torsional_inertia_per_length = 0;  // kg m^2/m
};

struct Mode {
    int index = 0;  // label from the model file, unique
    ModeKind kind = ModeKind::vertical;
    double frequency_hz = 0.0;
    double damping_ratio = 0.0;
    double modal_mass = 0.0;    // kg (vertical/lateral) or kg m^2 (torsional)
    std::vector<double> shape;  // one value per grid node
};

struct ModalMatrices {
    std::vector<double> M, C, K;  // diagonal entries, one per mode
};

// Location of a span coordinate within the node grid, cached for repeated
// per-mode lookups at the same x.
struct SpanLocation {
    std::size_t seg = 0;  // shape is interpolated on [node seg, node seg+1]
    double t = 0.0;       // blend factor in [0, 1]
    double inv_dx = 0.0;  // 1 / segment length, for slopes
};

class ModalBridge {
public:
    DeckSection section;
    std::vector<double> node_grid;  // span coordinates, strictly increasing, starts at 0
    double main_span = 0.0;
    std::array<double, 2> side_spans{0.0, 0.0};
    std::vector<Mode> modes;

    double total_length() const { return node_grid.empty() ? 0.0 : node_grid.back(); }
    std::size_t mode_count() const { return modes.size(); }

    void validate(const std::string& origin = "bridge model") const {
        if (!(section.width_B > 0.0)) throw InvariantError(origin + ": width B must be positive");
        if (!(section.depth_H > 0.0)) throw InvariantError(origin + ": depth H must be positive");
        if (!(section.mass_per_length > 0.0))
            throw InvariantError(origin + ": mass per length must be positive");
        if (!(section.torsional_inertia_per_length > 0.0))
            throw InvariantError(origin + ": torsional inertia per length must be positive");
        if (node_grid.size() < 2) throw InvariantError(origin + ": node grid needs at least 2 nodes");
        for (std::size_t i = 1; i < node_grid.size(); ++i)
            if (!(node_grid[i] > node_grid[i - 1]))
                throw InvariantError(origin + ": node grid must be strictly increasing (node " +
                                     std::to_string(i) + ")");
        const double total = side_spans[0] + main_span + side_spans[1];
        if (std::abs(node_grid.front()) > 1e-9 || std::abs(node_grid.back() - total) > 1e-6)
            throw InvariantError(origin + ": node grid must cover [0, " + std::to_string(total) + "] m");
        if (modes.empty()) throw InvariantError(origin + ": no modes defined");
        bool has_vertical = false, has_torsional = false;
        std::set<int> seen;
        for (const auto& m : modes) {
            const std::string tag = origin + ": mode " + std::to_string(m.index);
            if (!seen.insert(m.index).second)
                throw InvariantError(tag + ": duplicate mode index");
            if (!(m.frequency_hz > 0.0)) throw InvariantError(tag + ": non-positive frequency");
            if (m.damping_ratio < 0.0) throw InvariantError(tag + ": negative damping ratio");
            if (!(m.modal_mass > 0.0)) throw InvariantError(tag + ": non-positive modal mass");
            if (m.shape.size() != node_grid.size())
                throw InvariantError(tag + ": shape has " + std::to_string(m.shape.size()) +
                                     " values, grid has " + std::to_string(node_grid.size()));
            has_vertical |= m.kind == ModeKind::vertical;
            has_torsional |= m.kind == ModeKind::torsional;
        }
        if (!has_vertical) throw InvariantError(origin + ": at least one vertical mode required");
        if (!has_torsional) throw InvariantError(origin + ": at least one torsional mode required");
    }

    SpanLocation locate(double x) const {
        if (x < node_grid.front() - 1e-9 || x > node_grid.back() + 1e-9)
            throw DomainError("span coordinate " + std::to_string(x) + " m outside [0, " +
                              std::to_string(node_grid.back()) + "] m");
        x = std::clamp(x, node_grid.front(), node_grid.back());
        // upper_bound over the grid; segment index in [0, n-2]
        auto it = std::upper_bound(node_grid.begin(), node_grid.end(), x);
        std::size_t seg = (it == node_grid.begin()) ? 0 : static_cast<std::size_t>(it - node_grid.begin() - 1);
        if (seg >= node_grid.size() - 1) seg = node_grid.size() - 2;
        SpanLocation loc;
        loc.seg = seg;
        const double dx = node_grid[seg + 1] - node_grid[seg];
        loc.inv_dx = 1.0 / dx;
        loc.t = (x - node_grid[seg]) * loc.inv_dx;
        return loc;
    }

    // Piecewise-linear shape value of mode j at a located position; the dof
    // filter returns 0 when it does not match the mode kind.
    double shape_value(std::size_t j, const SpanLocation& loc, Dof dof) const {
        const Mode& m = modes[j];
        if (dof_of(m.kind) != dof) return 0.0;
        const double a = m.shape[loc.seg];
        const double b = m.shape[loc.seg + 1];
        return a + loc.t * (b - a);
    }

    // Segment slope of mode j (piecewise constant under linear interpolation).
    double shape_slope(std::size_t j, const SpanLocation& loc, Dof dof) const {
        const Mode& m = modes[j];
        if (dof_of(m.kind) != dof) return 0.0;
        return (m.shape[loc.seg + 1] - m.shape[loc.seg]) * loc.inv_dx;
    }
};

// --- operations -------------------------------------------------------------

inline double shape_at(const ModalBridge& bridge, std::size_t mode_pos, double x, Dof dof) {
    if (mode_pos >= bridge.modes.size())
        throw DomainError("mode position " + std::to_string(mode_pos) + " out of range");
    return bridge.shape_value(mode_pos, bridge.locate(x), dof);
}

inline ModalMatrices assemble_modal_matrices(const ModalBridge& bridge) {
    ModalMatrices mm;
    const std::size_t n = bridge.modes.size();
    mm.M.resize(n);
    mm.C.resize(n);
    mm.K.resize(n);
    constexpr double two_pi = 6.283185307179586476925286766559;
    for (std::size_t j = 0; j < n; ++j) {
        const Mode& m = bridge.modes[j];
        const double omega = two_pi * m.frequency_hz;
        mm.M[j] = m.modal_mass;
        mm.K[j] = m.modal_mass * omega * omega;
        mm.C[j] = 2.0 * m.damping_ratio * m.modal_mass * omega;
    }
    return mm;
}

struct PointForce {
    double F_h = 0.0;      // N, positive down
    double F_p = 0.0;      // N, positive along-wind
    double F_alpha = 0.0;  // N m, positive windward-edge-up
};

inline void add_point_force(const ModalBridge& bridge, const SpanLocation& loc,
                            const PointForce& f, double* generalized) {
    for (std::size_t j = 0; j < bridge.modes.size(); ++j) {
        const Mode& m = bridge.modes[j];
        const double a = m.shape[loc.seg];
        const double b = m.shape[loc.seg + 1];
        const double phi = a + loc.t * (b - a);
        switch (m.kind) {
            case ModeKind::vertical: generalized[j] += phi * f.F_h; break;
            case ModeKind::lateral: generalized[j] += phi * f.F_p; break;
            case ModeKind::torsional: generalized[j] += phi * f.F_alpha; break;
        }
    }
}

inline std::vector<double> project_point_force(const ModalBridge& bridge, double x,
                                               const PointForce& f) {
    std::vector<double> q(bridge.modes.size(), 0.0);
    add_point_force(bridge, bridge.locate(x), f, q.data());
    return q;
}

struct DeckResponse {
    double h = 0.0;
    double p = 0.0;
    double alpha = 0.0;
};

inline DeckResponse physical_response_at(const ModalBridge& bridge, const double* q,
                                         std::size_t nq, const SpanLocation& loc) {
    if (nq != bridge.modes.size())
        throw DomainError("modal coordinate vector has size " + std::to_string(nq) +
                          ", bridge has " + std::to_string(bridge.modes.size()) + " modes");
    DeckResponse r;
    for (std::size_t j = 0; j < nq; ++j) {
        const Mode& m = bridge.modes[j];
        const double a = m.shape[loc.seg];
        const double b = m.shape[loc.seg + 1];
        const double phi = a + loc.t * (b - a);
        switch (m.kind) {
            case ModeKind::vertical: r.h += phi * q[j]; break;
            case ModeKind::lateral: r.p += phi * q[j]; break;
            case ModeKind::torsional: r.alpha += phi * q[j]; break;
        }
    }
    return r;
}

inline DeckResponse physical_response(const ModalBridge& bridge, const std::vector<double>& q,
                                      double x) {
    return physical_response_at(bridge, q.data(), q.size(), bridge.locate(x));
}

// --- model file -------------------------------------------------------------

inline ModeKind parse_mode_kind(const std::string& word, const std::string& file, int line) {
    if (word == "vertical") return ModeKind::vertical;
    if (word == "lateral") return ModeKind::lateral;
    if (word == "torsional") return ModeKind::torsional;
    throw ParseError(file, line, "unknown mode kind '" + word + "' (vertical|lateral|torsional)");
}

inline ModalBridge load_bridge(const std::string& model_file) {
    const KvFile kv = parse_keyval_file(model_file);
    ModalBridge b;

    const KvSection& sec = kv.unique("section");
    b.section.width_B = sec.get_double("B");
    b.section.depth_H = sec.get_double("H");
    b.section.mass_per_length = sec.get_double("mass");
    b.section.torsional_inertia_per_length = sec.get_double("inertia");
    b.main_span = sec.get_double("main_span");
    const auto spans = sec.get_doubles("side_spans");
    if (spans.size() != 2)
        throw ParseError(model_file, sec.line, "side_spans must list exactly two lengths");
    b.side_spans = {spans[0], spans[1]};

    b.node_grid = kv.unique("grid").get_doubles("x");

    for (const KvSection* ms : kv.all("mode")) {
        Mode m;
        m.index = static_cast<int>(ms->get_int("index"));
        m.kind = parse_mode_kind(ms->get("kind"), model_file, ms->line);
        m.frequency_hz = ms->get_double("frequency_hz");
        m.damping_ratio = ms->get_double("damping_ratio");
        m.modal_mass = ms->get_double("modal_mass");
        m.shape = ms->get_doubles("shape");
        b.modes.push_back(std::move(m));
    }

    b.validate(model_file);
    return b;
}

}  // namespace wtb
