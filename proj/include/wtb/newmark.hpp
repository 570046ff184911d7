#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "wtb/errors.hpp"

namespace wtb {

// Implicit Newmark time integration, average-acceleration variant
// (beta = 1/4, gamma = 1/2): unconditionally stable, second order, no
// algorithmic damping. `advance` is a pure function of (previous state,
// end-of-step force), which is what the interaction fixed-point iteration
// needs: the same step can be re-solved with updated forces until the
// coupling converges, then committed.

struct ModalState {
    Eigen::ArrayXd u, v, a;

    static ModalState zero(Eigen::Index n) {
        ModalState s;
        s.u = Eigen::ArrayXd::Zero(n);
        s.v = Eigen::ArrayXd::Zero(n);
        s.a = Eigen::ArrayXd::Zero(n);
        return s;
    }
};

class NewmarkDiagonal {
public:
    NewmarkDiagonal() = default;

    NewmarkDiagonal(const Eigen::ArrayXd& M, const Eigen::ArrayXd& C, const Eigen::ArrayXd& K,
                    double dt)
        : M_(M), C_(C), dt_(dt) {
        if (!(dt > 0)) throw InvariantError("newmark: dt must be positive");
        a0_ = 4.0 / (dt * dt);
        a2_ = 4.0 / dt;
        a1_ = 2.0 / dt;
        keff_inv_ = 1.0 / (K + a0_ * M + a1_ * C);
    }

    Eigen::Index size() const { return M_.size(); }

    ModalState advance(const ModalState& s, const Eigen::ArrayXd& force) const {
        ModalState n;
        const Eigen::ArrayXd rhs =
            force + M_ * (a0_ * s.u + a2_ * s.v + s.a) + C_ * (a1_ * s.u + s.v);
        n.u = keff_inv_ * rhs;
        n.a = a0_ * (n.u - s.u) - a2_ * s.v - s.a;
        n.v = s.v + (0.5 * dt_) * (s.a + n.a);
        return n;
    }

    double dt() const { return dt_; }

private:
    Eigen::ArrayXd M_, C_, keff_inv_;
    double dt_ = 0.0, a0_ = 0.0, a1_ = 0.0, a2_ = 0.0;
};

struct DenseState {
    Eigen::VectorXd u, v, a;

    static DenseState zero(Eigen::Index n) {
        DenseState s;
        s.u = Eigen::VectorXd::Zero(n);
        s.v = Eigen::VectorXd::Zero(n);
        s.a = Eigen::VectorXd::Zero(n);
        return s;
    }
};

class NewmarkDense {
public:
    NewmarkDense() = default;

    NewmarkDense(const Eigen::MatrixXd& M, const Eigen::MatrixXd& C, const Eigen::MatrixXd& K,
                 double dt)
        : M_(M), C_(C), dt_(dt) {
        if (!(dt > 0)) throw InvariantError("newmark: dt must be positive");
        a0_ = 4.0 / (dt * dt);
        a2_ = 4.0 / dt;
        a1_ = 2.0 / dt;
        keff_ = (K + a0_ * M + a1_ * C).ldlt();
        if (keff_.info() != Eigen::Success)
            throw SolverError("newmark: effective stiffness factorisation failed");
    }

    Eigen::Index size() const { return M_.rows(); }

    DenseState advance(const DenseState& s, const Eigen::VectorXd& force) const {
        DenseState n;
        const Eigen::VectorXd rhs =
            force + M_ * (a0_ * s.u + a2_ * s.v + s.a) + C_ * (a1_ * s.u + s.v);
        n.u = keff_.solve(rhs);
        n.a = a0_ * (n.u - s.u) - a2_ * s.v - s.a;
        n.v = s.v + (0.5 * dt_) * (s.a + n.a);
        return n;
    }

private:
    Eigen::MatrixXd M_, C_;
    Eigen::LDLT<Eigen::MatrixXd> keff_;
    double dt_ = 0.0, a0_ = 0.0, a1_ = 0.0, a2_ = 0.0;
};

}  // namespace wtb
