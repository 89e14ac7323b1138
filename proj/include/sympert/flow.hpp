#pragma once

#include "sympert/errors.hpp"
#include "sympert/hamiltonian.hpp"

namespace sympert {

/// X_H = (dH/dy, -dH/dx, 0): the canonical-structure image of dH.
/// The z-components are always zero.
Vec hamiltonian_vector_field(const HamiltonianField& h, const Vec& p);

struct FlowResult {
    Vec endpoint;
    double time = 0.0;
    long steps = 0;
    double drift = 0.0; // max |H(x(t)) - H(x0)| along the trajectory
};

/// Classical fixed-step 4th-order integration of X_H.
FlowResult integrate_flow(const HamiltonianField& h, const Vec& x0, double t, double step = 1e-3);

/// Same, recording the trajectory (t, state) at every step.
FlowResult integrate_flow_trace(const HamiltonianField& h, const Vec& x0, double t, double step,
                                std::vector<std::pair<double, Vec>>& trace);

/// Exact flow of the rotation generator K_i: each conjugate pair k turns by
/// t * alpha * theta_k(p), with theta_i = l'(rho) rho_i + l(rho) and
/// theta_j = l'(rho) rho_i for j != i; rho, rho_i are constants of motion.
Vec closed_form_K_flow(double alpha, int i, double t, const Vec& p, int d, int n);

/// Exact Jacobian of the K-flow map p -> closed_form_K_flow(alpha, i, t, p):
/// the block rotation plus the rank-structured terms from the angle gradients.
Mat closed_form_K_flow_jacobian(double alpha, int i, double t, const Vec& p, int d, int n);

/// Exact flow of H0 + Htilde (single transit) inside the plateau tube:
/// x_1(t) = x_1 + t, the hat pair i rotates by alpha * (L(2x_1+2t-1) - L(2x_1-1))
/// with L the bump antiderivative, and y_1 follows the exact bracket formula.
Vec closed_form_transit_flow(double alpha, int i, double t, const Vec& p, int d, int n);

/// Central-difference Jacobian of the time-t flow map.
Mat flow_jacobian(const HamiltonianField& h, const Vec& x0, double t, double fd_step = 1e-5,
                  double step = 1e-3, bool richardson = false);

struct PoincareResult {
    Vec hit;                 // state on the target section
    double tau = 0.0;        // return time
    Mat jacobian;            // 2d x 2d, transversal (hat) coordinates
    double section_residual = 0.0;
};

struct PoincareOptions {
    double step = 1e-3;
    double fd_step = 1e-5;
    double t_max = 10.0;
    bool with_jacobian = true;
};

/// First forward crossing of the hyperplane x_1 = section; the crossing time
/// is refined by bisection from the last pre-crossing state. The Jacobian is
/// taken in the transversal coordinates (x_2..x_{pairs}, y_2..y_{pairs}).
PoincareResult poincare_map(const HamiltonianField& h, const Vec& x0, double section,
                            const PoincareOptions& opts = {});

} // namespace sympert
