#pragma once

#include "sympert/errors.hpp"
#include "sympert/poisson_space.hpp"

#include <optional>
#include <vector>

namespace sympert {

/// One conjugated planar rotation: realized matrix Q pi_k(R_angle) Q^{-1}
/// with Q symplectic (Q = I for plain pre-rotation factors).
struct RotationFactor {
    int plane = 1;        // k, 1-based
    double angle = 0.0;   // signed rotation angle
    Mat conjugator;       // full-size 2d x 2d symplectic Q
    bool pre_rotation = false; // true for the R_theta factors split off a diagonal

    Mat realized(int d) const;
};

struct FactorizationDiagnostics {
    double delta = 0.0;          // |A - I|
    double min_gap = 0.0;        // smallest eigenvalue gap of the L_1 used
    double c_fit = 0.0;          // max_i |R_i - I| / sqrt(delta)
    double c_P = 1.0;            // max_i |Q_i^{+-1}|
    int retries = 0;
    bool guard_binding = false;  // a-priori gap/4 guard of the eigen step not met
};

struct Factorization {
    Mat target;
    std::vector<RotationFactor> factors;
    double residual = 0.0;
    FactorizationDiagnostics diagnostics;

    Mat product(int d) const;
};

struct PlanarFactor {
    double theta = 0.0; // pre-rotation angle, in [0, pi/2]
    double xi = 0.0;    // signed conjugated angle, |xi| in [0, pi/2]
    Mat p;              // 2x2, det 1
};

/// Splits diag(eta, 1/eta) = R_theta * (P R_xi P^{-1}) with
/// 1 - cos theta = |eta - 1| and cos xi = (eta + 1/eta)/2 * cos theta.
/// eta = 1 returns the inert triple (0, 0, I).
PlanarFactor planar_factor(double eta);

/// Eigenpair of A continuing (L_ii, e_i) for diagonal L with distinct
/// entries; the eigenvector is unit with <v, e_i> > 0.
std::pair<double, Vec> perturbed_eigenpair(const Mat& a, const Vec& l_diag, int i);

struct SymplecticDiagonalization {
    Vec eigenvalues; // d entries; the full spectrum is (mu, 1/mu)
    Mat s;           // symplectic, A = S diag(mu, 1/mu) S^{-1}
    bool guard_ok = true;
};

/// Symplectic eigenbasis of A near a diagonal symplectic L
/// (l_diag holds the first d entries lambda_1..lambda_d).
/// `enforce_guard` keeps the literal gap/4 precondition; the factorization
/// pipeline disables it and relies on post-hoc spectral checks.
SymplecticDiagonalization symplectic_diagonalize(const Mat& a, const Vec& l_diag,
                                                 bool enforce_guard = true);

struct DecomposeOptions {
    double epsilon0 = 0.15;   // near-identity regime bound
    double residual_tol = 1e-9;
    int max_retries = 5;
    std::optional<unsigned long long> retry_seed; // jitter source; fixed default
};

/// Lemma-3.4 pipeline: A = L1 * (S L2 S^{-1}) with both diagonals split into
/// per-plane factors, at most 4d conjugated rotations in total.
Factorization decompose_near_identity(const Mat& a, const DecomposeOptions& opts = {});

} // namespace sympert
