#pragma once

#include "sympert/bump.hpp"
#include "sympert/linalg.hpp"

#include <memory>
#include <string>
#include <vector>

namespace sympert {

// All generated fields live on R^{2P+n} with coordinates
// (x_1..x_P, y_1..y_P, z_1..z_n); P is the number of conjugate pairs.
//
// Sign conventions (fixed project-wide, see README):
//   X_H = (dH/dy, -dH/dx, 0), so H0 = y_1 flows as x_1(t) = x_1 + t.
//   The rotation generator for nominal angle alpha carries the field value
//   -alpha l(rho) rho_i, so its time-1 flow is exactly pi_i(R_alpha).
//   The transit generator carries -2 alpha l(2x_1-1) l(y_1) l(rho^) rho^_i,
//   so a full transit rotates the i-th hat pair by exactly alpha
//   (int_0^1 l(2s-1) ds = 1/2 for the unit-mass bump).

enum class FieldKind { linear, polynomial, rotation, transit, chained, rescaled, dilated };

struct ChainFactor {
    Mat conjugator;   // P_k in Sp(2d, R), fed through Phi
    int plane = 1;    // i(k), 1-based
    double alpha = 0.0;
};

struct MonomialTerm {
    double coeff = 0.0;
    std::vector<std::pair<int, int>> powers; // (0-based coordinate, exponent)
};

class FieldImpl;

/// Immutable scalar field with analytic value and gradient.
class HamiltonianField {
public:
    double value(const Vec& p) const;
    Vec gradient(const Vec& p) const;

    int pairs() const;
    int n() const;
    int dim() const;
    FieldKind kind() const;

    /// Rotation parameters (rotation/transit kinds), 0 otherwise.
    double alpha() const;
    int plane() const;
    /// Scale factor (rescaled/dilated kinds), 1 otherwise.
    double scale() const;
    const std::vector<ChainFactor>& chain_factors() const;
    const HamiltonianField* inner() const;

    explicit HamiltonianField(std::shared_ptr<const FieldImpl> impl);

private:
    std::shared_ptr<const FieldImpl> impl_;
};

/// H(p) = coeffs . p on R^{2P+n}.
HamiltonianField make_linear_hamiltonian(const Vec& coeffs, int pairs, int n);

/// H0 = y_1 on R^{2P+n}.
HamiltonianField make_H0(int pairs, int n);

/// Sparse polynomial sum of monomials.
HamiltonianField make_polynomial_hamiltonian(std::vector<MonomialTerm> terms, int pairs, int n);

/// K_i: rotates the conjugate pair (x_i, y_i) by alpha per unit time inside
/// the plateau; identically zero for rho >= 1. Ambient R^{2d+n}.
HamiltonianField make_rotation_hamiltonian(double alpha, int i, int d, int n);

/// Transit generator on the enlarged space R^{2(d+1)+n}: supported in
/// 0 < x_1 < 1, |y_1| < 1, rho^ < 1; a transit across x_1 in [0,1] rotates
/// the hat pair i by alpha.
HamiltonianField make_transit_hamiltonian(double alpha, int i, int d, int n);

/// H = H0 + N sum_k Htilde_{i(k)} o Phi(P_k) o T_k on R^{2(d+1)+n} with
/// T_k(x,y,z) = (N x_1 - k + 1, x_2, ..., z_n).
HamiltonianField make_chained_hamiltonian(const std::vector<ChainFactor>& factors, int d, int n);

/// rho H(p / rho): shrinks the support to rho * support, flow satisfies
/// phi^t_new = psi^{-1} o phi^{t/rho}_H o psi with psi(p) = p/rho.
HamiltonianField rescale_support(const HamiltonianField& h, double rho);

/// rho^2 H(p / rho): shrinks the support while preserving time, so the
/// time-1 map stays a time-1 map (used by the discrete realization).
HamiltonianField dilate_support(const HamiltonianField& h, double rho);

double rho_of(const Vec& p);
double rho_i_of(const Vec& p, int i, int pairs);

} // namespace sympert
