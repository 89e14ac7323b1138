#pragma once

#include "sympert/flow.hpp"

#include <functional>

namespace sympert {

/// Affine hyperplane {m : normal . (m - point) = 0}.
struct Section {
    Vec normal;
    Vec point;

    double value(const Vec& m) const { return normal.dot(m - point); }
};

struct TauOptions {
    double step = 1e-3;
    double t_max = 10.0;
    double tol = 1e-13;
    double hint = 0.0; // initial guess for the crossing time
};

/// Crossing time tau with phi_H^tau(m) on the section, Newton with a
/// bracketing fallback.
double solve_tau(const HamiltonianField& h, const Vec& m, const Section& sigma,
                 const TauOptions& opts = {});

struct ConjugateData {
    double g = 0.0;       // G(m) = -tau(m)
    Vec grad_g;           // by central differences of tau
    Vec x_g;              // conjugate flow direction (raises H at unit rate)
    double bracket = 0.0; // {H, G} = dG(X_H)
};

/// G = -tau and its derived quantities at m. fd_step scales with max(1,|m|).
ConjugateData conjugate_field(const HamiltonianField& h, const Section& sigma, const Vec& m,
                              double fd_step = 1e-6, const TauOptions& opts = {});

/// Darboux chart of the leaf Sigma_e, supplied per test case:
/// fwd maps ambient points of Sigma_e to (xhat, yhat, z) coordinates,
/// inv embeds such coordinates back into the ambient space.
struct LeafChart {
    std::function<Vec(const Vec&)> fwd;
    std::function<Vec(const Vec&)> inv;
};

/// Graph-type leaf chart for {x_1 = 0, H = e} when dH/dy_1 is bounded away
/// from zero: forward drops (x_1, y_1), inverse recovers y_1 by a 1-D Newton.
LeafChart graph_leaf_chart(const HamiltonianField& h, double energy, int d, int n);

class FlowboxChart {
public:
    FlowboxChart(HamiltonianField h, Vec base, Section sigma, LeafChart leaf);

    /// g(m) = (-tau, h1 o proj(m), H(m), h2 o proj(m), h3 o proj(m)).
    Vec forward(const Vec& m) const;
    /// g^{-1}(y) = phi_H^{y_1} o phi_G^{y_{d+1}-e} o leaf.inv(y-hat).
    Vec inverse(const Vec& y) const;

    /// Flow of the conjugate direction X_G for time t.
    Vec conjugate_flow(const Vec& m, double t) const;
    /// Flow of X_H for time t.
    Vec base_flow(const Vec& m, double t) const;

    double energy() const { return energy_; }
    const Vec& base_point() const { return base_; }
    const HamiltonianField& hamiltonian() const { return h_; }
    const Section& section() const { return sigma_; }

    /// Nondegeneracy of the (dH, dG) pairing at the base point.
    double pairing_determinant() const { return pairing_det_; }

private:
    Vec x_g_at(const Vec& p, double tau_hint) const;

    HamiltonianField h_;
    Vec base_;
    Section sigma_;
    LeafChart leaf_;
    double energy_;
    int d_;
    int n_;
    double pairing_det_ = 0.0;
};

/// Checks X_H(x) != 0 and the linear Poisson-Dirac pairing, then wires the
/// forward/inverse evaluators.
FlowboxChart build_flowbox_chart(const HamiltonianField& h, const Vec& x, const Section& sigma,
                                 const LeafChart& leaf);

struct ChartCheck {
    double max_defect = 0.0;
    int samples = 0;
    bool pass = false;
};

/// Max |Dg Jhat Dg^T - Jhat| over the samples; Dg by central differences.
ChartCheck verify_poisson_chart(const std::function<Vec(const Vec&)>& chart, int d, int n,
                                const std::vector<Vec>& samples, double tol, double fd_step = 1e-3);

} // namespace sympert
