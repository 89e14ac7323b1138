#pragma once

#include "sympert/factorization.hpp"
#include "sympert/flow.hpp"

#include <functional>

namespace sympert {

/// A base map together with its Jacobian, declared Poisson by the caller.
struct PoissonMap {
    std::string name;
    int d = 1;
    int n = 0;
    std::function<Vec(const Vec&)> eval;
    std::function<Mat(const Vec&)> jacobian;

    int dim() const { return 2 * d + n; }
};

PoissonMap identity_map(int d, int n);
PoissonMap translation_map(const Vec& v, int d, int n);
/// Linear map from a Pn(2d+n,R) matrix.
PoissonMap linear_poisson_map(const Mat& b, int d, int n);
/// Time-1 flow of the rotation generator: a nonlinear Poisson base map.
PoissonMap k_flow_map(double alpha, int i, int d, int n);

/// The composed perturbation g = phi^{-1} o h o phi o f of Theorem-2.1 type,
/// h = h_1 o ... o h_M with h_m = (Q_m)_pi o phi^1_{K_m} o (Q_m)_pi^{-1}.
class PerturbedMap {
public:
    PerturbedMap(PoissonMap base, Vec p, Mat target, double rho, Factorization fact);

    /// g(x); returns f(x) bitwise when every generator is inert at x.
    Vec operator()(const Vec& x) const;
    /// h(w) in chart coordinates centered at f(p).
    Vec apply_h(const Vec& w) const;
    /// Central-difference Jacobian of g (Richardson extrapolated).
    Mat jacobian(const Vec& x, double fd_step = 1e-4) const;
    /// Exact Jacobian via the closed-form stage derivatives (used by the
    /// Poisson-defect certification; the FD one stays for budgeted checks).
    Mat analytic_jacobian(const Vec& x) const;

    const PoissonMap& base() const { return base_; }
    const Vec& point() const { return p_; }
    const Vec& chart_center() const { return center_; }
    const Mat& target_A() const { return target_; }
    /// A_pi . D_p f, the derivative the construction realizes at p.
    const Mat& target_derivative() const { return target_derivative_; }
    double support_radius() const { return rho_; }
    double generator_scale() const { return k_scale_; }
    const Factorization& factorization() const { return fact_; }

private:
    struct Stage {
        Mat q;       // (Q_m)_pi, full dimension
        Mat q_inv;
        int plane;
        double angle;
    };

    PoissonMap base_;
    Vec p_;
    Vec center_;
    Mat target_;
    Mat target_derivative_;
    double rho_;
    double k_scale_;
    Factorization fact_;
    std::vector<Stage> stages_; // composition order: last stage applied first
};

/// Build the discrete realization at p: D_p g = A_pi . D_p f, g = f outside
/// the rho-ball preimage around f(p).
PerturbedMap realize_discrete(const PoissonMap& f, const Vec& p, const Mat& target, double rho,
                              const DecomposeOptions& opts = {});

/// The perturbed Hamiltonian of Proposition-5.1 type.
struct PerturbedHamiltonian {
    HamiltonianField field;  // H'
    Mat target;              // product the Poincare derivative realizes
    int d = 1;
    int n = 0;
    double rho = 1.0;        // support rescale factor
    double tube_hat_radius = 0.0; // hat-radius of the declared tube V
    Factorization factorization;
};

PerturbedHamiltonian realize_continuous(const Mat& target, double rho, int d, int n,
                                        const DecomposeOptions& opts = {});

struct GridSpec {
    int samples = 400;
    double radius = 1.0;
    unsigned long long seed = 2024;
};

struct NormReport {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double bound_expression = 0.0; // the paper-side expression the norm is fitted against
    double fitted_constant = 0.0;  // measured / bound_expression
};

/// |h - id|_{C1} over a grid in the chart ball (discrete case).
NormReport perturbation_size(const PerturbedMap& g, const GridSpec& grid);
/// |H' - H0|_{C2} over a grid in the tube (continuous case).
NormReport perturbation_size(const PerturbedHamiltonian& h, const GridSpec& grid);

} // namespace sympert
