#include "sympert/flowbox.hpp"

#include "sympert/poisson_space.hpp"

#include <cmath>

namespace sympert {

double solve_tau(const HamiltonianField& h, const Vec& m, const Section& sigma,
                 const TauOptions& opts)
{
    if (sigma.normal.size() != m.size() || sigma.point.size() != m.size())
        throw dimension_error("solve_tau: section/point dimensions");

    auto at_time = [&](double t) { return integrate_flow(h, m, t, opts.step).endpoint; };
    auto section_value = [&](double t) { return sigma.value(at_time(t)); };

    const double s0 = sigma.value(m);
    if (std::abs(s0) <= opts.tol) return 0.0;

    // Newton from the hint (or the first-order crossing estimate)
    double t = opts.hint;
    if (t == 0.0) {
        const double rate0 = sigma.normal.dot(hamiltonian_vector_field(h, m));
        if (std::abs(rate0) > 1e-12) t = -s0 / rate0;
    }
    for (int it = 0; it < 40; ++it) {
        if (std::abs(t) > opts.t_max) break;
        const Vec pt = at_time(t);
        const double s = sigma.value(pt);
        if (std::abs(s) <= opts.tol) return t;
        const double rate = sigma.normal.dot(hamiltonian_vector_field(h, pt));
        if (std::abs(rate) < 1e-12) break;
        t -= s / rate;
    }

    // bracket scan fallback, both time directions
    const int scan = 400;
    for (const double sign : {1.0, -1.0}) {
        double prev_t = 0.0, prev_s = s0;
        for (int k = 1; k <= scan; ++k) {
            const double tk = sign * opts.t_max * k / scan;
            const double sk = section_value(tk);
            if (std::abs(sk) <= opts.tol) return tk;
            if ((sk < 0) != (prev_s < 0)) {
                double lo = prev_t, hi = tk;
                double slo = prev_s;
                for (int it = 0; it < 100; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double smid = section_value(mid);
                    if (std::abs(smid) <= opts.tol) return mid;
                    if ((smid < 0) == (slo < 0)) {
                        lo = mid;
                        slo = smid;
                    } else {
                        hi = mid;
                    }
                }
                return 0.5 * (lo + hi);
            }
            prev_t = tk;
            prev_s = sk;
        }
    }
    throw NoCrossingError("solve_tau: no section crossing within |t| <= " +
                          std::to_string(opts.t_max));
}

namespace {

Vec grad_tau_fd(const HamiltonianField& h, const Section& sigma, const Vec& m, double fd_step,
                const TauOptions& opts, double tau_center)
{
    const int dim = static_cast<int>(m.size());
    const double eps = fd_step * std::max(1.0, m.norm());
    TauOptions local = opts;
    local.hint = tau_center;
    Vec g(dim);
    for (int j = 0; j < dim; ++j) {
        Vec plus = m, minus = m;
        plus[j] += eps;
        minus[j] -= eps;
        g[j] = (solve_tau(h, plus, sigma, local) - solve_tau(h, minus, sigma, local)) / (2.0 * eps);
    }
    return g;
}

// X_G = Jhat grad G in the orientation that raises H at unit rate.
Vec conjugate_direction(const Vec& grad_g, int pairs, int n)
{
    Vec x = Vec::Zero(2 * pairs + n);
    for (int j = 0; j < pairs; ++j) {
        x[j] = -grad_g[pairs + j];
        x[pairs + j] = grad_g[j];
    }
    return x;
}

} // namespace

ConjugateData conjugate_field(const HamiltonianField& h, const Section& sigma, const Vec& m,
                              double fd_step, const TauOptions& opts)
{
    const double tau = solve_tau(h, m, sigma, opts);
    ConjugateData out;
    out.g = -tau;
    out.grad_g = -grad_tau_fd(h, sigma, m, fd_step, opts, tau);
    out.x_g = conjugate_direction(out.grad_g, h.pairs(), h.n());
    out.bracket = out.grad_g.dot(hamiltonian_vector_field(h, m));
    return out;
}

LeafChart graph_leaf_chart(const HamiltonianField& h, double energy, int d, int n)
{
    LeafChart leaf;
    leaf.fwd = [d, n](const Vec& m) {
        Vec out(2 * (d - 1) + n);
        for (int i = 1; i < d; ++i) {
            out[i - 1] = m[i];
            out[(d - 1) + i - 1] = m[d + i];
        }
        for (int k = 0; k < n; ++k) out[2 * (d - 1) + k] = m[2 * d + k];
        return out;
    };
    leaf.inv = [h, energy, d, n](const Vec& hat) {
        Vec m = Vec::Zero(2 * d + n);
        for (int i = 1; i < d; ++i) {
            m[i] = hat[i - 1];
            m[d + i] = hat[(d - 1) + i - 1];
        }
        for (int k = 0; k < n; ++k) m[2 * d + k] = hat[2 * (d - 1) + k];
        // recover y_1 from H = energy (Newton; exact in one step when H is
        // linear in y_1, as for every built-in example)
        double y1 = 0.0;
        for (int it = 0; it < 50; ++it) {
            m[d] = y1;
            const double f = h.value(m) - energy;
            if (std::abs(f) <= 1e-14) break;
            const double df = h.gradient(m)[d];
            if (std::abs(df) < 1e-10)
                throw ChartError("graph_leaf_chart: dH/dy_1 vanished while solving the graph");
            y1 -= f / df;
        }
        m[d] = y1;
        return m;
    };
    return leaf;
}

FlowboxChart::FlowboxChart(HamiltonianField h, Vec base, Section sigma, LeafChart leaf)
    : h_(std::move(h)), base_(std::move(base)), sigma_(std::move(sigma)), leaf_(std::move(leaf)),
      energy_(h_.value(base_)), d_(h_.pairs()), n_(h_.n())
{
    const Vec xh = hamiltonian_vector_field(h_, base_);
    if (xh.norm() < 1e-12)
        throw DegenerateBaseError("build_flowbox_chart: X_H vanishes at the base point");

    // linear Poisson-Dirac pairing at the base point
    const ConjugateData cd = conjugate_field(h_, sigma_, base_, 1e-5);
    const Vec dh = h_.gradient(base_);
    const double hh = dh.dot(xh);            // dH(X_H) = 0
    const double hg = dh.dot(cd.x_g);        // dH(X_G) = 1
    const double gh = cd.grad_g.dot(xh);     // dG(X_H) = 1
    const double gg = cd.grad_g.dot(cd.x_g); // dG(X_G) = 0
    pairing_det_ = hh * gg - hg * gh;
    if (std::abs(pairing_det_) < 1e-6)
        throw DegenerateBaseError("build_flowbox_chart: (dH, dG) pairing is degenerate, det = " +
                                  std::to_string(pairing_det_));
}

Vec FlowboxChart::x_g_at(const Vec& p, double tau_hint) const
{
    TauOptions opts;
    opts.hint = tau_hint;
    const Vec grad_g = -grad_tau_fd(h_, sigma_, p, 1e-5, opts, tau_hint);
    return conjugate_direction(grad_g, d_, n_);
}

Vec FlowboxChart::conjugate_flow(const Vec& m, double t) const
{
    if (t == 0.0) return m;
    const int steps = std::max(4, static_cast<int>(std::ceil(std::abs(t) / 0.02)));
    const double dt = t / steps;
    Vec s = m;
    double hint = solve_tau(h_, s, sigma_);
    for (int k = 0; k < steps; ++k) {
        // classic RK4 on the conjugate field; tau is flow-invariant along
        // X_G so the hint stays valid across the step
        const Vec k1 = x_g_at(s, hint);
        const Vec k2 = x_g_at(s + 0.5 * dt * k1, hint);
        const Vec k3 = x_g_at(s + 0.5 * dt * k2, hint);
        const Vec k4 = x_g_at(s + dt * k3, hint);
        s += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return s;
}

Vec FlowboxChart::base_flow(const Vec& m, double t) const
{
    return integrate_flow(h_, m, t).endpoint;
}

Vec FlowboxChart::forward(const Vec& m) const
{
    const double tau = solve_tau(h_, m, sigma_);
    const Vec on_sigma = base_flow(m, tau);
    const double hm = h_.value(m);
    const Vec on_leaf = conjugate_flow(on_sigma, energy_ - hm);
    const Vec hat = leaf_.fwd(on_leaf);

    Vec y(2 * d_ + n_);
    y[0] = -tau;
    for (int i = 1; i < d_; ++i) y[i] = hat[i - 1];
    y[d_] = hm;
    for (int i = 1; i < d_; ++i) y[d_ + i] = hat[(d_ - 1) + i - 1];
    for (int k = 0; k < n_; ++k) y[2 * d_ + k] = hat[2 * (d_ - 1) + k];
    return y;
}

Vec FlowboxChart::inverse(const Vec& y) const
{
    Vec hat(2 * (d_ - 1) + n_);
    for (int i = 1; i < d_; ++i) {
        hat[i - 1] = y[i];
        hat[(d_ - 1) + i - 1] = y[d_ + i];
    }
    for (int k = 0; k < n_; ++k) hat[2 * (d_ - 1) + k] = y[2 * d_ + k];

    const Vec on_leaf = leaf_.inv(hat);
    const Vec moved = conjugate_flow(on_leaf, y[d_] - energy_);
    return base_flow(moved, y[0]);
}

FlowboxChart build_flowbox_chart(const HamiltonianField& h, const Vec& x, const Section& sigma,
                                 const LeafChart& leaf)
{
    return FlowboxChart(h, x, sigma, leaf);
}

ChartCheck verify_poisson_chart(const std::function<Vec(const Vec&)>& chart, int d, int n,
                                const std::vector<Vec>& samples, double tol, double fd_step)
{
    const Mat jhat = PoissonSpace(d, n).structure_matrix();
    ChartCheck out;
    out.samples = static_cast<int>(samples.size());
    for (const auto& m : samples) {
        const int dim = static_cast<int>(m.size());
        const double eps = fd_step * std::max(1.0, m.norm());
        Mat jac(dim, dim);
        for (int j = 0; j < dim; ++j) {
            Vec plus = m, minus = m;
            plus[j] += eps;
            minus[j] -= eps;
            jac.col(j) = (chart(plus) - chart(minus)) / (2.0 * eps);
        }
        out.max_defect = std::max(out.max_defect, matrix_norm(jac * jhat * jac.transpose() - jhat));
    }
    out.pass = out.max_defect <= tol;
    return out;
}

} // namespace sympert
