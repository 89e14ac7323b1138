#include "sympert/flow.hpp"

#include <cmath>

namespace sympert {

Vec hamiltonian_vector_field(const HamiltonianField& h, const Vec& p)
{
    const Vec g = h.gradient(p); // checks dimensions
    const int pairs = h.pairs();
    Vec x = Vec::Zero(p.size());
    for (int j = 0; j < pairs; ++j) {
        x[j] = g[pairs + j];
        x[pairs + j] = -g[j];
    }
    return x;
}

namespace {

void rk4_step(const HamiltonianField& h, Vec& s, double dt)
{
    const Vec k1 = hamiltonian_vector_field(h, s);
    const Vec k2 = hamiltonian_vector_field(h, s + 0.5 * dt * k1);
    const Vec k3 = hamiltonian_vector_field(h, s + 0.5 * dt * k2);
    const Vec k4 = hamiltonian_vector_field(h, s + dt * k3);
    s += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void check_finite(const Vec& s)
{
    if (!s.allFinite()) throw DivergedError("integrate_flow: non-finite state encountered");
}

template <typename OnStep>
FlowResult run_flow(const HamiltonianField& h, const Vec& x0, double t, double step, OnStep&& on_step)
{
    if (step <= 0) throw domain_error("integrate_flow: step must be positive");
    if (!std::isfinite(t)) throw domain_error("integrate_flow: time must be finite");

    FlowResult res;
    res.endpoint = x0;
    const double h0 = h.value(x0);
    const double dir = t >= 0 ? 1.0 : -1.0;
    double remaining = std::abs(t);
    double now = 0.0;
    while (remaining > 0.0) {
        const double dt = std::min(step, remaining);
        rk4_step(h, res.endpoint, dir * dt);
        check_finite(res.endpoint);
        remaining -= dt;
        now += dir * dt;
        ++res.steps;
        res.drift = std::max(res.drift, std::abs(h.value(res.endpoint) - h0));
        on_step(now, res.endpoint);
    }
    res.time = t;
    return res;
}

} // namespace

FlowResult integrate_flow(const HamiltonianField& h, const Vec& x0, double t, double step)
{
    return run_flow(h, x0, t, step, [](double, const Vec&) {});
}

FlowResult integrate_flow_trace(const HamiltonianField& h, const Vec& x0, double t, double step,
                                std::vector<std::pair<double, Vec>>& trace)
{
    trace.clear();
    trace.emplace_back(0.0, x0);
    return run_flow(h, x0, t, step,
                    [&trace](double now, const Vec& s) { trace.emplace_back(now, s); });
}

Vec closed_form_K_flow(double alpha, int i, double t, const Vec& p, int d, int n)
{
    if (p.size() != 2 * d + n) throw dimension_error("closed_form_K_flow: point dimension");
    if (i < 1 || i > d) throw domain_error("closed_form_K_flow: plane out of range");
    const double rho = rho_of(p);
    if (rho >= 1.0) return p;
    const double ri = rho_i_of(p, i, d);
    const double l = bump().value(rho);
    const double l1 = bump().d1(rho);
    const double theta_in = l1 * ri + l; // plane i
    const double theta_out = l1 * ri;    // planes j != i
    Vec q = p;
    for (int k = 1; k <= d; ++k) {
        const double angle = t * alpha * (k == i ? theta_in : theta_out);
        if (angle == 0.0) continue;
        const double c = std::cos(angle), s = std::sin(angle);
        const double x = q[k - 1], y = q[d + k - 1];
        q[k - 1] = c * x - s * y;
        q[d + k - 1] = s * x + c * y;
    }
    return q;
}

Mat closed_form_K_flow_jacobian(double alpha, int i, double t, const Vec& p, int d, int n)
{
    if (p.size() != 2 * d + n) throw dimension_error("closed_form_K_flow_jacobian: point dimension");
    if (i < 1 || i > d) throw domain_error("closed_form_K_flow_jacobian: plane out of range");
    const int dim = 2 * d + n;
    const double rho = rho_of(p);
    if (rho >= 1.0) return Mat::Identity(dim, dim);

    const double l = bump().value(rho);
    const double l1 = bump().d1(rho);
    const double l2 = bump().d2(rho);
    const double ri = rho_i_of(p, i, d);

    Vec gi = Vec::Zero(dim); // grad rho_i
    gi[i - 1] = p[i - 1];
    gi[d + i - 1] = p[d + i - 1];

    // angle_k = t alpha theta_k with theta_i = l' rho_i + l, theta_j = l' rho_i
    const Vec grad_theta_out = l2 * ri * p + l1 * gi;         // planes j != i
    const Vec grad_theta_in = grad_theta_out + l1 * p;        // plane i

    Mat jac = Mat::Zero(dim, dim);
    for (int k = 2 * d; k < dim; ++k) jac(k, k) = 1.0;
    for (int k = 1; k <= d; ++k) {
        const double theta = (k == i) ? l1 * ri + l : l1 * ri;
        const double angle = t * alpha * theta;
        const double c = std::cos(angle), s = std::sin(angle);
        const int a = k - 1, b = d + k - 1;
        jac(a, a) = c;
        jac(a, b) = -s;
        jac(b, a) = s;
        jac(b, b) = c;
        // rotation-rate column terms: d/dangle (R p) outer grad(angle)
        const double x = p[a], y = p[b];
        const double vx = -s * x - c * y;
        const double vy = c * x - s * y;
        const Vec& grad = (k == i) ? grad_theta_in : grad_theta_out;
        jac.row(a) += (t * alpha * vx) * grad.transpose();
        jac.row(b) += (t * alpha * vy) * grad.transpose();
    }
    return jac;
}

Vec closed_form_transit_flow(double alpha, int i, double t, const Vec& p, int d, int n)
{
    if (p.size() != 2 * (d + 1) + n) throw dimension_error("closed_form_transit_flow: point dimension");
    if (i < 1 || i > d) throw domain_error("closed_form_transit_flow: plane out of range");

    const int y1 = d + 1;
    // hat vector (xhat, yhat, z)
    Vec hat(2 * d + n);
    for (int k = 1; k <= d; ++k) {
        hat[k - 1] = p[k];
        hat[d + k - 1] = p[d + 1 + k];
    }
    for (int k = 0; k < n; ++k) hat[2 * d + k] = p[2 * (d + 1) + k];

    const double rho_hat = rho_of(hat);
    const double ri = rho_i_of(hat, i, d);
    if (rho_hat > bump().plateau_radius())
        throw OutOfTubeError("closed_form_transit_flow: hat point leaves the bump plateau");
    if (std::abs(p[y1]) + 2.0 * std::abs(alpha) * ri >= bump().plateau_radius())
        throw OutOfTubeError("closed_form_transit_flow: y_1 leaves the bump plateau");

    const double x1 = p[0];
    const double theta = alpha * (bump().antiderivative(2.0 * (x1 + t) - 1.0) -
                                  bump().antiderivative(2.0 * x1 - 1.0));
    Vec q = p;
    q[0] = x1 + t;
    q[y1] = p[y1] + 2.0 * alpha * ri *
                        (bump().value(2.0 * (x1 + t) - 1.0) - bump().value(2.0 * x1 - 1.0));
    if (theta != 0.0) {
        const double c = std::cos(theta), s = std::sin(theta);
        const double x = p[i], y = p[d + 1 + i];
        q[i] = c * x - s * y;
        q[d + 1 + i] = s * x + c * y;
    }
    return q;
}

Mat flow_jacobian(const HamiltonianField& h, const Vec& x0, double t, double fd_step, double step,
                  bool richardson)
{
    const int dim = static_cast<int>(x0.size());
    const double hh = fd_step * std::max(1.0, x0.norm());
    auto central = [&](double eps) {
        Mat jac(dim, dim);
        for (int j = 0; j < dim; ++j) {
            Vec plus = x0, minus = x0;
            plus[j] += eps;
            minus[j] -= eps;
            jac.col(j) =
                (integrate_flow(h, plus, t, step).endpoint - integrate_flow(h, minus, t, step).endpoint) /
                (2.0 * eps);
        }
        return jac;
    };
    if (!richardson) return central(hh);
    const Mat c1 = central(hh);
    const Mat c2 = central(hh / 2.0);
    return (4.0 * c2 - c1) / 3.0;
}

PoincareResult poincare_map(const HamiltonianField& h, const Vec& x0, double section,
                            const PoincareOptions& opts)
{
    const int pairs = h.pairs();

    auto cross = [&](const Vec& start) -> std::pair<Vec, double> {
        Vec s = start;
        double t = 0.0;
        if (s[0] >= section)
            throw NoReturnError("poincare_map: start point is not before the section x_1 = " +
                                std::to_string(section));
        // march until the section is passed
        while (s[0] < section) {
            if (t > opts.t_max)
                throw NoReturnError("poincare_map: no crossing of x_1 = " + std::to_string(section) +
                                    " within t_max = " + std::to_string(opts.t_max));
            Vec next = s;
            rk4_step(h, next, opts.step);
            check_finite(next);
            if (next[0] >= section) {
                // bisect the step size from the last pre-crossing state
                double lo = 0.0, hi = opts.step;
                Vec best = next;
                for (int it = 0; it < 60; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    Vec trial = s;
                    rk4_step(h, trial, mid);
                    if (trial[0] >= section) {
                        hi = mid;
                        best = trial;
                    } else {
                        lo = mid;
                    }
                    if (std::abs(best[0] - section) <= 1e-13 || (hi - lo) < 1e-16) break;
                }
                return {best, t + hi};
            }
            s = next;
            t += opts.step;
        }
        return {s, t};
    };

    PoincareResult out;
    auto [hit, tau] = cross(x0);
    out.hit = hit;
    out.tau = tau;
    out.section_residual = std::abs(hit[0] - section);

    if (opts.with_jacobian) {
        const int m = pairs - 1; // transversal pairs
        const double eps = opts.fd_step * std::max(1.0, x0.norm());
        auto hat_index = [pairs, m](int j) { return j < m ? 1 + j : pairs + 1 + (j - m); };
        Mat jac(2 * m, 2 * m);
        for (int j = 0; j < 2 * m; ++j) {
            Vec plus = x0, minus = x0;
            plus[hat_index(j)] += eps;
            minus[hat_index(j)] -= eps;
            const Vec hp = cross(plus).first;
            const Vec hm = cross(minus).first;
            for (int r = 0; r < 2 * m; ++r)
                jac(r, j) = (hp[hat_index(r)] - hm[hat_index(r)]) / (2.0 * eps);
        }
        out.jacobian = std::move(jac);
    }
    return out;
}

} // namespace sympert
