#include "sympert/realization.hpp"

#include <cmath>

namespace sympert {

namespace {

Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double h, bool richardson)
{
    const int dim = static_cast<int>(x.size());
    auto central = [&](double eps) {
        Mat jac(dim, dim);
        for (int j = 0; j < dim; ++j) {
            Vec plus = x, minus = x;
            plus[j] += eps;
            minus[j] -= eps;
            jac.col(j) = (f(plus) - f(minus)) / (2.0 * eps);
        }
        return jac;
    };
    if (!richardson) return central(h);
    const Mat c1 = central(h);
    const Mat c2 = central(h / 2.0);
    return (4.0 * c2 - c1) / 3.0;
}

double spectral_norm(const Mat& m)
{
    return m.jacobiSvd().singularValues()[0];
}

} // namespace

PoissonMap identity_map(int d, int n)
{
    const int dim = 2 * d + n;
    return {"identity", d, n, [](const Vec& x) { return x; },
            [dim](const Vec&) { return Mat::Identity(dim, dim); }};
}

PoissonMap translation_map(const Vec& v, int d, int n)
{
    const int dim = 2 * d + n;
    if (v.size() != dim) throw dimension_error("translation_map: offset size");
    return {"translation", d, n, [v](const Vec& x) { return Vec(x + v); },
            [dim](const Vec&) { return Mat::Identity(dim, dim); }};
}

PoissonMap linear_poisson_map(const Mat& b, int d, int n)
{
    PoissonSpace space(d, n);
    if (poisson_linear_defect(b, space) > 1e-8)
        throw domain_error("linear_poisson_map: matrix is not in Pn(2d+n,R)");
    return {"linear", d, n, [b](const Vec& x) { return Vec(b * x); },
            [b](const Vec&) { return b; }};
}

PoissonMap k_flow_map(double alpha, int i, int d, int n)
{
    auto eval = [alpha, i, d, n](const Vec& x) { return closed_form_K_flow(alpha, i, 1.0, x, d, n); };
    auto jac = [alpha, i, d, n](const Vec& x) {
        return closed_form_K_flow_jacobian(alpha, i, 1.0, x, d, n);
    };
    return {"k-flow", d, n, eval, jac};
}

PerturbedMap::PerturbedMap(PoissonMap base, Vec p, Mat target, double rho, Factorization fact)
    : base_(std::move(base)), p_(std::move(p)), target_(std::move(target)), rho_(rho),
      fact_(std::move(fact))
{
    const int d = base_.d, n = base_.n;
    if (rho_ <= 0.0) throw domain_error("realize_discrete: rho must be positive");
    require_size(target_, 2 * d, 2 * d, "realize_discrete: target");
    center_ = base_.eval(p_);

    double max_q = 1.0;
    for (const auto& f : fact_.factors) {
        Stage st;
        st.q = lift_to_dim(f.conjugator, 2 * d + n);
        st.q_inv = lift_to_dim(Mat(f.conjugator.inverse()), 2 * d + n);
        st.plane = f.plane;
        st.angle = f.angle;
        max_q = std::max(max_q, spectral_norm(st.q));
        stages_.push_back(std::move(st));
    }
    // Generators dilated so that every moving set stays inside B_rho.
    k_scale_ = rho_ / (std::sqrt(2.0) * max_q);

    const Mat dpf = base_.jacobian(p_);
    target_derivative_ = lift_to_dim(target_, 2 * d + n) * dpf;
}

Vec PerturbedMap::apply_h(const Vec& w) const
{
    const int d = base_.d, n = base_.n;
    Vec cur = w;
    // h = h_1 o ... o h_M: the last stage acts first
    for (auto it = stages_.rbegin(); it != stages_.rend(); ++it) {
        const Vec u = it->q_inv * cur;
        if (rho_of(Vec(u / k_scale_)) >= 1.0) continue; // generator inert here, exact identity
        const Vec moved = k_scale_ * closed_form_K_flow(it->angle, it->plane, 1.0, Vec(u / k_scale_), d, n);
        cur = it->q * moved;
    }
    return cur;
}

Vec PerturbedMap::operator()(const Vec& x) const
{
    const Vec fx = base_.eval(x);
    const Vec w = fx - center_;
    // off-support short-circuit keeps g = f bitwise
    bool inert = true;
    for (const auto& st : stages_) {
        if (rho_of(Vec((st.q_inv * w) / k_scale_)) < 1.0) {
            inert = false;
            break;
        }
    }
    if (inert) return fx;
    return apply_h(w) + center_;
}

Mat PerturbedMap::jacobian(const Vec& x, double fd_step) const
{
    const double h = fd_step * std::max(1.0, x.norm());
    return fd_jacobian([this](const Vec& y) { return (*this)(y); }, x, h, true);
}

Mat PerturbedMap::analytic_jacobian(const Vec& x) const
{
    const int d = base_.d, n = base_.n;
    Mat jac = base_.jacobian(x);
    Vec cur = base_.eval(x) - center_;
    for (auto it = stages_.rbegin(); it != stages_.rend(); ++it) {
        const Vec u = it->q_inv * cur;
        const Vec scaled = u / k_scale_;
        if (rho_of(scaled) >= 1.0) continue;
        jac = it->q * closed_form_K_flow_jacobian(it->angle, it->plane, 1.0, scaled, d, n) *
              it->q_inv * jac;
        cur = it->q * (k_scale_ * closed_form_K_flow(it->angle, it->plane, 1.0, scaled, d, n));
    }
    return jac;
}

PerturbedMap realize_discrete(const PoissonMap& f, const Vec& p, const Mat& target, double rho,
                              const DecomposeOptions& opts)
{
    if (p.size() != f.dim()) throw dimension_error("realize_discrete: point dimension");
    Factorization fact = decompose_near_identity(target, opts);
    return PerturbedMap(f, p, target, rho, std::move(fact));
}

PerturbedHamiltonian realize_continuous(const Mat& target, double rho, int d, int n,
                                        const DecomposeOptions& opts)
{
    if (rho <= 0.0) throw domain_error("realize_continuous: rho must be positive");
    Factorization fact = decompose_near_identity(target, opts);

    PerturbedHamiltonian out{make_H0(d + 1, n), target, d, n, rho, 0.0, fact};
    if (fact.factors.empty()) {
        if (rho != 1.0) out.field = rescale_support(out.field, rho);
        return out; // identity target: H' = H0
    }

    // Lemma 5.3 composes P_H = A_N ... A_1, and each chained term realizes the
    // Phi(P)-inverse conjugation, so slots are filled in reverse with inverted
    // conjugators.
    std::vector<ChainFactor> slots;
    double max_inv = 1.0;
    const auto& factors = fact.factors;
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
        ChainFactor cf;
        cf.conjugator = it->conjugator.inverse();
        cf.plane = it->plane;
        cf.alpha = it->angle;
        max_inv = std::max(max_inv, spectral_norm(it->conjugator));
        slots.push_back(std::move(cf));
    }
    out.field = make_chained_hamiltonian(slots, d, n);
    out.tube_hat_radius = std::sqrt(2.0) * max_inv;
    if (rho != 1.0) {
        out.field = rescale_support(out.field, rho);
        out.tube_hat_radius *= rho;
    }
    return out;
}

namespace {

std::vector<Vec> ball_samples(int dim, const GridSpec& grid)
{
    Rng rng(grid.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Vec> pts;
    pts.reserve(grid.samples);
    for (int s = 0; s < grid.samples; ++s) {
        Vec v(dim);
        for (int j = 0; j < dim; ++j) v[j] = gauss(rng);
        const double r = grid.radius * std::pow(unit(rng), 1.0 / dim);
        pts.push_back(v * (r / v.norm()));
    }
    return pts;
}

} // namespace

NormReport perturbation_size(const PerturbedMap& g, const GridSpec& grid)
{
    const int dim = 2 * g.base().d + g.base().n;
    GridSpec gs = grid;
    gs.radius = g.support_radius();
    const auto pts = ball_samples(dim, gs);

    Vec sup_c0 = Vec::Zero(dim);
    Mat sup_d = Mat::Zero(dim, dim);
    const double h = 1e-5;
    for (const auto& w : pts) {
        const Vec diff = g.apply_h(w) - w;
        sup_c0 = sup_c0.cwiseMax(diff.cwiseAbs());
        for (int j = 0; j < dim; ++j) {
            Vec plus = w, minus = w;
            plus[j] += h;
            minus[j] -= h;
            const Vec col = ((g.apply_h(plus) - plus) - (g.apply_h(minus) - minus)) / (2.0 * h);
            sup_d.col(j) = sup_d.col(j).cwiseMax(col.cwiseAbs());
        }
    }
    NormReport rep;
    rep.c0 = sup_c0.sum();
    rep.c1 = std::max(rep.c0, sup_d.colwise().sum().maxCoeff());
    rep.bound_expression = std::sqrt(dist_to_identity(g.target_A()));
    rep.fitted_constant = rep.bound_expression > 0 ? rep.c1 / rep.bound_expression : 0.0;
    return rep;
}

NormReport perturbation_size(const PerturbedHamiltonian& ph, const GridSpec& grid)
{
    const int dim = ph.field.dim();
    const HamiltonianField h0 = make_H0(ph.d + 1, ph.n);
    // sample the tube: x_1 uniform through [0, rho], the rest in the hat ball
    GridSpec gs = grid;
    gs.radius = std::min(grid.radius, ph.rho);
    auto pts = ball_samples(dim, gs);
    Rng rng(grid.seed ^ 0x9e3779b9ULL);
    std::uniform_real_distribution<double> unitx(0.0, ph.rho);
    for (auto& p : pts) p[0] = unitx(rng);

    double c0 = 0.0, c1 = 0.0, c2 = 0.0;
    const double h = 1e-5;
    for (const auto& p : pts) {
        c0 = std::max(c0, std::abs(ph.field.value(p) - h0.value(p)));
        const Vec gdiff = ph.field.gradient(p) - h0.gradient(p);
        c1 = std::max(c1, gdiff.cwiseAbs().maxCoeff());
        for (int j = 0; j < dim; ++j) {
            Vec plus = p, minus = p;
            plus[j] += h;
            minus[j] -= h;
            const Vec hess_col =
                (ph.field.gradient(plus) - ph.field.gradient(minus)) / (2.0 * h);
            c2 = std::max(c2, hess_col.cwiseAbs().maxCoeff());
        }
    }
    NormReport rep;
    rep.c0 = c0;
    rep.c1 = std::max(c0, c1);
    rep.c2 = std::max(rep.c1, c2);

    const auto& factors = ph.field.kind() == FieldKind::rescaled
                              ? ph.field.inner()->chain_factors()
                              : ph.field.chain_factors();
    const double nn = static_cast<double>(factors.size());
    double worst = 0.0;
    for (const auto& f : factors) {
        const double pnorm = std::max(1.0, matrix_norm(f.conjugator));
        worst = std::max(worst, pnorm * pnorm * std::abs(f.alpha));
    }
    rep.bound_expression = nn * nn * worst;
    rep.fitted_constant = rep.bound_expression > 0 ? rep.c2 / rep.bound_expression : 0.0;
    return rep;
}

} // namespace sympert
