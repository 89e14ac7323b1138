#include "sympert/suites.hpp"

#include "sympert/flowbox.hpp"
#include "sympert/realization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sympert {

unsigned long long derive_seed(unsigned long long base, std::string_view tag, unsigned long long a,
                               unsigned long long b)
{
    unsigned long long h = 1469598103934665603ULL ^ base;
    auto mix = [&h](unsigned long long v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xffULL;
            h *= 1099511628211ULL;
        }
    };
    for (const char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    mix(a);
    mix(b);
    return h;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const size_t m = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < m; ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

SuiteConfig SuiteConfig::from_json(const json& j)
{
    SuiteConfig c;
    c.factorization_trials = j.value("factorization_trials", c.factorization_trials);
    if (j.contains("factorization_dims"))
        c.factorization_dims = j.at("factorization_dims").get<std::vector<int>>();
    if (j.contains("factorization_deltas"))
        c.factorization_deltas = j.at("factorization_deltas").get<std::vector<double>>();
    c.flow_trials = j.value("flow_trials", c.flow_trials);
    c.chained_targets_per_dim = j.value("chained_targets_per_dim", c.chained_targets_per_dim);
    c.discrete_trials = j.value("discrete_trials", c.discrete_trials);
    c.poisson_samples = j.value("poisson_samples", c.poisson_samples);
    c.flowbox_forward_samples = j.value("flowbox_forward_samples", c.flowbox_forward_samples);
    c.flowbox_chart_samples = j.value("flowbox_chart_samples", c.flowbox_chart_samples);
    c.step = j.value("step", c.step);
    c.fd_step = j.value("fd_step", c.fd_step);
    return c;
}

std::string SuiteConfig::summary() const
{
    std::ostringstream os;
    os << "step=" << step << ";fd_step=" << fd_step << ";fact_trials=" << factorization_trials
       << ";flow_trials=" << flow_trials << ";chained=" << chained_targets_per_dim
       << ";discrete=" << discrete_trials << ";poisson_samples=" << poisson_samples
       << ";flowbox_samples=" << flowbox_forward_samples;
    return os.str();
}

namespace {

Vec ball_point(int dim, double radius, Rng& rng)
{
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Vec v(dim);
    for (int j = 0; j < dim; ++j) v[j] = gauss(rng);
    return v * (radius * std::pow(unit(rng), 1.0 / dim) / v.norm());
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const size_t m = v.size();
    return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

bool exactly_equal(const Vec& a, const Vec& b)
{
    if (a.size() != b.size()) return false;
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

// ---------------------------------------------------------------- factorization

VerificationReport factorization_suite(unsigned long long seed, const SuiteConfig& cfg)
{
    VerificationReport rep;
    rep.suite = "factorization";

    double worst_resid = 0.0, worst_defect = 0.0;
    double min_slope = std::numeric_limits<double>::infinity();
    double worst_c_ratio = 1.0;

    for (const int d : cfg.factorization_dims) {
        std::vector<double> deltas, med_rdev, med_cfit;
        for (size_t di = 0; di < cfg.factorization_deltas.size(); ++di) {
            const double delta = cfg.factorization_deltas[di];
            Rng rng(derive_seed(seed, "factorization", d, di));
            std::vector<double> rdevs, cfits;
            for (int trial = 0; trial < cfg.factorization_trials; ++trial) {
                const Mat a = random_symplectic(d, delta, rng);
                const Factorization f = decompose_near_identity(a);
                worst_resid = std::max(worst_resid, f.residual);
                double rdev = 0.0;
                for (const auto& fac : f.factors) {
                    worst_defect = std::max(worst_defect, symplectic_defect(fac.realized(d), d));
                    rdev = std::max(rdev, dist_to_identity(rotation2(fac.angle)));
                }
                rdevs.push_back(rdev);
                cfits.push_back(f.diagnostics.c_fit);
            }
            deltas.push_back(delta);
            med_rdev.push_back(median(rdevs));
            med_cfit.push_back(median(cfits));
        }
        min_slope = std::min(min_slope, loglog_slope(deltas, med_rdev));
        const auto [lo, hi] = std::minmax_element(med_cfit.begin(), med_cfit.end());
        worst_c_ratio = std::max(worst_c_ratio, *hi / *lo);
    }

    rep.checks.push_back(check_le("roundtrip-relative-residual-max", worst_resid, 1e-9));
    rep.checks.push_back(check_le("factor-symplectic-defect-max", worst_defect, 1e-11));
    rep.checks.push_back(check_ge("sqrt-law-min-slope", min_slope, 0.45));
    rep.checks.push_back(check_le("c-fit-spread-across-delta", worst_c_ratio, 10.0));
    return rep;
}

// ---------------------------------------------------------------- generators

double measured_c2_norm(const HamiltonianField& h, const std::vector<Vec>& pts, double fd)
{
    double c0 = 0, c1 = 0, c2 = 0;
    for (const auto& p : pts) {
        c0 = std::max(c0, std::abs(h.value(p)));
        c1 = std::max(c1, h.gradient(p).cwiseAbs().maxCoeff());
        for (int j = 0; j < p.size(); ++j) {
            Vec plus = p, minus = p;
            plus[j] += fd;
            minus[j] -= fd;
            const Vec col = (h.gradient(plus) - h.gradient(minus)) / (2 * fd);
            c2 = std::max(c2, col.cwiseAbs().maxCoeff());
        }
    }
    return std::max({c0, c1, c2});
}

VerificationReport generators_suite(unsigned long long seed, [[maybe_unused]] const SuiteConfig& cfg)
{
    VerificationReport rep;
    rep.suite = "generators";

    // bump battery
    {
        double plateau_dev = 0.0, tail_dev = 0.0, range_dev = 0.0;
        for (int k = 0; k <= 2000; ++k) {
            const double r = -1.5 + 3.0 * k / 2000.0;
            const double v = bump().value(r);
            if (std::abs(r) <= 0.25) plateau_dev = std::max(plateau_dev, std::abs(v - 1.0));
            if (std::abs(r) >= 1.0) tail_dev = std::max(tail_dev, std::abs(v));
            range_dev = std::max({range_dev, -v, v - 1.0});
        }
        rep.checks.push_back(check_le("bump-plateau-deviation", plateau_dev, 0.0));
        rep.checks.push_back(check_le("bump-tail-deviation", tail_dev, 0.0));
        rep.checks.push_back(check_le("bump-range-violation", range_dev, 0.0));
        rep.checks.push_back(
            check_le("bump-total-integral-error", std::abs(bump().integrate(-2.0, 2.0) - 1.0), 1e-12));

        // one-sided limits at the breakpoints by linear extrapolation, so the
        // smooth variation over the sampling offset cancels
        double junction = 0.0;
        const double eps = 1e-9;
        auto one_sided = [eps](auto&& f, double b, double sign) {
            return 2.0 * f(b + sign * eps) - f(b + sign * 2.0 * eps);
        };
        for (const double b : {-1.0, -0.25, 0.25, 1.0}) {
            auto v = [](double r) { return bump().value(r); };
            auto d1 = [](double r) { return bump().d1(r); };
            auto d2 = [](double r) { return bump().d2(r); };
            junction = std::max(junction, std::abs(one_sided(v, b, -1.0) - one_sided(v, b, 1.0)));
            junction = std::max(junction, std::abs(one_sided(d1, b, -1.0) - one_sided(d1, b, 1.0)));
            junction = std::max(junction, std::abs(one_sided(d2, b, -1.0) - one_sided(d2, b, 1.0)));
        }
        rep.checks.push_back(check_le("bump-junction-mismatch", junction, 1e-12));
    }

    // analytic gradients against central differences
    {
        Rng rng(derive_seed(seed, "generators-grad"));
        std::vector<std::pair<std::string, HamiltonianField>> fields;
        fields.emplace_back("rotation", make_rotation_hamiltonian(0.7, 2, 2, 1));
        fields.emplace_back("transit", make_transit_hamiltonian(0.4, 1, 2, 1));
        {
            std::vector<ChainFactor> fs;
            for (int k = 0; k < 3; ++k) {
                ChainFactor cf;
                cf.conjugator = random_symplectic(2, 0.3, rng);
                cf.plane = 1 + (k % 2);
                cf.alpha = 0.2 + 0.1 * k;
                fs.push_back(std::move(cf));
            }
            fields.emplace_back("chained", make_chained_hamiltonian(fs, 2, 1));
        }
        fields.emplace_back("rescaled", rescale_support(make_rotation_hamiltonian(0.5, 1, 2, 1), 0.3));
        fields.emplace_back("dilated", dilate_support(make_rotation_hamiltonian(0.5, 1, 2, 1), 0.3));

        double worst = 0.0;
        for (const auto& [name, f] : fields) {
            for (int t = 0; t < 100; ++t) {
                const Vec p = ball_point(f.dim(), 1.2, rng);
                const Vec g = f.gradient(p);
                const double h = 1e-5 * std::max(1.0, p.norm());
                for (int j = 0; j < f.dim(); ++j) {
                    Vec plus = p, minus = p;
                    plus[j] += h;
                    minus[j] -= h;
                    worst = std::max(worst,
                                     std::abs((f.value(plus) - f.value(minus)) / (2 * h) - g[j]));
                }
            }
        }
        rep.checks.push_back(check_le("gradient-vs-central-differences", worst, 1e-6));
    }

    // exact vanishing outside the declared support
    {
        Rng rng(derive_seed(seed, "generators-support"));
        const auto k = make_rotation_hamiltonian(0.9, 1, 2, 1);
        double worst = 0.0;
        for (int t = 0; t < 400; ++t) {
            Vec p = ball_point(5, 1.0, rng);
            p *= (std::sqrt(2.0) + 0.01 + t * 0.01) / p.norm();
            worst = std::max({worst, std::abs(k.value(p)), k.gradient(p).cwiseAbs().maxCoeff()});
        }
        const auto tr = make_transit_hamiltonian(0.9, 1, 2, 1);
        for (int t = 0; t < 400; ++t) {
            Vec p = ball_point(7, 0.5, rng);
            switch (t % 3) {
            case 0: p[0] = (t % 2) ? -0.6 : 1.6; break;          // x_1 off support
            case 1: p[3] = (t % 2) ? 1.1 : -1.3; break;          // y_1 off support
            default: {                                           // hat off support
                Vec hat = ball_point(5, 1.0, rng);
                hat *= (std::sqrt(2.0) + 0.05) / hat.norm();
                p[1] = hat[0]; p[2] = hat[1]; p[4] = hat[2]; p[5] = hat[3]; p[6] = hat[4];
                p[0] = 0.5;
                break;
            }
            }
            worst = std::max({worst, std::abs(tr.value(p)), tr.gradient(p).cwiseAbs().maxCoeff()});
        }
        rep.checks.push_back(check_le("support-exact-vanishing", worst, 0.0));
    }

    // C2 scaling in alpha (rotation and chained)
    {
        Rng rng(derive_seed(seed, "generators-c2"));
        const std::vector<double> alphas = {1e-3, 1e-2, 1e-1, 1.0};
        std::vector<Vec> pts;
        for (int t = 0; t < 60; ++t) pts.push_back(ball_point(5, 1.3, rng));

        std::vector<double> norms_k;
        for (const double a : alphas)
            norms_k.push_back(measured_c2_norm(make_rotation_hamiltonian(a, 1, 2, 1), pts, 1e-5));
        const double slope_k = loglog_slope(alphas, norms_k);

        std::vector<ChainFactor> base;
        for (int k = 0; k < 4; ++k) {
            ChainFactor cf;
            cf.conjugator = random_symplectic(2, 0.2, rng);
            cf.plane = 1 + (k % 2);
            cf.alpha = 0.3 + 0.1 * k;
            base.push_back(std::move(cf));
        }
        std::vector<Vec> tube_pts;
        for (int t = 0; t < 40; ++t) {
            Vec p = ball_point(7, 0.2, rng);
            p[0] = 0.1 + 0.8 * (t / 40.0);
            tube_pts.push_back(p);
        }
        const auto h0 = make_H0(3, 1);
        std::vector<double> norms_c;
        for (const double s : alphas) {
            auto scaled = base;
            for (auto& f : scaled) f.alpha *= s;
            const auto hc = make_chained_hamiltonian(scaled, 2, 1);
            // C2 norm of H - H0: H0 is linear so only the value/gradient parts shift
            double c0 = 0, c1 = 0, c2 = 0;
            for (const auto& p : tube_pts) {
                c0 = std::max(c0, std::abs(hc.value(p) - h0.value(p)));
                c1 = std::max(c1, (hc.gradient(p) - h0.gradient(p)).cwiseAbs().maxCoeff());
                for (int j = 0; j < 7; ++j) {
                    Vec plus = p, minus = p;
                    plus[j] += 1e-5;
                    minus[j] -= 1e-5;
                    const Vec col = (hc.gradient(plus) - hc.gradient(minus)) / 2e-5;
                    c2 = std::max(c2, col.cwiseAbs().maxCoeff());
                }
            }
            norms_c.push_back(std::max({c0, c1, c2}));
        }
        const double slope_c = loglog_slope(alphas, norms_c);

        rep.checks.push_back(check_le("k-c2-alpha-slope-error", std::abs(slope_k - 1.0), 0.1));
        rep.checks.push_back(check_le("chained-c2-alpha-slope-error", std::abs(slope_c - 1.0), 0.1));
    }

    // chained C2 bound: fitted constant stable over N
    {
        Rng rng(derive_seed(seed, "generators-c2-bound"));
        std::vector<double> fitted;
        for (const int nfac : {1, 2, 4, 8}) {
            std::vector<ChainFactor> fs;
            for (int k = 0; k < nfac; ++k) {
                ChainFactor cf;
                cf.conjugator = random_symplectic(2, 0.25, rng);
                cf.plane = 1 + (k % 2);
                cf.alpha = 0.05 + 0.3 * std::uniform_real_distribution<double>(0, 1)(rng);
                fs.push_back(std::move(cf));
            }
            PerturbedHamiltonian ph{make_chained_hamiltonian(fs, 2, 1), Mat::Identity(4, 4), 2, 1,
                                    1.0, 0.0, {}};
            GridSpec grid;
            grid.samples = 150;
            grid.radius = 0.25;
            grid.seed = derive_seed(seed, "c2-grid", nfac);
            fitted.push_back(perturbation_size(ph, grid).fitted_constant);
        }
        const auto [lo, hi] = std::minmax_element(fitted.begin(), fitted.end());
        rep.checks.push_back(check_le("chained-c2-bound-constant-spread", *hi / std::max(*lo, 1e-12), 10.0));
    }
    return rep;
}

// ---------------------------------------------------------------- flows

VerificationReport flows_suite(unsigned long long seed, const SuiteConfig& cfg)
{
    VerificationReport rep;
    rep.suite = "flows";
    const int d = 2, n = 1, dim = 5;

    // K-flow oracle and conservation
    {
        Rng rng(derive_seed(seed, "flows-oracle"));
        std::uniform_real_distribution<double> ua(-1.0, 1.0);
        std::uniform_int_distribution<int> ui(1, d);
        double max_err = 0.0, max_rho_drift = 0.0, max_h_drift = 0.0;
        std::vector<double> orders;
        for (int t = 0; t < cfg.flow_trials; ++t) {
            const double alpha = ua(rng) + (ua(rng) > 0 ? 0.2 : -0.2);
            const int i = ui(rng);
            Vec p = ball_point(dim, 1.0, rng);
            if (t % 2) p *= 1.1 / p.norm(); // transition region, l' != 0
            const auto k = make_rotation_hamiltonian(alpha, i, d, n);

            const Vec exact = closed_form_K_flow(alpha, i, 1.0, p, d, n);
            std::vector<std::pair<double, Vec>> trace;
            const FlowResult fine = integrate_flow_trace(k, p, 1.0, cfg.step, trace);
            const double e1 = (fine.endpoint - exact).lpNorm<Eigen::Infinity>();
            max_err = std::max(max_err, e1);
            max_h_drift = std::max(max_h_drift, fine.drift);
            for (const auto& [tt, state] : trace) {
                max_rho_drift = std::max(max_rho_drift, std::abs(rho_of(state) - rho_of(p)));
                max_rho_drift =
                    std::max(max_rho_drift, std::abs(rho_i_of(state, i, d) - rho_i_of(p, i, d)));
            }
            const double e2 =
                (integrate_flow(k, p, 1.0, 2.0 * cfg.step).endpoint - exact).lpNorm<Eigen::Infinity>();
            if (e2 > 1e-12) orders.push_back(std::log2(e2 / e1));
        }
        rep.checks.push_back(check_le("k-flow-rk4-vs-closed-form-max", max_err, 1e-8));
        rep.checks.push_back(check_ge("k-flow-rk4-order", median(orders), 3.7));
        rep.checks.push_back(check_le("k-flow-rho-drift-max", max_rho_drift, 1e-8));
        rep.checks.push_back(check_le("k-flow-h-drift-max", max_h_drift, 1e-8));

        // exact conservation of the closed form
        double exact_drift = 0.0;
        Rng rng2(derive_seed(seed, "flows-exact"));
        for (int t = 0; t < 50; ++t) {
            const Vec p = ball_point(dim, 1.2, rng2);
            const Vec q = closed_form_K_flow(0.8, 1, 0.7, p, d, n);
            exact_drift = std::max(exact_drift, std::abs(rho_of(q) - rho_of(p)));
            exact_drift = std::max(exact_drift, std::abs(rho_i_of(q, 1, d) - rho_i_of(p, 1, d)));
        }
        rep.checks.push_back(check_le("k-flow-closed-form-rho-drift", exact_drift, 1e-15));
    }

    // transit-flow oracle
    {
        Rng rng(derive_seed(seed, "flows-transit"));
        double max_err = 0.0, max_y1 = 0.0, worst_y1_bound = 0.0;
        for (int t = 0; t < 40; ++t) {
            const double alpha = 0.05 + 0.5 * std::uniform_real_distribution<double>(0, 1)(rng);
            const int i = 1 + (t % d);
            std::vector<ChainFactor> fs(1);
            fs[0].conjugator = Mat::Identity(2 * d, 2 * d);
            fs[0].plane = i;
            fs[0].alpha = alpha;
            const auto h = make_chained_hamiltonian(fs, d, n); // H0 + Htilde

            Vec p = Vec::Zero(2 * (d + 1) + n);
            const double r = 0.02 + 0.06 * (t % 5);
            const Vec hat = ball_point(2 * d + n, 0.9 * r, rng);
            for (int k = 1; k <= d; ++k) {
                p[k] = hat[k - 1];
                p[d + 1 + k] = hat[d + k - 1];
            }
            for (int k = 0; k < n; ++k) p[2 * (d + 1) + k] = hat[2 * d + k];

            const Vec exact = closed_form_transit_flow(alpha, i, 1.0, p, d, n);
            const Vec num = integrate_flow(h, p, 1.0, cfg.step).endpoint;
            max_err = std::max(max_err, (exact - num).lpNorm<Eigen::Infinity>());

            // |y_1(t)| <= r^2 |alpha| along the transit
            for (int j = 1; j <= 20; ++j) {
                const Vec q = closed_form_transit_flow(alpha, i, j / 20.0, p, d, n);
                max_y1 = std::max(max_y1, std::abs(q[d + 1]));
                worst_y1_bound = std::max(worst_y1_bound, std::abs(q[d + 1]) - r * r * alpha);
            }
        }
        rep.checks.push_back(check_le("transit-rk4-vs-closed-form-max", max_err, 1e-8));
        rep.checks.push_back(check_le("transit-y1-bound-excess", worst_y1_bound, 0.0));
    }

    // rotation realization: D_0 phi^1_K = pi_i(R_alpha)
    {
        double worst = 0.0;
        for (const double alpha : {0.01, 0.1, 0.5}) {
            for (int i = 1; i <= d; ++i) {
                const auto k = make_rotation_hamiltonian(alpha, i, d, n);
                const Mat jac = flow_jacobian(k, Vec::Zero(dim), 1.0, cfg.fd_step, cfg.step);
                worst = std::max(worst, matrix_norm(jac - embed_pi_k(rotation2(alpha), i, d, n)));
            }
        }
        rep.checks.push_back(check_le("rotation-realization-jacobian", worst, 1e-6));
    }

    // Poincare Jacobians of Hamiltonian flows are symplectic
    {
        Rng rng(derive_seed(seed, "flows-poincare"));
        const Mat j2 = PoissonSpace::J_matrix(d);
        double worst = 0.0;
        for (int t = 0; t < 4; ++t) {
            std::vector<ChainFactor> fs(2);
            fs[0].conjugator = random_symplectic(d, 0.2, rng);
            fs[0].plane = 1;
            fs[0].alpha = 0.25;
            fs[1].conjugator = random_symplectic(d, 0.2, rng);
            fs[1].plane = 2;
            fs[1].alpha = -0.15;
            const auto h = make_chained_hamiltonian(fs, d, n);
            const auto res = poincare_map(h, Vec::Zero(2 * (d + 1) + n), 1.0);
            worst = std::max(worst,
                             matrix_norm(res.jacobian.transpose() * j2 * res.jacobian - j2));
        }
        rep.checks.push_back(check_le("poincare-jacobian-symplectic-defect", worst, 1e-5));
    }
    return rep;
}

// ---------------------------------------------------------------- realize-continuous

VerificationReport realize_continuous_suite(unsigned long long seed, const SuiteConfig& cfg)
{
    VerificationReport rep;
    rep.suite = "realize-continuous";

    // single transit (Lemma 5.2 realization)
    {
        double worst_jac = 0.0, worst_tau = 0.0, worst_sec = 0.0;
        for (const double alpha : {0.05, 0.3}) {
            for (const auto& [d, n] : std::vector<std::pair<int, int>>{{1, 0}, {2, 1}}) {
                for (int i = 1; i <= d; ++i) {
                    std::vector<ChainFactor> fs(1);
                    fs[0].conjugator = Mat::Identity(2 * d, 2 * d);
                    fs[0].plane = i;
                    fs[0].alpha = alpha;
                    const auto h = make_chained_hamiltonian(fs, d, n);
                    const auto res = poincare_map(h, Vec::Zero(2 * (d + 1) + n), 1.0);
                    worst_jac = std::max(
                        worst_jac, matrix_norm(res.jacobian - embed_pi_k(rotation2(alpha), i, d, 0)));
                    worst_tau = std::max(worst_tau, std::abs(res.tau - 1.0));
                    worst_sec = std::max(worst_sec, res.section_residual);
                }
            }
        }
        rep.checks.push_back(check_le("single-transit-jacobian-error", worst_jac, 1e-5));
        rep.checks.push_back(check_le("single-transit-tau-error", worst_tau, 1e-10));
        rep.checks.push_back(check_le("single-transit-section-residual", worst_sec, 1e-12));
    }

    // chained targets (Proposition 5.1 realization)
    {
        double worst_jac = 0.0;
        double exact_violations = 0.0;
        const int n = 1;
        for (const int d : {1, 2}) {
            Rng rng(derive_seed(seed, "realize-cont", d));
            for (int t = 0; t < cfg.chained_targets_per_dim; ++t) {
                const Mat target = random_symplectic(d, 1e-2, rng);
                const auto ph = realize_continuous(target, 1.0, d, n);
                const auto res = poincare_map(ph.field, Vec::Zero(2 * (d + 1) + n), 1.0);
                worst_jac = std::max(worst_jac, matrix_norm(res.jacobian - target));

                // bitwise equality of the generators on Gamma_0 and off the tube
                const int dim = 2 * (d + 1) + n;
                Vec expected = Vec::Zero(dim);
                expected[0] = 1.0;
                auto check_point = [&](const Vec& p) {
                    if (!exactly_equal(hamiltonian_vector_field(ph.field, p), expected))
                        exact_violations += 1.0;
                };
                for (int g = 0; g <= 8; ++g) check_point(Vec::Unit(dim, 0) * (g / 8.0));
                for (int g = 0; g < 12; ++g) {
                    Vec p = ball_point(dim, 0.4, rng);
                    switch (g % 3) {
                    case 0: p[0] = (g % 2) ? -0.3 : 1.3; break;
                    case 1: p[d + 1] = (g % 2) ? 1.05 : -1.4; break;
                    default: {
                        Vec hat = ball_point(2 * d + n, 1.0, rng);
                        hat *= (ph.tube_hat_radius + 0.05) / hat.norm();
                        p[0] = 0.5;
                        for (int k = 1; k <= d; ++k) {
                            p[k] = hat[k - 1];
                            p[d + 1 + k] = hat[d + k - 1];
                        }
                        for (int k = 0; k < n; ++k) p[2 * (d + 1) + k] = hat[2 * d + k];
                        break;
                    }
                    }
                    check_point(p);
                }
            }
        }
        rep.checks.push_back(check_le("chained-realization-jacobian-error", worst_jac, 1e-5));
        rep.checks.push_back(check_le("generator-exactness-violations", exact_violations, 0.0));
    }

    // support rescale keeps the realized derivative
    {
        Rng rng(derive_seed(seed, "realize-cont-rescale"));
        const Mat target = random_symplectic(2, 1e-2, rng);
        const auto ph = realize_continuous(target, 0.5, 2, 1);
        const auto res = poincare_map(ph.field, Vec::Zero(7), 1.0);
        rep.checks.push_back(
            check_le("rescaled-realization-jacobian-error", matrix_norm(res.jacobian - target), 1e-5));
    }
    return rep;
}

// ---------------------------------------------------------------- realize-discrete

VerificationReport realize_discrete_suite(unsigned long long seed, const SuiteConfig& cfg)
{
    VerificationReport rep;
    rep.suite = "realize-discrete";

    double worst_deriv = 0.0, worst_defect = 0.0;
    double exact_violations = 0.0;

    Rng rng(derive_seed(seed, "realize-disc"));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < cfg.discrete_trials; ++trial) {
        const int d = 1 + trial % 2;
        const int n = trial % 3;
        const int dim = 2 * d + n;
        const double delta = (trial % 2) ? 1e-2 : 3e-3;
        const double rho = (trial % 4 < 2) ? 1.0 : 0.5;

        PoissonMap f;
        switch (trial % 4) {
        case 0: f = identity_map(d, n); break;
        case 1: f = translation_map(ball_point(dim, 0.5, rng), d, n); break;
        case 2: {
            Mat b = Mat::Identity(dim, dim);
            b.topLeftCorner(2 * d, 2 * d) = random_symplectic(d, 0.2, rng);
            if (n > 0) {
                for (int r = 0; r < 2 * d; ++r)
                    for (int c = 0; c < n; ++c) b(r, 2 * d + c) = 0.3 * (unit(rng) - 0.5);
                for (int r = 0; r < n; ++r) b(2 * d + r, 2 * d + r) = 1.0 + 0.2 * unit(rng);
            }
            f = linear_poisson_map(b, d, n);
            break;
        }
        default: f = k_flow_map(0.2, 1 + (d > 1 ? trial % d : 0), d, n); break;
        }

        const Vec p = ball_point(dim, 0.1, rng);
        const Mat target = random_symplectic(d, delta, rng);
        const PerturbedMap g = realize_discrete(f, p, target, rho);

        const Mat dpf = f.jacobian(p);
        const Mat dg = g.jacobian(p);
        worst_deriv = std::max(
            worst_deriv, matrix_norm(dg - g.target_derivative()) / matrix_norm(dpf));

        // exact equality outside the support preimage
        for (int s = 0; s < 10; ++s) {
            Vec far = ball_point(dim, 1.0, rng);
            far *= (rho * 1.2 + 2.0) / far.norm();
            const Vec x = far; // f in the battery moves points by < 1, stays far
            if (!exactly_equal(g(x), f.eval(x))) exact_violations += 1.0;
        }

        // sampled Poisson defect
        const Mat jhat = PoissonSpace(d, n).structure_matrix();
        const int nsamp = cfg.poisson_samples;
        for (int s = 0; s < nsamp; ++s) {
            const Vec x = p + ball_point(dim, 0.5 * rho, rng);
            const Mat jac = g.analytic_jacobian(x);
            worst_defect = std::max(worst_defect, matrix_norm(jac * jhat * jac.transpose() - jhat));
        }
    }
    rep.checks.push_back(check_le("derivative-realization-relative-error", worst_deriv, 1e-5));
    rep.checks.push_back(check_le("outside-support-exactness-violations", exact_violations, 0.0));
    rep.checks.push_back(check_le("poisson-defect-max", worst_defect, 1e-6));

    // delta^(1/2) law for |h - id|_{C1}
    {
        const std::vector<double> deltas = {1e-2, 1e-3, 1e-4, 1e-5};
        std::vector<double> norms;
        const auto f = identity_map(2, 1);
        for (size_t di = 0; di < deltas.size(); ++di) {
            Rng drng(derive_seed(seed, "realize-disc-sweep", di));
            std::vector<double> vals;
            for (int t = 0; t < 5; ++t) {
                const Mat target = random_symplectic(2, deltas[di], drng);
                const PerturbedMap g = realize_discrete(f, Vec::Zero(5), target, 1.0);
                GridSpec grid;
                grid.samples = 160;
                grid.seed = derive_seed(seed, "sweep-grid", di, t);
                vals.push_back(perturbation_size(g, grid).c1);
            }
            norms.push_back(median(vals));
        }
        rep.checks.push_back(check_ge("h-minus-id-c1-sqrt-slope", loglog_slope(deltas, norms), 0.45));
    }
    return rep;
}

// ---------------------------------------------------------------- flowbox

VerificationReport flowbox_suite(unsigned long long seed, const SuiteConfig& cfg)
{
    VerificationReport rep;
    rep.suite = "flowbox";
    const int d = 2, n = 1, dim = 5;

    std::vector<std::pair<std::string, HamiltonianField>> cases;
    cases.emplace_back("h0", make_H0(d, n));
    {
        // H = y_1 + 0.05 (x_2^2 + 1.5 y_2^2 + 0.5 x_2 y_2)
        std::vector<MonomialTerm> terms;
        Vec ly = Vec::Zero(dim);
        terms.push_back({1.0, {{d, 1}}});
        terms.push_back({0.05, {{1, 2}}});
        terms.push_back({0.075, {{d + 1, 2}}});
        terms.push_back({0.025, {{1, 1}, {d + 1, 1}}});
        cases.emplace_back("quadratic", make_polynomial_hamiltonian(std::move(terms), d, n));
    }

    Section sigma{Vec::Unit(dim, 0), Vec::Zero(dim)};

    double worst_bracket = 0.0, worst_hg_shift = 0.0, worst_forward = 0.0, worst_round = 0.0;
    double worst_translation = 0.0, worst_poisson = 0.0, worst_commutator = 0.0;
    double h0_identity_dev = 0.0;

    for (const auto& [name, h] : cases) {
        const auto leaf = graph_leaf_chart(h, 0.0, d, n);
        const auto chart = build_flowbox_chart(h, Vec::Zero(dim), sigma, leaf);

        Rng rng(derive_seed(seed, "flowbox", name == "h0" ? 0 : 1));

        // {H, G} = 1 near the base point
        for (int t = 0; t < 20; ++t) {
            const Vec m = ball_point(dim, 0.1, rng);
            const auto cd = conjugate_field(h, sigma, m);
            worst_bracket = std::max(worst_bracket, std::abs(cd.bracket - 1.0));
        }

        // H o phi_G^t = H + t
        for (int t = 0; t < 10; ++t) {
            const Vec m = ball_point(dim, 0.1, rng);
            const double dt = -0.1 + 0.2 * (t / 9.0);
            const Vec moved = chart.conjugate_flow(m, dt);
            worst_hg_shift = std::max(worst_hg_shift, std::abs(h.value(moved) - h.value(m) - dt));
        }

        // H(g^{-1}(y)) = y_{d+1} (equivalently H0 o g = H)
        const int fsamples = cfg.flowbox_forward_samples / 2;
        for (int t = 0; t < fsamples; ++t) {
            const Vec y = ball_point(dim, 0.1, rng);
            worst_forward = std::max(worst_forward, std::abs(h.value(chart.inverse(y)) - y[d]));
        }

        // round trips
        for (int t = 0; t < 50; ++t) {
            const Vec m = ball_point(dim, 0.1, rng);
            worst_round = std::max(worst_round, (chart.inverse(chart.forward(m)) - m).norm());
            const Vec y = ball_point(dim, 0.1, rng);
            worst_round = std::max(worst_round, (chart.forward(chart.inverse(y)) - y).norm());
        }
        if (name == "h0")
            for (int t = 0; t < 20; ++t) {
                const Vec m = ball_point(dim, 0.1, rng);
                h0_identity_dev = std::max(h0_identity_dev, (chart.forward(m) - m).norm());
            }

        // translation identity
        for (int t = 0; t < 25; ++t) {
            const Vec m = ball_point(dim, 0.05, rng);
            std::uniform_real_distribution<double> ut(-0.1, 0.1);
            const double t1 = ut(rng), t2 = ut(rng);
            const Vec moved = chart.base_flow(chart.conjugate_flow(m, t1), t2);
            Vec want = chart.forward(m);
            want[0] += t2;
            want[d] += t1;
            worst_translation = std::max(worst_translation, (chart.forward(moved) - want).norm());
        }

        // chart pushes pi to pi_0
        std::vector<Vec> samples;
        for (int t = 0; t < cfg.flowbox_chart_samples; ++t) samples.push_back(ball_point(dim, 0.08, rng));
        const auto check = verify_poisson_chart([&chart](const Vec& m) { return chart.forward(m); },
                                                d, n, samples, 1e-5);
        worst_poisson = std::max(worst_poisson, check.max_defect);

        // [X_H, X_G] = 0 sampled
        for (int t = 0; t < 4; ++t) {
            const Vec m = ball_point(dim, 0.08, rng);
            const double eps = 1e-4;
            Mat dxh(dim, dim), dxg(dim, dim);
            for (int j = 0; j < dim; ++j) {
                Vec plus = m, minus = m;
                plus[j] += eps;
                minus[j] -= eps;
                dxh.col(j) = (hamiltonian_vector_field(h, plus) - hamiltonian_vector_field(h, minus)) /
                             (2 * eps);
                dxg.col(j) =
                    (conjugate_field(h, sigma, plus, 1e-5).x_g - conjugate_field(h, sigma, minus, 1e-5).x_g) /
                    (2 * eps);
            }
            const Vec xh = hamiltonian_vector_field(h, m);
            const Vec xg = conjugate_field(h, sigma, m, 1e-5).x_g;
            worst_commutator = std::max(worst_commutator, (dxg * xh - dxh * xg).norm());
        }
    }

    rep.checks.push_back(check_le("bracket-h-g-minus-one", worst_bracket, 1e-6));
    rep.checks.push_back(check_le("h-along-conjugate-flow-shift-error", worst_hg_shift, 1e-8));
    rep.checks.push_back(check_le("h0-compose-g-equals-h", worst_forward, 1e-8));
    rep.checks.push_back(check_le("chart-round-trip", worst_round, 1e-8));
    rep.checks.push_back(check_le("h0-chart-is-identity", h0_identity_dev, 1e-9));
    rep.checks.push_back(check_le("translation-identity", worst_translation, 1e-8));
    rep.checks.push_back(check_le("chart-poisson-defect", worst_poisson, 1e-5));
    rep.checks.push_back(check_le("commutator-x-h-x-g", worst_commutator, 1e-5));
    return rep;
}

} // namespace

std::vector<std::string> suite_names()
{
    return {"factorization", "generators", "flows", "realize-discrete", "realize-continuous",
            "flowbox"};
}

VerificationReport run_suite(const std::string& name, unsigned long long seed, const SuiteConfig& cfg)
{
    VerificationReport rep;
    if (name == "factorization") rep = factorization_suite(seed, cfg);
    else if (name == "generators") rep = generators_suite(seed, cfg);
    else if (name == "flows") rep = flows_suite(seed, cfg);
    else if (name == "realize-discrete") rep = realize_discrete_suite(seed, cfg);
    else if (name == "realize-continuous") rep = realize_continuous_suite(seed, cfg);
    else if (name == "flowbox") rep = flowbox_suite(seed, cfg);
    else if (name == "all") {
        rep.suite = "all";
        for (const auto& sub : suite_names()) rep.append(run_suite(sub, seed, cfg));
    } else {
        throw domain_error("run_suite: unknown suite \"" + name + "\"");
    }
    rep.seed = seed;
    rep.config_summary = cfg.summary();
    return rep;
}

} // namespace sympert
