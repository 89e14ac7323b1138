#include "sympert/flowbox.hpp"
#include "sympert/json_io.hpp"
#include "sympert/realization.hpp"
#include "sympert/suites.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace sympert;

json load_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void emit(const json& j, const std::string& out_path)
{
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        out << j.dump(2) << "\n";
    }
}

int report_exit(const VerificationReport& rep, const std::string& out_path)
{
    emit(report_to_json(rep), out_path);
    return rep.overall() ? 0 : 1;
}

VerificationReport certify_discrete(const PerturbedMap& g, unsigned long long seed)
{
    VerificationReport rep;
    rep.suite = "realize-map";
    const int dim = 2 * g.base().d + g.base().n;
    const Mat dg = g.jacobian(g.point());
    const double dpf_norm = matrix_norm(g.base().jacobian(g.point()));
    rep.checks.push_back(check_le("derivative-error-relative",
                                  matrix_norm(dg - g.target_derivative()) / dpf_norm, 1e-5));
    Rng rng(seed);
    std::normal_distribution<double> gauss;
    const Mat jhat = PoissonSpace(g.base().d, g.base().n).structure_matrix();
    double defect = 0.0;
    for (int s = 0; s < 200; ++s) {
        Vec x(dim);
        for (int j = 0; j < dim; ++j) x[j] = 0.4 * g.support_radius() * gauss(rng);
        const Mat jac = g.analytic_jacobian(g.point() + x);
        defect = std::max(defect, matrix_norm(jac * jhat * jac.transpose() - jhat));
    }
    rep.checks.push_back(check_le("poisson-defect-sampled", defect, 1e-6));
    double mismatch = 0.0;
    for (int s = 0; s < 50; ++s) {
        Vec x(dim);
        for (int j = 0; j < dim; ++j) x[j] = gauss(rng);
        x *= (2.0 + g.support_radius()) / x.norm();
        const Vec a = g(x), b = g.base().eval(x);
        for (int j = 0; j < dim; ++j)
            if (a[j] != b[j]) mismatch += 1.0;
    }
    rep.checks.push_back(check_le("outside-support-exactness-violations", mismatch, 0.0));
    return rep;
}

VerificationReport certify_continuous(const PerturbedHamiltonian& ph)
{
    VerificationReport rep;
    rep.suite = "realize-flow";
    const auto res = poincare_map(ph.field, Vec::Zero(ph.field.dim()), 1.0);
    rep.checks.push_back(
        check_le("poincare-jacobian-error", matrix_norm(res.jacobian - ph.target), 1e-5));
    rep.checks.push_back(check_le("return-time-error", std::abs(res.tau - 1.0), 1e-10));
    rep.checks.push_back(check_le("section-residual", res.section_residual, 1e-12));
    return rep;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"constructive symplectic/Poisson perturbation toolkit"};
    app.require_subcommand(1);

    std::string matrix_path, out_path, ham_path, x0_path, config_path, csv_path, base_path;
    double rho = 1.0, t_final = 1.0, step = 1e-3, section = 1.0, epsilon0 = 0.15;
    unsigned long long seed = 42;
    std::string suite_name;

    auto* dec = app.add_subcommand("decompose", "factor a symplectic matrix into planar rotations");
    dec->add_option("--matrix", matrix_path, "matrix JSON file")->required();
    dec->add_option("--out", out_path, "output path (stdout default)");
    dec->add_option("--epsilon0", epsilon0, "near-identity regime bound");

    auto* flow = app.add_subcommand("flow", "integrate a Hamiltonian flow");
    flow->add_option("--hamiltonian", ham_path, "field descriptor JSON")->required();
    flow->add_option("--x0", x0_path, "initial point JSON array")->required();
    flow->add_option("--t", t_final, "integration time");
    flow->add_option("--step", step, "integrator step");
    flow->add_option("--csv", csv_path, "trajectory CSV output path");

    auto* poin = app.add_subcommand("poincare", "first-return map to x_1 = c");
    poin->add_option("--hamiltonian", ham_path, "field descriptor JSON")->required();
    poin->add_option("--x0", x0_path, "initial point JSON array")->required();
    poin->add_option("--section", section, "target section value c");
    poin->add_option("--step", step, "integrator step");
    poin->add_option("--out", out_path, "output path");

    auto* rmap = app.add_subcommand("realize-map", "discrete Franks-type realization");
    rmap->add_option("--target", matrix_path, "target symplectic matrix JSON")->required();
    rmap->add_option("--rho", rho, "support radius");
    rmap->add_option("--out", out_path, "output path");
    rmap->add_option("--seed", seed, "certification seed");

    auto* rflow = app.add_subcommand("realize-flow", "continuous realization via Poincare map");
    rflow->add_option("--target", matrix_path, "target symplectic matrix JSON")->required();
    rflow->add_option("--rho", rho, "support rescale factor");
    rflow->add_option("--out", out_path, "output path");

    auto* fbox = app.add_subcommand("flowbox", "Poisson flowbox chart construction");
    fbox->add_option("--hamiltonian", ham_path, "field descriptor JSON")->required();
    fbox->add_option("--base", base_path, "base point JSON array")->required();
    fbox->add_option("--out", out_path, "report output path");
    fbox->add_option("--csv", csv_path, "chart sample table CSV path");

    auto* chk = app.add_subcommand("check", "gradient/support/C2 battery for a field");
    chk->add_option("--hamiltonian", ham_path, "field descriptor JSON")->required();
    chk->add_option("--out", out_path, "output path");
    chk->add_option("--seed", seed, "sampling seed");

    auto* rs = app.add_subcommand("run-suite", "run a verification battery");
    rs->add_option("name", suite_name, "factorization|generators|flows|realize-discrete|"
                                       "realize-continuous|flowbox|all")
        ->required();
    rs->add_option("--seed", seed, "master seed");
    rs->add_option("--config", config_path, "suite config JSON");
    rs->add_option("--out", out_path, "report output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (*dec) {
            int d = 0, n = 0;
            const Mat a = matrix_from_json(load_json(matrix_path), &d, &n);
            DecomposeOptions opts;
            opts.epsilon0 = epsilon0;
            const Factorization f = decompose_near_identity(a, opts);
            emit(factorization_to_json(f, static_cast<int>(a.rows()) / 2), out_path);
            return 0;
        }
        if (*flow) {
            const auto h = field_from_json(load_json(ham_path));
            const Vec x0 = vector_from_json(load_json(x0_path));
            std::vector<std::pair<double, Vec>> trace;
            const FlowResult res = integrate_flow_trace(h, x0, t_final, step, trace);
            if (!csv_path.empty()) {
                std::ofstream csv(csv_path);
                csv << "t";
                for (int j = 0; j < h.dim(); ++j) csv << ",q" << j + 1;
                csv << ",H\n";
                csv.precision(17);
                for (const auto& [tt, state] : trace) {
                    csv << tt;
                    for (int j = 0; j < h.dim(); ++j) csv << "," << state[j];
                    csv << "," << h.value(state) << "\n";
                }
            }
            json out;
            out["endpoint"] = vector_to_json(res.endpoint);
            out["time"] = res.time;
            out["steps"] = res.steps;
            out["h_drift"] = res.drift;
            emit(out, out_path);
            return 0;
        }
        if (*poin) {
            const auto h = field_from_json(load_json(ham_path));
            const Vec x0 = vector_from_json(load_json(x0_path));
            PoincareOptions opts;
            opts.step = step;
            const auto res = poincare_map(h, x0, section, opts);
            json out;
            out["hit"] = vector_to_json(res.hit);
            out["tau"] = res.tau;
            out["section_residual"] = res.section_residual;
            out["jacobian"] = matrix_to_json(res.jacobian, h.pairs() - 1, 0);
            emit(out, out_path);
            return 0;
        }
        if (*rmap) {
            int d = 0, n = 0;
            const Mat target = matrix_from_json(load_json(matrix_path), &d, &n);
            d = static_cast<int>(target.rows()) / 2;
            const auto f = identity_map(d, n);
            const PerturbedMap g = realize_discrete(f, Vec::Zero(2 * d + n), target, rho);
            json out;
            out["descriptor"] = json{{"base", "identity"},
                                     {"rho", g.support_radius()},
                                     {"k_scale", g.generator_scale()},
                                     {"target", matrix_to_json(target, d, n)},
                                     {"factorization", factorization_to_json(g.factorization(), d)}};
            const auto rep = certify_discrete(g, seed);
            out["report"] = report_to_json(rep);
            emit(out, out_path);
            return rep.overall() ? 0 : 1;
        }
        if (*rflow) {
            int d = 0, n = 0;
            const Mat target = matrix_from_json(load_json(matrix_path), &d, &n);
            d = static_cast<int>(target.rows()) / 2;
            const auto ph = realize_continuous(target, rho, d, n);
            json out;
            out["descriptor"] = field_to_json(ph.field);
            out["tube_hat_radius"] = ph.tube_hat_radius;
            out["factorization"] = factorization_to_json(ph.factorization, d);
            const auto rep = certify_continuous(ph);
            out["report"] = report_to_json(rep);
            emit(out, out_path);
            return rep.overall() ? 0 : 1;
        }
        if (*fbox) {
            const auto h = field_from_json(load_json(ham_path));
            const Vec base = vector_from_json(load_json(base_path));
            const int d = h.pairs(), n = h.n();
            Section sigma{Vec::Unit(h.dim(), 0), base};
            const auto leaf = graph_leaf_chart(h, h.value(base), d, n);
            const auto chart = build_flowbox_chart(h, base, sigma, leaf);

            VerificationReport rep;
            rep.suite = "flowbox";
            rep.seed = seed;
            Rng rng(seed);
            std::normal_distribution<double> gauss;
            double round = 0.0, forward = 0.0, bracket = 0.0;
            std::ofstream csv;
            if (!csv_path.empty()) {
                csv.open(csv_path);
                csv << "sample";
                for (int j = 0; j < h.dim(); ++j) csv << ",m" << j + 1;
                for (int j = 0; j < h.dim(); ++j) csv << ",g" << j + 1;
                csv << "\n";
                csv.precision(17);
            }
            for (int s = 0; s < 40; ++s) {
                Vec m(h.dim());
                for (int j = 0; j < h.dim(); ++j) m[j] = 0.08 * gauss(rng);
                m += base;
                const Vec y = chart.forward(m);
                round = std::max(round, (chart.inverse(y) - m).norm());
                forward = std::max(forward, std::abs(y[d] - h.value(m)));
                if (s < 10)
                    bracket = std::max(bracket,
                                       std::abs(conjugate_field(h, sigma, m).bracket - 1.0));
                if (csv.is_open()) {
                    csv << s;
                    for (int j = 0; j < h.dim(); ++j) csv << "," << m[j];
                    for (int j = 0; j < h.dim(); ++j) csv << "," << y[j];
                    csv << "\n";
                }
            }
            rep.checks.push_back(check_le("round-trip", round, 1e-8));
            rep.checks.push_back(check_le("h0-compose-g-equals-h", forward, 1e-12));
            rep.checks.push_back(check_le("bracket-h-g-minus-one", bracket, 1e-6));
            return report_exit(rep, out_path);
        }
        if (*chk) {
            const auto h = field_from_json(load_json(ham_path));
            VerificationReport rep;
            rep.suite = "check";
            rep.seed = seed;
            Rng rng(seed);
            std::normal_distribution<double> gauss;
            double grad_err = 0.0, c2 = 0.0;
            for (int t = 0; t < 100; ++t) {
                Vec p(h.dim());
                for (int j = 0; j < h.dim(); ++j) p[j] = 0.5 * gauss(rng);
                const Vec g = h.gradient(p);
                const double eps = 1e-5 * std::max(1.0, p.norm());
                for (int j = 0; j < h.dim(); ++j) {
                    Vec plus = p, minus = p;
                    plus[j] += eps;
                    minus[j] -= eps;
                    grad_err = std::max(
                        grad_err, std::abs((h.value(plus) - h.value(minus)) / (2 * eps) - g[j]));
                    const Vec col = (h.gradient(plus) - h.gradient(minus)) / (2 * eps);
                    c2 = std::max(c2, col.cwiseAbs().maxCoeff());
                }
                c2 = std::max({c2, std::abs(h.value(p)), g.cwiseAbs().maxCoeff()});
            }
            rep.checks.push_back(check_le("gradient-vs-central-differences", grad_err, 1e-6));
            rep.checks.push_back(check_le("measured-c2-norm", c2, 1e12)); // informational
            return report_exit(rep, out_path);
        }
        if (*rs) {
            SuiteConfig cfg;
            if (!config_path.empty()) cfg = SuiteConfig::from_json(load_json(config_path));
            const auto rep = run_suite(suite_name, seed, cfg);
            return report_exit(rep, out_path);
        }
    } catch (const domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
