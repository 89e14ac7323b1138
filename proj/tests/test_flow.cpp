#include "sympert/flow.hpp"
#include "sympert/poisson_space.hpp"

#include <doctest.h>

using namespace sympert;

namespace {

Vec random_ball(int dim, double radius, Rng& rng)
{
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Vec v(dim);
    for (int j = 0; j < dim; ++j) v[j] = gauss(rng);
    return v * (radius * std::pow(unit(rng), 1.0 / dim) / v.norm());
}

} // namespace

TEST_SUITE("flow-engine")
{
    TEST_CASE("Hamiltonian vector field directions")
    {
        const auto h0 = make_H0(2, 1);
        const Vec x = hamiltonian_vector_field(h0, Vec::Zero(5));
        CHECK(x[0] == 1.0);
        CHECK(x.tail(4).cwiseAbs().maxCoeff() == 0.0);

        // K on its plateau: (xdot_i, ydot_i) = alpha (-y_i, x_i)
        const double alpha = 0.4;
        const auto k = make_rotation_hamiltonian(alpha, 1, 2, 1);
        Vec p(5);
        p << 0.1, -0.05, 0.2, 0.02, 0.03; // rho = 0.02715 < 1/4
        const Vec xk = hamiltonian_vector_field(k, p);
        CHECK(xk[0] == doctest::Approx(-alpha * p[2]).epsilon(1e-14));
        CHECK(xk[2] == doctest::Approx(alpha * p[0]).epsilon(1e-14));
        CHECK(xk[1] == doctest::Approx(0.0));
        CHECK(xk[3] == doctest::Approx(0.0));
        CHECK(xk[4] == 0.0); // z never moves

        Vec far = p;
        far *= 3.0 / far.norm();
        CHECK(hamiltonian_vector_field(k, far).cwiseAbs().maxCoeff() == 0.0);

        CHECK_THROWS_AS(hamiltonian_vector_field(k, Vec::Zero(3)), dimension_error);
    }

    TEST_CASE("integrate_flow basics")
    {
        const auto h0 = make_H0(2, 1);
        const auto res = integrate_flow(h0, Vec::Zero(5), 1.0, 1e-2);
        CHECK(res.endpoint[0] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(res.endpoint.tail(4).cwiseAbs().maxCoeff() == 0.0);
        CHECK(res.drift == 0.0);

        CHECK_THROWS_AS(integrate_flow(h0, Vec::Zero(5), 1.0, 0.0), domain_error);

        // finite-time blow-up must be reported, not propagated as NaN
        std::vector<MonomialTerm> terms;
        terms.push_back({40.0, {{0, 2}, {2, 1}}}); // 40 x_1^2 y_1 on d=2
        const auto runaway = make_polynomial_hamiltonian(std::move(terms), 2, 0);
        Vec x0(4);
        x0 << 2.0, 0.0, 1.0, 0.0;
        CHECK_THROWS_AS(integrate_flow(runaway, x0, 2.0, 1e-3), DivergedError);
    }

    TEST_CASE("closed-form K flow: rotation, invariance, identity off support")
    {
        Rng rng(19);
        const int d = 2, n = 1;

        Vec p(5);
        p << 0.1, 0.0, 0.0, 0.0, 0.0;
        const Vec q = closed_form_K_flow(M_PI / 2, 1, 1.0, p, d, n);
        CHECK(q[0] == doctest::Approx(0.0));
        CHECK(q[2] == doctest::Approx(0.1).epsilon(1e-14));

        for (int t = 0; t < 50; ++t) {
            const Vec a = random_ball(5, 1.4, rng);
            const Vec b = closed_form_K_flow(0.8, 2, 0.6, a, d, n);
            CHECK(std::abs(rho_of(b) - rho_of(a)) <= 1e-15);
            CHECK(std::abs(rho_i_of(b, 2, d) - rho_i_of(a, 2, d)) <= 2e-16);
            CHECK(b[4] == a[4]);
        }

        Vec far = random_ball(5, 1.0, rng);
        far *= 2.0 / far.norm();
        const Vec qq = closed_form_K_flow(0.8, 1, 1.0, far, d, n);
        for (int j = 0; j < 5; ++j) CHECK(qq[j] == far[j]);

        const Vec same = closed_form_K_flow(0.8, 1, 0.0, p, d, n);
        for (int j = 0; j < 5; ++j) CHECK(same[j] == p[j]);
    }

    TEST_CASE("closed-form K flow against RK4")
    {
        Rng rng(23);
        for (int t = 0; t < 40; ++t) {
            const double alpha = -1.0 + 2.0 * std::uniform_real_distribution<double>(0, 1)(rng);
            const int i = 1 + t % 2;
            Vec p = random_ball(5, 1.3, rng);
            const auto k = make_rotation_hamiltonian(alpha, i, 2, 1);
            const Vec exact = closed_form_K_flow(alpha, i, 1.0, p, 2, 1);
            const Vec num = integrate_flow(k, p, 1.0, 1e-3).endpoint;
            CHECK((exact - num).lpNorm<Eigen::Infinity>() <= 1e-8);
        }
    }

    TEST_CASE("closed-form K-flow Jacobian is exact")
    {
        Rng rng(29);
        const Mat jhat = PoissonSpace(2, 1).structure_matrix();
        for (int t = 0; t < 40; ++t) {
            const double alpha = 0.9;
            const int i = 1 + t % 2;
            const Vec p = random_ball(5, 1.35, rng);
            const Mat jac = closed_form_K_flow_jacobian(alpha, i, 1.0, p, 2, 1);
            // finite differences of the closed form
            for (int j = 0; j < 5; ++j) {
                Vec plus = p, minus = p;
                plus[j] += 1e-6;
                minus[j] -= 1e-6;
                const Vec col = (closed_form_K_flow(alpha, i, 1.0, plus, 2, 1) -
                                 closed_form_K_flow(alpha, i, 1.0, minus, 2, 1)) /
                                2e-6;
                CHECK((col - jac.col(j)).cwiseAbs().maxCoeff() <= 2e-5);
            }
            // the flow is Poisson: Dphi Jhat Dphi^T = Jhat
            CHECK(matrix_norm(jac * jhat * jac.transpose() - jhat) <= 1e-12);
        }
    }

    TEST_CASE("dilation and rescale flow identities")
    {
        Rng rng(31);
        const double alpha = 0.6, rho = 0.37;
        const auto k = make_rotation_hamiltonian(alpha, 1, 2, 1);

        const auto dil = dilate_support(k, rho);
        for (int t = 0; t < 10; ++t) {
            const Vec p = random_ball(5, 0.3, rng);
            const Vec via_field = integrate_flow(dil, p, 1.0, 1e-3).endpoint;
            const Vec via_scaling = rho * closed_form_K_flow(alpha, 1, 1.0, Vec(p / rho), 2, 1);
            CHECK((via_field - via_scaling).lpNorm<Eigen::Infinity>() <= 1e-9);
        }

        const auto res = rescale_support(k, rho);
        for (int t = 0; t < 10; ++t) {
            const Vec p = random_ball(5, 0.3, rng);
            const Vec via_field = integrate_flow(res, p, 0.5, 1e-3).endpoint;
            // phi^t of rho H(./rho) = psi^{-1} phi^{t/rho} psi
            const Vec via_scaling = rho * closed_form_K_flow(alpha, 1, 0.5 / rho, Vec(p / rho), 2, 1);
            CHECK((via_field - via_scaling).lpNorm<Eigen::Infinity>() <= 1e-9);
        }
    }

    TEST_CASE("closed-form transit flow")
    {
        const int d = 2, n = 0;
        const double alpha = 0.3;
        Vec p = Vec::Zero(6);
        p[1] = 0.05;
        p[4] = -0.02; // yhat_1

        const Vec q = closed_form_transit_flow(alpha, 1, 1.0, p, d, n);
        CHECK(q[0] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(q[3] == doctest::Approx(0.0)); // y_1 returns to the section
        const Mat r = rotation2(alpha);
        CHECK(q[1] == doctest::Approx(r(0, 0) * p[1] + r(0, 1) * p[4]).epsilon(1e-12));
        CHECK(q[4] == doctest::Approx(r(1, 0) * p[1] + r(1, 1) * p[4]).epsilon(1e-12));

        const Vec origin = closed_form_transit_flow(alpha, 1, 0.7, Vec::Zero(6), d, n);
        CHECK(origin[0] == doctest::Approx(0.7));
        CHECK(origin.tail(5).cwiseAbs().maxCoeff() == 0.0);

        Vec outside = p;
        outside[1] = 0.9; // hat point beyond the plateau
        CHECK_THROWS_AS(closed_form_transit_flow(alpha, 1, 1.0, outside, d, n), OutOfTubeError);
    }

    TEST_CASE("flow Jacobians")
    {
        const auto h0 = make_H0(2, 1);
        const Mat j0 = flow_jacobian(h0, Vec::Zero(5), 1.0);
        CHECK(matrix_norm(j0 - Mat::Identity(5, 5)) <= 1e-9);

        const double alpha = 0.3;
        const auto k = make_rotation_hamiltonian(alpha, 1, 2, 1);
        const Mat jk = flow_jacobian(k, Vec::Zero(5), 1.0);
        CHECK(matrix_norm(jk - embed_pi_k(rotation2(alpha), 1, 2, 1)) <= 1e-6);
        const Mat jk_rich = flow_jacobian(k, Vec::Zero(5), 1.0, 1e-5, 1e-3, true);
        CHECK(matrix_norm(jk_rich - embed_pi_k(rotation2(alpha), 1, 2, 1)) <= 1e-6);
    }

    TEST_CASE("Poincare map of the straight flow and a transit")
    {
        const int d = 2, n = 1, dim = 2 * (d + 1) + n;
        const auto h0 = make_H0(d + 1, n);
        Vec x0 = Vec::Zero(dim);
        x0[1] = 0.03;
        x0[d + 2] = -0.01;
        const auto res = poincare_map(h0, x0, 1.0);
        CHECK(std::abs(res.tau - 1.0) <= 1e-12);
        CHECK(res.section_residual <= 1e-12);
        CHECK(std::abs(res.hit[1] - x0[1]) <= 1e-12);
        CHECK(matrix_norm(res.jacobian - Mat::Identity(2 * d, 2 * d)) <= 1e-8);

        std::vector<ChainFactor> fs(1);
        fs[0].conjugator = Mat::Identity(2 * d, 2 * d);
        fs[0].plane = 2;
        fs[0].alpha = 0.3;
        const auto h = make_chained_hamiltonian(fs, d, n);
        const auto rt = poincare_map(h, Vec::Zero(dim), 1.0);
        CHECK(std::abs(rt.tau - 1.0) <= 1e-10);
        CHECK(matrix_norm(rt.jacobian - embed_pi_k(rotation2(0.3), 2, d, 0)) <= 1e-5);

        // never reaches the section
        Vec beyond = Vec::Zero(dim);
        beyond[0] = 2.0;
        CHECK_THROWS_AS(poincare_map(h0, beyond, 1.0), NoReturnError);
        std::vector<MonomialTerm> terms;
        terms.push_back({-1.0, {{d + 1, 1}}}); // -y_1: drifts backward
        const auto back = make_polynomial_hamiltonian(std::move(terms), d + 1, n);
        PoincareOptions fast;
        fast.t_max = 2.0;
        fast.with_jacobian = false;
        CHECK_THROWS_AS(poincare_map(back, Vec::Zero(dim), 1.0, fast), NoReturnError);
    }
}
