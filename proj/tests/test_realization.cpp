#include "sympert/realization.hpp"

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

bool same_vector(const Vec& a, const Vec& b)
{
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

} // namespace

TEST_SUITE("realize-discrete")
{
    TEST_CASE("identity target leaves the map untouched")
    {
        const auto f = identity_map(2, 1);
        const auto g = realize_discrete(f, Vec::Zero(5), Mat::Identity(4, 4), 1.0);
        Rng rng(1);
        for (int t = 0; t < 20; ++t) {
            const Vec x = random_ball(5, 2.0, rng);
            CHECK(same_vector(g(x), x));
        }
    }

    TEST_CASE("the construction fixes the perturbation point")
    {
        Rng rng(2);
        const auto f = translation_map(random_ball(5, 0.4, rng), 2, 1);
        const Vec p = random_ball(5, 0.2, rng);
        const Mat target = random_symplectic(2, 1e-2, rng);
        const auto g = realize_discrete(f, p, target, 0.7);
        CHECK(same_vector(g(p), f.eval(p)));
    }

    TEST_CASE("derivative realization at the point")
    {
        Rng rng(3);
        const auto f = translation_map(random_ball(5, 0.5, rng), 2, 1);
        const Mat target = embed_pi_k(rotation2(0.05), 1, 2, 0);
        const auto g = realize_discrete(f, Vec::Zero(5), target, 1.0);
        const Mat want = lift_to_dim(target, 5); // D_p f = I
        CHECK(matrix_norm(g.jacobian(Vec::Zero(5)) - want) <= 1e-5);
        CHECK(matrix_norm(g.target_derivative() - want) == 0.0);
    }

    TEST_CASE("nonlinear Poisson base map")
    {
        Rng rng(4);
        const int d = 2, n = 1, dim = 5;
        const auto f = k_flow_map(0.2, 2, d, n);
        const Vec p = random_ball(dim, 0.15, rng);
        const Mat target = random_symplectic(d, 1e-2, rng);
        const auto g = realize_discrete(f, p, target, 1.0);

        const Mat dpf = f.jacobian(p);
        CHECK(matrix_norm(g.jacobian(p) - g.target_derivative()) <= 1e-5 * matrix_norm(dpf));

        // exactly Poisson, measured through the closed-form Jacobian
        const Mat jhat = PoissonSpace(d, n).structure_matrix();
        for (int t = 0; t < 100; ++t) {
            const Vec x = p + random_ball(dim, 0.5, rng);
            const Mat jac = g.analytic_jacobian(x);
            CHECK(matrix_norm(jac * jhat * jac.transpose() - jhat) <= 1e-12);
        }

        // bitwise equality outside the support preimage
        for (int t = 0; t < 30; ++t) {
            Vec x = random_ball(dim, 1.0, rng);
            x *= 3.5 / x.norm();
            CHECK(same_vector(g(x), f.eval(x)));
        }
    }

    TEST_CASE("support radius bounds the moving set of h")
    {
        Rng rng(5);
        const double rho = 0.6;
        const auto f = identity_map(2, 0);
        const Mat target = random_symplectic(2, 5e-3, rng);
        const auto g = realize_discrete(f, Vec::Zero(4), target, rho);
        for (int t = 0; t < 200; ++t) {
            Vec w = random_ball(4, 1.0, rng);
            w *= (rho + 1e-9 + 0.01 * t) / w.norm();
            CHECK(same_vector(g.apply_h(w), w));
        }
    }

    TEST_CASE("perturbation size report")
    {
        const auto f = identity_map(2, 0);
        const auto trivial = realize_discrete(f, Vec::Zero(4), Mat::Identity(4, 4), 1.0);
        GridSpec grid;
        grid.samples = 100;
        const auto rep0 = perturbation_size(trivial, grid);
        CHECK(rep0.c0 == 0.0);
        CHECK(rep0.c1 == 0.0);

        Rng rng(6);
        const auto g = realize_discrete(f, Vec::Zero(4), random_symplectic(2, 1e-2, rng), 1.0);
        const auto rep = perturbation_size(g, grid);
        CHECK(rep.c1 > 0.0);
        CHECK(rep.c1 >= rep.c0);
        CHECK(rep.fitted_constant > 0.0);
    }

    TEST_CASE("error paths")
    {
        const auto f = identity_map(1, 0);
        Rng rng(7);
        CHECK_THROWS_AS(realize_discrete(f, Vec::Zero(2), random_symplectic(1, 1e-2, rng), 0.0),
                        domain_error);
        CHECK_THROWS_AS(realize_discrete(f, Vec::Zero(2), random_symplectic(1, 0.4, rng), 1.0),
                        OutOfRegimeError);
    }
}

TEST_SUITE("realize-continuous")
{
    TEST_CASE("identity target gives the straight flow")
    {
        const auto ph = realize_continuous(Mat::Identity(4, 4), 1.0, 2, 1);
        Rng rng(8);
        for (int t = 0; t < 20; ++t) {
            const Vec p = random_ball(7, 1.0, rng);
            CHECK(ph.field.value(p) == p[3]); // y_1 on the enlarged space
        }
    }

    TEST_CASE("single rotation target")
    {
        const Mat target = embed_pi_k(rotation2(0.3), 1, 1, 0);
        const auto ph = realize_continuous(target, 1.0, 1, 0);
        const auto res = poincare_map(ph.field, Vec::Zero(4), 1.0);
        CHECK(matrix_norm(res.jacobian - target) <= 1e-5);
        CHECK(std::abs(res.tau - 1.0) <= 1e-10);
    }

    TEST_CASE("random near-identity targets, both dimensions")
    {
        Rng rng(9);
        for (const int d : {1, 2}) {
            for (int t = 0; t < 5; ++t) {
                const Mat target = random_symplectic(d, 1e-2, rng);
                const auto ph = realize_continuous(target, 1.0, d, 1);
                const auto res = poincare_map(ph.field, Vec::Zero(2 * (d + 1) + 1), 1.0);
                CHECK(matrix_norm(res.jacobian - target) <= 1e-5);
                CHECK(res.section_residual <= 1e-12);
            }
        }
    }

    TEST_CASE("support rescale preserves the Poincare derivative")
    {
        Rng rng(10);
        const Mat target = random_symplectic(2, 8e-3, rng);
        const auto ph = realize_continuous(target, 0.4, 2, 1);
        CHECK(ph.field.kind() == FieldKind::rescaled);
        const auto res = poincare_map(ph.field, Vec::Zero(7), 1.0);
        CHECK(matrix_norm(res.jacobian - target) <= 1e-5);
        CHECK(std::abs(res.tau - 1.0) <= 1e-10);
    }

    TEST_CASE("generators agree with the straight flow off the tube and on the axis")
    {
        Rng rng(11);
        const int d = 2, n = 1, dim = 7;
        const Mat target = random_symplectic(d, 1e-2, rng);
        const auto ph = realize_continuous(target, 1.0, d, n);
        Vec expected = Vec::Zero(dim);
        expected[0] = 1.0;
        for (int g = 0; g <= 10; ++g) {
            const Vec p = Vec::Unit(dim, 0) * (g / 10.0);
            CHECK(same_vector(hamiltonian_vector_field(ph.field, p), expected));
        }
        for (int t = 0; t < 20; ++t) {
            Vec p = random_ball(dim, 0.3, rng);
            p[0] = (t % 2) ? 1.2 : -0.2;
            CHECK(same_vector(hamiltonian_vector_field(ph.field, p), expected));
        }
    }

    TEST_CASE("perturbation size scales with the target distance")
    {
        GridSpec grid;
        grid.samples = 120;
        grid.radius = 0.2;
        Rng rng(12);
        const auto small = realize_continuous(random_symplectic(2, 1e-4, rng), 1.0, 2, 1);
        const auto large = realize_continuous(random_symplectic(2, 1e-2, rng), 1.0, 2, 1);
        const auto rs = perturbation_size(small, grid);
        const auto rl = perturbation_size(large, grid);
        CHECK(rs.c2 < rl.c2);
        CHECK(rl.bound_expression > 0.0);
    }
}
