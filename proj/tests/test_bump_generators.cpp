#include "sympert/hamiltonian.hpp"

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

double fd_partial(const HamiltonianField& h, const Vec& p, int j, double eps)
{
    Vec plus = p, minus = p;
    plus[j] += eps;
    minus[j] -= eps;
    return (h.value(plus) - h.value(minus)) / (2 * eps);
}

} // namespace

TEST_SUITE("bump")
{
    TEST_CASE("plateau, support and range")
    {
        CHECK(bump().value(0.0) == 1.0);
        CHECK(bump().value(0.25) == 1.0);
        CHECK(bump().value(-0.2) == 1.0);
        CHECK(bump().value(1.0) == 0.0);
        CHECK(bump().value(2.0) == 0.0);
        CHECK(bump().value(-5.0) == 0.0);
        for (int k = 0; k <= 4000; ++k) {
            const double r = -1.2 + 2.4 * k / 4000.0;
            const double v = bump().value(r);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }

    TEST_CASE("unit mass, exactly")
    {
        CHECK(std::abs(bump().integrate(-10.0, 10.0) - 1.0) <= 1e-15);
        CHECK(std::abs(bump().integrate(-1.0, 1.0) - 1.0) <= 1e-15);
        // plateau carries 1/2, each transition 1/4
        CHECK(bump().integrate(-0.25, 0.25) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(bump().integrate(0.25, 1.0) == doctest::Approx(0.25).epsilon(1e-15));

        // antiderivative against composite Simpson on the transition
        const int strips = 4000;
        double acc = 0.0;
        const double a = 0.25, b = 1.0, h = (b - a) / strips;
        for (int k = 0; k < strips; ++k) {
            const double x0 = a + k * h;
            acc += h / 6.0 *
                   (bump().value(x0) + 4.0 * bump().value(x0 + h / 2) + bump().value(x0 + h));
        }
        CHECK(std::abs(acc - 0.25) <= 1e-12);
    }

    TEST_CASE("monotone on the falling transition")
    {
        double prev = bump().value(0.25);
        for (int k = 1; k <= 1000; ++k) {
            const double v = bump().value(0.25 + 0.75 * k / 1000.0);
            CHECK(v <= prev + 1e-15);
            prev = v;
        }
    }

    TEST_CASE("derivatives match central differences")
    {
        for (int k = 0; k <= 300; ++k) {
            const double r = -1.1 + 2.2 * k / 300.0;
            const double eps = 1e-6;
            const double fd1 = (bump().value(r + eps) - bump().value(r - eps)) / (2 * eps);
            const double fd2 = (bump().d1(r + eps) - bump().d1(r - eps)) / (2 * eps);
            CHECK(std::abs(fd1 - bump().d1(r)) <= 1e-7);
            CHECK(std::abs(fd2 - bump().d2(r)) <= 1e-6);
        }
    }

    TEST_CASE("cached norms agree with a dense scan")
    {
        double c0 = 0, c1 = 0, c2 = 0;
        for (int k = 0; k <= 200000; ++k) {
            const double r = -1.0 + 2.0 * k / 200000.0;
            c0 = std::max(c0, std::abs(bump().value(r)));
            c1 = std::max(c1, std::abs(bump().d1(r)));
            c2 = std::max(c2, std::abs(bump().d2(r)));
        }
        CHECK(bump().c0_norm() == doctest::Approx(c0).epsilon(1e-9));
        CHECK(bump().c1_norm() == doctest::Approx(c1).epsilon(1e-9));
        CHECK(bump().c2_norm() == doctest::Approx(c2).epsilon(1e-9));
    }
}

TEST_SUITE("generators")
{
    TEST_CASE("rotation generator values")
    {
        const auto zero = make_rotation_hamiltonian(0.0, 1, 2, 1);
        Rng rng(3);
        for (int t = 0; t < 20; ++t) CHECK(zero.value(random_ball(5, 1.5, rng)) == 0.0);

        // plateau evaluation; the field carries -alpha so that the time-1
        // flow rotates by +alpha
        const auto k1 = make_rotation_hamiltonian(1.0, 1, 1, 0);
        Vec p(2);
        p << 0.1, 0.0;
        CHECK(k1.value(p) == doctest::Approx(-0.005).epsilon(1e-15));

        CHECK_THROWS_AS(make_rotation_hamiltonian(1.0, 3, 2, 0), domain_error);
    }

    TEST_CASE("rotation generator vanishes identically outside B_1")
    {
        const auto k = make_rotation_hamiltonian(0.8, 2, 2, 1);
        Rng rng(4);
        for (int t = 0; t < 50; ++t) {
            Vec p = random_ball(5, 1.0, rng);
            p *= (std::sqrt(2.0) * (1.0 + 0.02 * t)) / p.norm();
            CHECK(k.value(p) == 0.0);
            CHECK(k.gradient(p).cwiseAbs().maxCoeff() == 0.0);
        }
    }

    TEST_CASE("second derivatives follow the product-rule table")
    {
        // FD Hessian of the analytic gradient against the closed-form entries
        const double alpha = 0.45;
        const int d = 2, n = 1, i = 1;
        const auto k = make_rotation_hamiltonian(alpha, i, d, n);
        Rng rng(9);
        for (int t = 0; t < 40; ++t) {
            const Vec p = random_ball(5, 1.3, rng);
            const double rho = rho_of(p);
            if (std::abs(rho - 1.0) < 1e-3 || std::abs(rho - 0.25) < 1e-3) continue;
            const double ri = rho_i_of(p, i, d);
            const double l = bump().value(rho), l1 = bump().d1(rho), l2 = bump().d2(rho);
            const double x = p[0], y = p[2]; // x_1, y_1 of the d=2 layout
            const double u = p[1], v = p[3]; // x_2, y_2

            auto hess = [&](int a, int b) {
                const double eps = 1e-6;
                Vec pp = p, pm = p;
                pp[b] += eps;
                pm[b] -= eps;
                return (k.gradient(pp)[a] - k.gradient(pm)[a]) / (2 * eps);
            };
            // mixed conjugate-pair entry
            CHECK(hess(0, 2) ==
                  doctest::Approx(-alpha * (l2 * ri + 2 * l1) * x * y).epsilon(1e-6));
            // diagonal in a rotated coordinate w = x_i
            CHECK(hess(0, 0) == doctest::Approx(-alpha * (l1 * ri + l + l2 * ri * x * x +
                                                          2 * l1 * x * x))
                                    .epsilon(1e-6));
            // spectator coordinates
            CHECK(hess(1, 1) == doctest::Approx(-alpha * (l1 + l2 * u * u) * ri).epsilon(1e-6));
            CHECK(hess(1, 3) == doctest::Approx(-alpha * l2 * ri * u * v).epsilon(1e-6));
            // cross pair/spectator
            CHECK(hess(0, 1) == doctest::Approx(-alpha * (l2 * ri + l1) * x * u).epsilon(1e-6));
        }
    }

    TEST_CASE("transit generator values and plateau gradient")
    {
        const auto h = make_transit_hamiltonian(0.3, 1, 2, 0);
        Vec p = Vec::Zero(6);
        p[0] = 0.5;  // x_1 plateau of l(2x-1)
        p[1] = 0.1;  // xhat_1
        // carries -2 alpha: a transit integrates l(2x_1-1) to 1/2
        CHECK(h.value(p) == doctest::Approx(-0.003).epsilon(1e-15));

        Vec q = p;
        q[0] = -0.6;
        CHECK(h.value(q) == 0.0);
        CHECK(h.gradient(q).cwiseAbs().maxCoeff() == 0.0);

        CHECK(h.gradient(p)[0] == 0.0); // plateau of l(2x_1-1)

        CHECK_THROWS_AS(make_transit_hamiltonian(0.3, 3, 2, 0), domain_error);
    }

    TEST_CASE("chained Hamiltonian structure")
    {
        const int d = 2, n = 1, dim = 7;
        Rng rng(15);

        // all-zero angles collapse to H0
        std::vector<ChainFactor> inert(3);
        for (auto& f : inert) {
            f.conjugator = random_symplectic(d, 0.2, rng);
            f.plane = 1;
            f.alpha = 0.0;
        }
        const auto h0like = make_chained_hamiltonian(inert, d, n);
        for (int t = 0; t < 20; ++t) {
            const Vec p = random_ball(dim, 1.0, rng);
            CHECK(h0like.value(p) == p[d + 1]);
        }

        // single identity-conjugated factor equals H0 + Htilde
        std::vector<ChainFactor> single(1);
        single[0].conjugator = Mat::Identity(2 * d, 2 * d);
        single[0].plane = 1;
        single[0].alpha = 0.3;
        const auto hc = make_chained_hamiltonian(single, d, n);
        const auto ht = make_transit_hamiltonian(0.3, 1, d, n);
        for (int t = 0; t < 30; ++t) {
            const Vec p = random_ball(dim, 0.8, rng);
            CHECK(hc.value(p) == doctest::Approx(p[d + 1] + ht.value(p)).epsilon(1e-14));
        }

        // pure H0 beyond the tube in x_1
        Vec far = random_ball(dim, 0.5, rng);
        far[0] = 2.0;
        CHECK(hc.value(far) == far[d + 1]);

        CHECK_THROWS_AS(make_chained_hamiltonian({}, d, n), domain_error);
        std::vector<ChainFactor> bad(1);
        bad[0].conjugator = 2.0 * Mat::Identity(2 * d, 2 * d);
        bad[0].plane = 1;
        bad[0].alpha = 0.1;
        CHECK_THROWS_AS(make_chained_hamiltonian(bad, d, n), domain_error);
    }

    TEST_CASE("support rescale and dilation")
    {
        const auto h0 = make_H0(2, 1);
        const auto same = rescale_support(h0, 0.5);
        Rng rng(21);
        for (int t = 0; t < 20; ++t) {
            const Vec p = random_ball(5, 2.0, rng);
            CHECK(same.value(p) == doctest::Approx(p[2]).epsilon(1e-15)); // degree-1 homogeneous
        }

        const auto k = make_rotation_hamiltonian(1.0, 1, 2, 1);
        const auto small = rescale_support(k, 0.1);
        for (int t = 0; t < 60; ++t) {
            Vec p = random_ball(5, 1.0, rng);
            p *= (0.1 * std::sqrt(2.0) + 0.001 + 0.01 * t) / p.norm();
            CHECK(small.value(p) == 0.0);
        }
        const Vec inside = 0.05 * Vec::Ones(5) / std::sqrt(5.0);
        CHECK(small.value(inside) != 0.0);

        const auto dil = dilate_support(k, 0.5);
        for (int t = 0; t < 20; ++t) {
            const Vec p = random_ball(5, 0.4, rng);
            CHECK(dil.value(p) == doctest::Approx(0.25 * k.value(Vec(p / 0.5))).epsilon(1e-14));
        }

        CHECK_THROWS_AS(rescale_support(k, 0.0), domain_error);
        CHECK_THROWS_AS(dilate_support(k, -1.0), domain_error);
        CHECK(rescale_support(k, 1.0).value(inside) == doctest::Approx(k.value(inside)));
    }

    TEST_CASE("analytic gradients match central differences everywhere")
    {
        Rng rng(33);
        std::vector<HamiltonianField> fields;
        fields.push_back(make_rotation_hamiltonian(0.7, 1, 2, 1));
        fields.push_back(make_transit_hamiltonian(0.5, 2, 2, 1));
        fields.push_back(rescale_support(make_transit_hamiltonian(0.5, 1, 2, 0), 0.4));
        {
            std::vector<MonomialTerm> terms;
            terms.push_back({1.0, {{2, 1}}});
            terms.push_back({0.05, {{1, 2}, {3, 1}}});
            fields.push_back(make_polynomial_hamiltonian(std::move(terms), 2, 0));
        }
        for (const auto& f : fields) {
            for (int t = 0; t < 60; ++t) {
                const Vec p = random_ball(f.dim(), 1.2, rng);
                const Vec g = f.gradient(p);
                for (int j = 0; j < f.dim(); ++j)
                    CHECK(std::abs(fd_partial(f, p, j, 1e-5) - g[j]) <= 1e-6);
            }
        }
    }
}
