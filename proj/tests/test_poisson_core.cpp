#include "sympert/poisson_space.hpp"

#include <doctest.h>

using namespace sympert;

TEST_SUITE("poisson-core")
{
    TEST_CASE("matrix norm is the max column absolute sum")
    {
        CHECK(matrix_norm(Mat::Identity(4, 4)) == 1.0);
        Mat m(2, 2);
        m << 1, -3, 2, 0.5;
        CHECK(matrix_norm(m) == doctest::Approx(3.5).epsilon(1e-15));
        CHECK(matrix_norm(Mat::Zero(3, 3)) == 0.0);
    }

    TEST_CASE("structure matrix block form")
    {
        PoissonSpace space(2, 3);
        CHECK(space.total_dim() == 7);
        const Mat jh = space.structure_matrix();
        CHECK(matrix_norm(jh.transpose() + jh) == 0.0);
        // Jhat^2 restricted to the symplectic block is -I
        const Mat sq = (jh * jh).topLeftCorner(4, 4);
        CHECK(matrix_norm(sq + Mat::Identity(4, 4)) == 0.0);
        CHECK(matrix_norm(jh.bottomRightCorner(3, 3)) == 0.0);

        CHECK_THROWS_AS(PoissonSpace(0, 1), domain_error);
        CHECK_THROWS_AS(PoissonSpace(1, -1), domain_error);
    }

    TEST_CASE("is_symplectic on the spec examples")
    {
        CHECK(is_symplectic(Mat::Identity(4, 4), 2, 1e-12));
        Mat a(2, 2);
        a << 2.0, 0.0, 0.0, 0.5;
        CHECK(is_symplectic(a, 1, 1e-12));
        Mat b(2, 2);
        b << 2.0, 0.0, 0.0, 2.0;
        CHECK_FALSE(is_symplectic(b, 1, 1e-12));
        CHECK_THROWS_AS(is_symplectic(Mat::Identity(3, 3), 1, 1e-12), dimension_error);
    }

    TEST_CASE("lift_A_pi block placement")
    {
        const SymplecticMatrix id(Mat::Identity(4, 4), 2);
        CHECK(matrix_norm(lift_A_pi(id, 3).entries() - Mat::Identity(7, 7)) == 0.0);

        const SymplecticMatrix j(PoissonSpace::J_matrix(1), 1);
        Mat want(3, 3);
        want << 0, -1, 0, 1, 0, 0, 0, 0, 1;
        CHECK(matrix_norm(lift_A_pi(j, 1).entries() - want) == 0.0);
    }

    TEST_CASE("lift_A_pi preserves the structure and the product")
    {
        Rng rng(7);
        for (int t = 0; t < 25; ++t) {
            const Mat a = random_symplectic(2, 0.3, rng);
            const Mat b = random_symplectic(2, 0.3, rng);
            const PoissonSpace space(2, 2);
            const auto la = lift_A_pi(SymplecticMatrix(a, 2), 2);
            const auto lb = lift_A_pi(SymplecticMatrix(b, 2), 2);
            CHECK(poisson_linear_defect(la.entries(), space) <= 1e-12);
            const auto lab = lift_A_pi(SymplecticMatrix(Mat(a * b), 2, 1e-8), 2);
            CHECK(matrix_norm(la.entries() * lb.entries() - lab.entries()) <= 1e-12);
        }
    }

    TEST_CASE("embed_pi_k placement and homomorphism")
    {
        CHECK(matrix_norm(embed_pi_k(Mat::Identity(2, 2), 1, 2, 0) - Mat::Identity(4, 4)) == 0.0);

        Mat want(3, 3);
        want << 0, -1, 0, 1, 0, 0, 0, 0, 1;
        CHECK(matrix_norm(embed_pi_k(rotation2(M_PI / 2), 1, 1, 1) - want) <= 1e-15);

        Rng rng(11);
        for (int t = 0; t < 50; ++t) {
            const Mat m1 = random_symplectic(1, 0.4, rng);
            const Mat m2 = random_symplectic(1, 0.4, rng);
            for (int k = 1; k <= 2; ++k) {
                const Mat lhs = embed_pi_k(Mat(m1 * m2), k, 2, 1);
                const Mat rhs = embed_pi_k(m1, k, 2, 1) * embed_pi_k(m2, k, 2, 1);
                CHECK(matrix_norm(lhs - rhs) <= 1e-12);
                CHECK(matrix_norm(embed_pi_k(m1, k, 2, 1)) <=
                      std::max(1.0, matrix_norm(m1)) + 1e-15);
            }
        }

        CHECK_THROWS_AS(embed_pi_k(Mat::Identity(2, 2), 3, 2, 0), domain_error);
        CHECK_THROWS_AS(embed_pi_k(Mat::Identity(2, 2), 0, 2, 0), domain_error);
        Mat bad(2, 2);
        bad << 2, 0, 0, 1;
        CHECK_THROWS_AS(embed_pi_k(bad, 1, 2, 0), domain_error);
    }

    TEST_CASE("embed_Phi placement, homomorphism and norm")
    {
        const int d = 2, n = 1;
        CHECK(matrix_norm(embed_Phi(Mat::Identity(2 * d, 2 * d), d, 0) - Mat::Identity(6, 6)) == 0.0);

        Rng rng(13);
        const PoissonSpace enlarged(d + 1, n);
        for (int t = 0; t < 50; ++t) {
            const Mat m1 = random_symplectic(d, 0.4, rng);
            const Mat m2 = random_symplectic(d, 0.4, rng);
            const Mat p1 = embed_Phi(m1, d, n);
            CHECK(poisson_linear_defect(p1, enlarged) <= 1e-12);
            CHECK(matrix_norm(embed_Phi(Mat(m1 * m2), d, n) - p1 * embed_Phi(m2, d, n)) <= 1e-12);
            // identity rows saturate the norm at 1
            CHECK(matrix_norm(p1) == doctest::Approx(std::max(1.0, matrix_norm(m1))).epsilon(1e-14));
        }

        // the transit pair and z stay untouched
        const Mat p = embed_Phi(random_symplectic(d, 0.3, rng), d, n);
        Vec e = Vec::Zero(2 * (d + 1) + n);
        e[0] = 1.0;
        CHECK((p * e - e).norm() == 0.0);
        e.setZero();
        e[d + 1] = 1.0; // y_1 slot
        CHECK((p * e - e).norm() == 0.0);
        e.setZero();
        e[2 * (d + 1)] = 1.0; // z slot
        CHECK((p * e - e).norm() == 0.0);
    }

    TEST_CASE("PoissonLinearMap accepts coupling blocks and rejects violations")
    {
        const int d = 1, n = 2;
        Rng rng(5);
        Mat b = Mat::Identity(4, 4);
        b.topLeftCorner(2, 2) = random_symplectic(d, 0.2, rng);
        b(0, 2) = 0.7; // coupling block a
        b(1, 3) = -0.4;
        b(2, 2) = 1.5; // transverse block
        b(3, 3) = 0.8;
        CHECK_NOTHROW(PoissonLinearMap(b, PoissonSpace(d, n)));

        Mat bad = b;
        bad(2, 0) = 0.1; // lower-left must vanish
        CHECK_THROWS_AS(PoissonLinearMap(bad, PoissonSpace(d, n)), domain_error);

        Mat sing = b;
        sing(2, 2) = 0.0;
        sing(2, 3) = 0.0;
        CHECK_THROWS_AS(PoissonLinearMap(sing, PoissonSpace(d, n)), domain_error);
    }

    TEST_CASE("random symplectic generation lands on the group at the requested distance")
    {
        Rng rng(42);
        for (const double delta : {1e-1, 1e-2, 1e-3, 1e-4}) {
            for (int d = 1; d <= 3; ++d) {
                for (int t = 0; t < 85; ++t) {
                    const Mat a = random_symplectic(d, delta, rng);
                    CHECK(symplectic_defect(a, d) <= 1e-10);
                    CHECK(dist_to_identity(a) == doctest::Approx(delta).epsilon(1e-6));
                }
            }
        }
    }
}
