#include "sympert/poisson_space.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace sympert {

Mat random_symplectic(int d, double delta, Rng& rng)
{
    if (d < 1) throw domain_error("random_symplectic: d must be >= 1");
    if (delta < 0) throw domain_error("random_symplectic: delta must be >= 0");
    if (delta == 0.0) return Mat::Identity(2 * d, 2 * d);

    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Mat s(2 * d, 2 * d);
    for (int i = 0; i < 2 * d; ++i)
        for (int j = 0; j <= i; ++j) {
            const double v = unit(rng);
            s(i, j) = v;
            s(j, i) = v;
        }
    const Mat gen = PoissonSpace::J_matrix(d) * s;

    // Secant iteration on the scale so that |exp(t gen) - I| = delta.
    auto dist = [&](double t) { return dist_to_identity(Mat((t * gen).exp())); };
    double t0 = delta / std::max(matrix_norm(gen), 1e-300);
    double f0 = dist(t0) - delta;
    double t1 = t0 * (delta / (f0 + delta));
    for (int it = 0; it < 60 && std::abs(f0) > 1e-13 * delta; ++it) {
        const double f1 = dist(t1) - delta;
        if (f1 == f0) break;
        const double t2 = t1 - f1 * (t1 - t0) / (f1 - f0);
        t0 = t1;
        f0 = f1;
        t1 = t2;
    }
    return (t0 * gen).exp();
}

} // namespace sympert
