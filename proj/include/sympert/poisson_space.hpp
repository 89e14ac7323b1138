#pragma once

#include "sympert/linalg.hpp"

namespace sympert {

// Coordinates on R^{2d+n} are ordered (x_1..x_d, y_1..y_d, z_1..z_n).
// Indices are 0-based internally; user-facing messages and file formats
// use the 1-based convention of the plane index k in 1..d.

/// Ambient space: rank parameter d, transverse dimension n.
struct PoissonSpace {
    int d = 1;
    int n = 0;

    PoissonSpace(int d_, int n_) : d(d_), n(n_)
    {
        if (d < 1) throw domain_error("PoissonSpace: d must be >= 1");
        if (n < 0) throw domain_error("PoissonSpace: n must be >= 0");
    }

    int total_dim() const { return 2 * d + n; }

    /// J = [[0,-I],[I,0]] on the symplectic block, d x d sub-blocks.
    static Mat J_matrix(int d)
    {
        Mat j = Mat::Zero(2 * d, 2 * d);
        j.block(0, d, d, d) = -Mat::Identity(d, d);
        j.block(d, 0, d, d) = Mat::Identity(d, d);
        return j;
    }

    /// Structure matrix Jhat = diag(J, 0_n) of size (2d+n)^2.
    Mat structure_matrix() const
    {
        Mat jh = Mat::Zero(total_dim(), total_dim());
        jh.topLeftCorner(2 * d, 2 * d) = J_matrix(d);
        return jh;
    }
};

inline double symplectic_defect(const Mat& a, int d)
{
    require_size(a, 2 * d, 2 * d, "symplectic_defect");
    const Mat j = PoissonSpace::J_matrix(d);
    return matrix_norm(a.transpose() * j * a - j);
}

inline bool is_symplectic(const Mat& a, int d, double tol = 1e-10)
{
    return symplectic_defect(a, d) <= tol;
}

/// Defect of B Jhat B^T = Jhat on the full space (the pushforward condition
/// for the bivector; equivalent to A^T J A = J on the symplectic block but,
/// unlike that form, indifferent to the coupling block a).
inline double poisson_linear_defect(const Mat& b, const PoissonSpace& space)
{
    require_size(b, space.total_dim(), space.total_dim(), "poisson_linear_defect");
    const Mat jh = space.structure_matrix();
    return matrix_norm(b * jh * b.transpose() - jh);
}

/// A verified element of Sp(2d,R).
class SymplecticMatrix {
public:
    SymplecticMatrix(Mat entries, int d, double tol = 1e-10)
        : entries_(std::move(entries)), d_(d)
    {
        const double defect = symplectic_defect(entries_, d_);
        if (defect > tol)
            throw domain_error("SymplecticMatrix: |A^T J A - J| = " + std::to_string(defect) +
                               " exceeds tol " + std::to_string(tol));
    }

    const Mat& entries() const { return entries_; }
    int d() const { return d_; }
    int size() const { return 2 * d_; }

private:
    Mat entries_;
    int d_;
};

/// A verified element of Pn(2d+n,R): Jhat-preserving, block form (A a; 0 b)
/// with A symplectic and b invertible.
class PoissonLinearMap {
public:
    PoissonLinearMap(Mat entries, PoissonSpace space, double tol = 1e-10)
        : entries_(std::move(entries)), space_(space)
    {
        const int d = space_.d, n = space_.n;
        require_size(entries_, space_.total_dim(), space_.total_dim(), "PoissonLinearMap");
        const double defect = poisson_linear_defect(entries_, space_);
        if (defect > tol)
            throw domain_error("PoissonLinearMap: structure defect " + std::to_string(defect) +
                               " exceeds tol " + std::to_string(tol));
        if (n > 0) {
            const double lower_left = entries_.block(2 * d, 0, n, 2 * d).cwiseAbs().maxCoeff();
            if (lower_left > tol)
                throw domain_error("PoissonLinearMap: lower-left block is not zero");
            if (std::abs(entries_.block(2 * d, 2 * d, n, n).determinant()) < 1e-12)
                throw domain_error("PoissonLinearMap: transverse block is singular");
        }
        if (!is_symplectic(entries_.topLeftCorner(2 * d, 2 * d), d, std::max(tol, 1e-10) * 10))
            throw domain_error("PoissonLinearMap: upper-left block is not symplectic");
    }

    const Mat& entries() const { return entries_; }
    const PoissonSpace& space() const { return space_; }

private:
    Mat entries_;
    PoissonSpace space_;
};

/// A_pi = diag(A, I_n), the lift of a symplectic matrix into Pn(2d+n,R).
inline PoissonLinearMap lift_A_pi(const SymplecticMatrix& a, int n)
{
    const int d = a.d();
    PoissonSpace space(d, n);
    Mat b = Mat::Identity(space.total_dim(), space.total_dim());
    b.topLeftCorner(2 * d, 2 * d) = a.entries();
    return PoissonLinearMap(std::move(b), space);
}

/// Plain-matrix version of the A_pi lift (no construction checks).
inline Mat lift_to_dim(const Mat& a, int total_dim)
{
    Mat b = Mat::Identity(total_dim, total_dim);
    b.topLeftCorner(a.rows(), a.cols()) = a;
    return b;
}

/// pi_k: SL(2,R) -> Pn(2d+n,R). Places M on the conjugate pair (x_k, y_k),
/// identity elsewhere. k is 1-based.
inline Mat embed_pi_k(const Mat& m, int k, int d, int n, double det_tol = 1e-9)
{
    require_size(m, 2, 2, "embed_pi_k");
    if (k < 1 || k > d)
        throw domain_error("embed_pi_k: plane index k = " + std::to_string(k) +
                           " out of range 1.." + std::to_string(d));
    if (std::abs(m.determinant() - 1.0) > det_tol)
        throw domain_error("embed_pi_k: det M = " + std::to_string(m.determinant()) +
                           " is not 1");
    const int dim = 2 * d + n;
    Mat out = Mat::Identity(dim, dim);
    const int i = k - 1;          // x_k slot
    const int j = d + k - 1;      // y_k slot
    out(i, i) = m(0, 0);
    out(i, j) = m(0, 1);
    out(j, i) = m(1, 0);
    out(j, j) = m(1, 1);
    return out;
}

/// Phi: Sp(2d,R) -> Pn(2d+2+n,R). The enlarged space has coordinates
/// (x_1,..,x_{d+1}, y_1,..,y_{d+1}, z); Phi is the identity on the transit
/// pair (x_1, y_1) and on z, and places M on the hat-block
/// (x_2..x_{d+1}, y_2..y_{d+1}).
inline Mat embed_Phi(const Mat& m, int d, int n)
{
    require_size(m, 2 * d, 2 * d, "embed_Phi");
    const int dim = 2 * (d + 1) + n;
    Mat out = Mat::Identity(dim, dim);
    // hat-block index map: rows/cols 1..d and d+2..2d+1 (0-based)
    auto slot = [d](int i) { return i < d ? 1 + i : d + 2 + (i - d); };
    for (int i = 0; i < 2 * d; ++i)
        for (int j = 0; j < 2 * d; ++j) out(slot(i), slot(j)) = m(i, j);
    return out;
}

/// Planar rotation by alpha (counterclockwise).
inline Mat rotation2(double alpha)
{
    Mat r(2, 2);
    const double c = std::cos(alpha), s = std::sin(alpha);
    r << c, -s, s, c;
    return r;
}

/// Random symplectic matrix at prescribed distance from the identity,
/// A = exp(s J S) for random symmetric S with s tuned so |A - I| = delta.
Mat random_symplectic(int d, double delta, Rng& rng);

} // namespace sympert
