#pragma once

#include <Eigen/Dense>
#include <random>
#include <stdexcept>
#include <string>

namespace sympert {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Rng = std::mt19937_64;

/// Matrix norm used throughout: the l1-induced norm, max over columns of
/// the column absolute sum. norm(I) = 1.
inline double matrix_norm(const Mat& m)
{
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().colwise().sum().maxCoeff();
}

inline double vector_norm1(const Vec& v)
{
    return v.lpNorm<1>();
}

/// Distance to the identity in the project norm.
inline double dist_to_identity(const Mat& m)
{
    return matrix_norm(m - Mat::Identity(m.rows(), m.cols()));
}

struct dimension_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct domain_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline void require_square(const Mat& m, const std::string& what)
{
    if (m.rows() != m.cols())
        throw dimension_error(what + ": expected a square matrix, got " +
                              std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

inline void require_size(const Mat& m, Eigen::Index rows, Eigen::Index cols,
                         const std::string& what)
{
    if (m.rows() != rows || m.cols() != cols)
        throw dimension_error(what + ": expected " + std::to_string(rows) + "x" +
                              std::to_string(cols) + ", got " + std::to_string(m.rows()) +
                              "x" + std::to_string(m.cols()));
}

} // namespace sympert
