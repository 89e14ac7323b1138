#include "sympert/factorization.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace sympert {

Mat RotationFactor::realized(int d) const
{
    const Mat rot = embed_pi_k(rotation2(angle), plane, d, 0);
    if (conjugator.size() == 0) return rot;
    return conjugator * rot * conjugator.inverse();
}

Mat Factorization::product(int d) const
{
    Mat acc = Mat::Identity(2 * d, 2 * d);
    for (const auto& f : factors) acc *= f.realized(d);
    return acc;
}

PlanarFactor planar_factor(double eta)
{
    if (eta <= 0.0) throw domain_error("planar_factor: eta must be positive");
    const double dev = std::abs(eta - 1.0);
    if (dev >= 1.0) throw domain_error("planar_factor: |eta - 1| must be < 1");

    PlanarFactor out;
    out.p = Mat::Identity(2, 2);
    if (dev == 0.0) return out; // inert

    // 1 - cos theta = |eta - 1|, with the strict lower bound
    // (eta-1)^2/(eta^2+1) < 1 - cos theta checked; fall back to the midpoint
    // of the admissible interval if it ever binds.
    double one_minus_cos = dev;
    const double lower = dev * dev / (eta * eta + 1.0);
    if (!(lower < one_minus_cos)) one_minus_cos = 0.5 * (lower + dev);
    const double cos_theta = 1.0 - one_minus_cos;
    out.theta = std::acos(std::clamp(cos_theta, -1.0, 1.0));

    const double cos_xi = 0.5 * (eta + 1.0 / eta) * cos_theta;
    if (std::abs(cos_xi) >= 1.0)
        throw InfeasibleAngleError("planar_factor: |cos xi| >= 1 (unreachable by construction)");
    const double xi_mag = std::acos(cos_xi);
    const double sin_xi = std::sin(xi_mag);
    const double sin_theta = std::sin(out.theta);

    // R_{-theta} diag(eta, 1/eta) = P R_{-xi_mag} P^{-1}; the rotation sense
    // is fixed by the sign of M21 - M12 = -(eta + 1/eta) sin theta < 0.
    out.xi = -xi_mag;
    const double norm = std::sqrt(sin_theta * sin_xi / eta);
    out.p = Mat(2, 2);
    out.p << sin_theta / eta / norm, 0.0, (cos_xi - eta * cos_theta) / norm, sin_xi / norm;
    return out;
}

namespace {

double min_pairwise_gap(const Vec& values)
{
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < values.size(); ++i)
        for (Eigen::Index j = i + 1; j < values.size(); ++j)
            gap = std::min(gap, std::abs(values[i] - values[j]));
    return gap;
}

struct EigenPick {
    double lambda;
    Vec vector;
    double overlap;
    double imag_norm;
};

// Eigenpair of a whose eigenvector has the largest overlap with e_axis.
EigenPick pick_by_axis(const Eigen::EigenSolver<Mat>& solver, int axis)
{
    const auto& vals = solver.eigenvalues();
    const auto& vecs = solver.eigenvectors();
    EigenPick best{0.0, Vec(), -1.0, 0.0};
    for (Eigen::Index c = 0; c < vals.size(); ++c) {
        Eigen::VectorXcd v = vecs.col(c);
        const double overlap = std::abs(v[axis]) / v.norm();
        if (overlap > best.overlap) {
            // rotate the complex phase to make component `axis` real-positive
            std::complex<double> phase = v[axis] / std::abs(v[axis]);
            v /= phase;
            best.lambda = vals[c].real();
            best.imag_norm = std::max(std::abs(vals[c].imag()), v.imag().norm());
            best.vector = v.real() / v.real().norm();
            best.overlap = overlap;
        }
    }
    return best;
}

} // namespace

std::pair<double, Vec> perturbed_eigenpair(const Mat& a, const Vec& l_diag, int i)
{
    require_square(a, "perturbed_eigenpair");
    if (a.rows() != l_diag.size())
        throw dimension_error("perturbed_eigenpair: matrix and diagonal size mismatch");
    if (i < 1 || i > l_diag.size()) throw domain_error("perturbed_eigenpair: index out of range");

    Eigen::EigenSolver<Mat> solver(a);
    const EigenPick pick = pick_by_axis(solver, i - 1);
    const double scale = std::max(1.0, matrix_norm(a));
    if (pick.imag_norm > 1e-9 * scale)
        throw ComplexSpectrumError("perturbed_eigenpair: matched eigenvalue is complex (|Im| = " +
                                   std::to_string(pick.imag_norm) + ")");

    const double gap = min_pairwise_gap(l_diag);
    const Mat l = l_diag.asDiagonal();
    if (matrix_norm(a - l) >= gap / 4.0)
        throw GapTooSmallError("perturbed_eigenpair: |A - L| >= gap/4 (gap = " +
                               std::to_string(gap) + ")");

    Vec v = pick.vector;
    if (v[i - 1] < 0.0) v = -v;
    return {pick.lambda, v};
}

SymplecticDiagonalization symplectic_diagonalize(const Mat& a, const Vec& l_diag, bool enforce_guard)
{
    require_square(a, "symplectic_diagonalize");
    const int d = static_cast<int>(l_diag.size());
    require_size(a, 2 * d, 2 * d, "symplectic_diagonalize");

    // full diagonal (lambda, 1/lambda) and its gap
    Vec full(2 * d);
    for (int i = 0; i < d; ++i) {
        full[i] = l_diag[i];
        full[d + i] = 1.0 / l_diag[i];
    }
    const double gap = min_pairwise_gap(full);
    const double dist = matrix_norm(a - Mat(full.asDiagonal()));
    const bool guard_ok = dist < gap / 4.0;
    if (enforce_guard && !guard_ok)
        throw GapTooSmallError("symplectic_diagonalize: |A - L| = " + std::to_string(dist) +
                               " >= gap/4 = " + std::to_string(gap / 4.0));

    Eigen::EigenSolver<Mat> solver(a);
    const double scale = std::max(1.0, matrix_norm(a));

    const Mat jt = PoissonSpace::J_matrix(d).transpose();
    auto omega0 = [&jt](const Vec& u, const Vec& v) { return u.dot(jt * v); };

    SymplecticDiagonalization out;
    out.guard_ok = guard_ok;
    out.eigenvalues = Vec(d);
    out.s = Mat(2 * d, 2 * d);
    for (int i = 0; i < d; ++i) {
        EigenPick pv = pick_by_axis(solver, i);
        EigenPick pw = pick_by_axis(solver, d + i);
        if (pv.imag_norm > 1e-9 * scale || pw.imag_norm > 1e-9 * scale)
            throw ComplexSpectrumError("symplectic_diagonalize: complex eigenvalue in plane " +
                                       std::to_string(i + 1));
        if (std::abs(pv.lambda * pw.lambda - 1.0) > 1e-6)
            throw GapTooSmallError("symplectic_diagonalize: eigenvector-axis matching failed in plane " +
                                   std::to_string(i + 1) + " (mu*nu = " +
                                   std::to_string(pv.lambda * pw.lambda) + ")");
        Vec v = pv.vector;
        Vec w = pw.vector;
        if (v[i] < 0.0) v = -v;
        if (w[d + i] < 0.0) w = -w;
        const double pairing = omega0(v, w);
        if (std::abs(pairing) < 1e-6)
            throw NondegeneracyError("symplectic_diagonalize: omega0(v, w) = " +
                                     std::to_string(pairing) + " in plane " + std::to_string(i + 1));
        v /= pairing; // forces omega0(v, w) = 1
        out.eigenvalues[i] = pv.lambda;
        out.s.col(i) = v;
        out.s.col(d + i) = w;
    }
    return out;
}

namespace {

void append_plane_factors(std::vector<RotationFactor>& factors, double eta, int plane, int d,
                          const Mat* conj)
{
    const PlanarFactor pf = planar_factor(eta);
    const Mat id = Mat::Identity(2 * d, 2 * d);
    if (pf.theta != 0.0) {
        RotationFactor pre;
        pre.plane = plane;
        pre.angle = pf.theta;
        pre.conjugator = conj ? *conj : id;
        pre.pre_rotation = true;
        factors.push_back(std::move(pre));
    }
    if (pf.xi != 0.0) {
        RotationFactor main;
        main.plane = plane;
        main.angle = pf.xi;
        const Mat p_full = embed_pi_k(pf.p, plane, d, 0);
        main.conjugator = conj ? Mat(*conj * p_full) : p_full;
        main.pre_rotation = false;
        factors.push_back(std::move(main));
    }
}

} // namespace

Factorization decompose_near_identity(const Mat& a, const DecomposeOptions& opts)
{
    require_square(a, "decompose_near_identity");
    if (a.rows() % 2 != 0) throw dimension_error("decompose_near_identity: odd dimension");
    const int d = static_cast<int>(a.rows()) / 2;
    if (!is_symplectic(a, d, 1e-8))
        throw domain_error("decompose_near_identity: input is not symplectic");

    const double delta = dist_to_identity(a);
    if (delta >= opts.epsilon0)
        throw OutOfRegimeError("decompose_near_identity: |A - I| = " + std::to_string(delta) +
                               " >= epsilon0 = " + std::to_string(opts.epsilon0));

    Factorization out;
    out.target = a;
    out.diagnostics.delta = delta;
    if (delta == 0.0) return out; // identity: empty factor list, residual 0

    Rng jitter_rng(opts.retry_seed.value_or(0x5eed5eedULL));
    std::uniform_real_distribution<double> jitter(0.05, 0.45);

    std::string last_error = "no attempt made";
    for (int attempt = 0; attempt <= opts.max_retries; ++attempt) {
        // Eigenvalue ladder lambda_i = 1 + kappa delta (i + u_i): margin
        // kappa >= 2 keeps L1^{-1} A real-diagonalizable for elliptic A,
        // escalating with the attempt; u_i randomizes the gap pattern. The
        // cap keeps every eta within the planar-factor domain |eta - 1| < 1.
        const double kappa = std::min(2.0 * std::pow(1.5, attempt),
                                      0.8 / (delta * (static_cast<double>(d) + 0.45)));
        Vec lambdas(d);
        for (int i = 0; i < d; ++i) {
            const double u = attempt == 0 ? 0.0 : jitter(jitter_rng);
            lambdas[i] = 1.0 + kappa * delta * (static_cast<double>(i + 1) + u);
        }

        try {
            Mat l1_inv_diag = Mat::Zero(2 * d, 2 * d);
            Vec l1_inv_entries(d);
            for (int i = 0; i < d; ++i) {
                l1_inv_diag(i, i) = 1.0 / lambdas[i];
                l1_inv_diag(d + i, d + i) = lambdas[i];
                l1_inv_entries[i] = 1.0 / lambdas[i];
            }
            const Mat b = l1_inv_diag * a;

            auto diag = symplectic_diagonalize(b, l1_inv_entries, /*enforce_guard=*/false);

            std::vector<RotationFactor> factors;
            for (int i = 0; i < d; ++i) append_plane_factors(factors, lambdas[i], i + 1, d, nullptr);
            for (int i = 0; i < d; ++i)
                append_plane_factors(factors, diag.eigenvalues[i], i + 1, d, &diag.s);

            Mat prod = Mat::Identity(2 * d, 2 * d);
            double max_r_dev = 0.0, max_p_norm = 1.0, max_sympl_defect = 0.0;
            for (const auto& f : factors) {
                const Mat realized = f.realized(d);
                prod *= realized;
                max_sympl_defect = std::max(max_sympl_defect, symplectic_defect(realized, d));
                max_r_dev = std::max(max_r_dev, dist_to_identity(rotation2(f.angle)));
                max_p_norm = std::max({max_p_norm, matrix_norm(f.conjugator),
                                       matrix_norm(Mat(f.conjugator.inverse()))});
            }
            const double residual = matrix_norm(prod - a) / std::max(1.0, matrix_norm(a));
            if (residual > opts.residual_tol)
                throw FactorizationError("reconstruction residual " + std::to_string(residual));
            if (max_sympl_defect > 1e-11)
                throw FactorizationError("factor symplectic defect " + std::to_string(max_sympl_defect));

            out.factors = std::move(factors);
            out.residual = residual;
            out.diagnostics.min_gap = min_pairwise_gap(l1_inv_entries);
            out.diagnostics.c_fit = max_r_dev / std::sqrt(delta);
            out.diagnostics.c_P = max_p_norm;
            out.diagnostics.retries = attempt;
            out.diagnostics.guard_binding = !diag.guard_ok;
            return out;
        } catch (const ComplexSpectrumError& e) {
            last_error = e.what();
        } catch (const GapTooSmallError& e) {
            last_error = e.what();
        } catch (const NondegeneracyError& e) {
            last_error = e.what();
        } catch (const FactorizationError& e) {
            last_error = e.what();
        } catch (const domain_error& e) {
            last_error = e.what();
        }
    }
    throw FactorizationError("decompose_near_identity: retries exhausted; last error: " + last_error);
}

} // namespace sympert
