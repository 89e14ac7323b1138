#include "sympert/hamiltonian.hpp"

#include "sympert/poisson_space.hpp"

namespace sympert {

double rho_of(const Vec& p)
{
    return 0.5 * p.squaredNorm();
}

double rho_i_of(const Vec& p, int i, int pairs)
{
    const double x = p[i - 1];
    const double y = p[pairs + i - 1];
    return 0.5 * (x * x + y * y);
}

class FieldImpl {
public:
    FieldImpl(FieldKind kind, int pairs, int n) : kind_(kind), pairs_(pairs), n_(n) {}
    virtual ~FieldImpl() = default;

    virtual double value(const Vec& p) const = 0;
    virtual Vec gradient(const Vec& p) const = 0;

    FieldKind kind() const { return kind_; }
    int pairs() const { return pairs_; }
    int n() const { return n_; }
    int dim() const { return 2 * pairs_ + n_; }

    virtual double alpha() const { return 0.0; }
    virtual int plane() const { return 0; }
    virtual double scale() const { return 1.0; }
    virtual const std::vector<ChainFactor>& chain_factors() const
    {
        static const std::vector<ChainFactor> none;
        return none;
    }
    virtual const HamiltonianField* inner() const { return nullptr; }

protected:
    void check_dim(const Vec& p) const
    {
        if (p.size() != dim())
            throw dimension_error("HamiltonianField: point has dim " + std::to_string(p.size()) +
                                  ", field lives on dim " + std::to_string(dim()));
    }

private:
    FieldKind kind_;
    int pairs_;
    int n_;
};

HamiltonianField::HamiltonianField(std::shared_ptr<const FieldImpl> impl) : impl_(std::move(impl)) {}
double HamiltonianField::value(const Vec& p) const { return impl_->value(p); }
Vec HamiltonianField::gradient(const Vec& p) const { return impl_->gradient(p); }
int HamiltonianField::pairs() const { return impl_->pairs(); }
int HamiltonianField::n() const { return impl_->n(); }
int HamiltonianField::dim() const { return impl_->dim(); }
FieldKind HamiltonianField::kind() const { return impl_->kind(); }
double HamiltonianField::alpha() const { return impl_->alpha(); }
int HamiltonianField::plane() const { return impl_->plane(); }
double HamiltonianField::scale() const { return impl_->scale(); }
const std::vector<ChainFactor>& HamiltonianField::chain_factors() const { return impl_->chain_factors(); }
const HamiltonianField* HamiltonianField::inner() const { return impl_->inner(); }

namespace {

class LinearField final : public FieldImpl {
public:
    LinearField(Vec coeffs, int pairs, int n)
        : FieldImpl(FieldKind::linear, pairs, n), coeffs_(std::move(coeffs))
    {
        if (coeffs_.size() != dim()) throw dimension_error("make_linear_hamiltonian: coefficient size");
    }

    double value(const Vec& p) const override
    {
        check_dim(p);
        return coeffs_.dot(p);
    }

    Vec gradient(const Vec& p) const override
    {
        check_dim(p);
        return coeffs_;
    }

private:
    Vec coeffs_;
};

class PolynomialField final : public FieldImpl {
public:
    PolynomialField(std::vector<MonomialTerm> terms, int pairs, int n)
        : FieldImpl(FieldKind::polynomial, pairs, n), terms_(std::move(terms))
    {
        for (const auto& t : terms_)
            for (auto [idx, e] : t.powers)
                if (idx < 0 || idx >= dim() || e < 1)
                    throw domain_error("make_polynomial_hamiltonian: bad monomial");
    }

    double value(const Vec& p) const override
    {
        check_dim(p);
        double acc = 0.0;
        for (const auto& t : terms_) {
            double m = t.coeff;
            for (auto [idx, e] : t.powers) m *= std::pow(p[idx], e);
            acc += m;
        }
        return acc;
    }

    Vec gradient(const Vec& p) const override
    {
        check_dim(p);
        Vec g = Vec::Zero(dim());
        for (const auto& t : terms_) {
            for (size_t k = 0; k < t.powers.size(); ++k) {
                auto [idx, e] = t.powers[k];
                double m = t.coeff * e * std::pow(p[idx], e - 1);
                for (size_t j = 0; j < t.powers.size(); ++j) {
                    if (j == k) continue;
                    m *= std::pow(p[t.powers[j].first], t.powers[j].second);
                }
                g[idx] += m;
            }
        }
        return g;
    }

private:
    std::vector<MonomialTerm> terms_;
};

// K_i with nominal angle alpha: field value -alpha l(rho) rho_i.
class RotationField final : public FieldImpl {
public:
    RotationField(double alpha, int i, int d, int n)
        : FieldImpl(FieldKind::rotation, d, n), alpha_(alpha), i_(i)
    {
        if (i < 1 || i > d)
            throw domain_error("make_rotation_hamiltonian: plane " + std::to_string(i) +
                               " out of range 1.." + std::to_string(d));
    }

    double value(const Vec& p) const override
    {
        check_dim(p);
        const double rho = rho_of(p);
        if (rho >= 1.0) return 0.0;
        return -alpha_ * bump().value(rho) * rho_i_of(p, i_, pairs());
    }

    Vec gradient(const Vec& p) const override
    {
        check_dim(p);
        const double rho = rho_of(p);
        if (rho >= 1.0) return Vec::Zero(dim());
        const double l = bump().value(rho);
        const double l1 = bump().d1(rho);
        const double ri = rho_i_of(p, i_, pairs());
        Vec g = (-alpha_ * l1 * ri) * p;
        g[i_ - 1] += -alpha_ * l * p[i_ - 1];
        g[pairs() + i_ - 1] += -alpha_ * l * p[pairs() + i_ - 1];
        return g;
    }

    double alpha() const override { return alpha_; }
    int plane() const override { return i_; }

private:
    double alpha_;
    int i_;
};

// Hat-block helpers on the enlarged space (pairs = d+1).
// x_1 -> 0, y_1 -> d+1; hat pair i -> (i, d+1+i); z -> 2(d+1)+k.
struct HatView {
    int d, n;
    explicit HatView(int d_, int n_) : d(d_), n(n_) {}
    int xhat(int i) const { return i; }            // i in 1..d
    int yhat(int i) const { return d + 1 + i; }
    int y1() const { return d + 1; }
    int z(int k) const { return 2 * (d + 1) + k; } // k in 0..n-1

    Vec extract(const Vec& p) const
    {
        Vec h(2 * d + n);
        for (int i = 1; i <= d; ++i) {
            h[i - 1] = p[xhat(i)];
            h[d + i - 1] = p[yhat(i)];
        }
        for (int k = 0; k < n; ++k) h[2 * d + k] = p[z(k)];
        return h;
    }

    void scatter_add(Vec& g, const Vec& h, double w) const
    {
        for (int i = 1; i <= d; ++i) {
            g[xhat(i)] += w * h[i - 1];
            g[yhat(i)] += w * h[d + i - 1];
        }
        for (int k = 0; k < n; ++k) g[z(k)] += w * h[2 * d + k];
    }
};

// Inner K^ factor of the transit generator, coefficient -2 alpha.
double khat_value(const Vec& hat, double alpha, int i, int d)
{
    const double rho = rho_of(hat);
    if (rho >= 1.0) return 0.0;
    return -2.0 * alpha * bump().value(rho) * rho_i_of(hat, i, d);
}

Vec khat_gradient(const Vec& hat, double alpha, int i, int d)
{
    const double rho = rho_of(hat);
    if (rho >= 1.0) return Vec::Zero(hat.size());
    const double l = bump().value(rho);
    const double l1 = bump().d1(rho);
    const double ri = rho_i_of(hat, i, d);
    Vec g = (-2.0 * alpha * l1 * ri) * hat;
    g[i - 1] += -2.0 * alpha * l * hat[i - 1];
    g[d + i - 1] += -2.0 * alpha * l * hat[d + i - 1];
    return g;
}

class TransitField final : public FieldImpl {
public:
    TransitField(double alpha, int i, int d, int n)
        : FieldImpl(FieldKind::transit, d + 1, n), alpha_(alpha), i_(i), d_(d), view_(d, n)
    {
        if (i < 1 || i > d)
            throw domain_error("make_transit_hamiltonian: plane " + std::to_string(i) +
                               " out of range 1.." + std::to_string(d));
    }

    double value(const Vec& p) const override
    {
        check_dim(p);
        const double a = bump().value(2.0 * p[0] - 1.0);
        const double b = bump().value(p[view_.y1()]);
        if (a == 0.0 || b == 0.0) return 0.0;
        return a * b * khat_value(view_.extract(p), alpha_, i_, d_);
    }

    Vec gradient(const Vec& p) const override
    {
        check_dim(p);
        Vec g = Vec::Zero(dim());
        const double a = bump().value(2.0 * p[0] - 1.0);
        const double a1 = bump().d1(2.0 * p[0] - 1.0);
        const double b = bump().value(p[view_.y1()]);
        const double b1 = bump().d1(p[view_.y1()]);
        if (a == 0.0 && a1 == 0.0) return g;
        if (b == 0.0 && b1 == 0.0) return g;
        const Vec hat = view_.extract(p);
        const double k = khat_value(hat, alpha_, i_, d_);
        g[0] = 2.0 * a1 * b * k;
        g[view_.y1()] = a * b1 * k;
        const double ab = a * b;
        if (ab != 0.0) view_.scatter_add(g, khat_gradient(hat, alpha_, i_, d_), ab);
        return g;
    }

    double alpha() const override { return alpha_; }
    int plane() const override { return i_; }

private:
    double alpha_;
    int i_;
    int d_;
    HatView view_;
};

class ChainedField final : public FieldImpl {
public:
    ChainedField(std::vector<ChainFactor> factors, int d, int n)
        : FieldImpl(FieldKind::chained, d + 1, n), d_(d), factors_(std::move(factors))
    {
        if (factors_.empty()) throw domain_error("make_chained_hamiltonian: empty factor list");
        const int N = static_cast<int>(factors_.size());
        const int dm = dim();
        for (int k = 0; k < N; ++k) {
            const auto& f = factors_[k];
            require_size(f.conjugator, 2 * d, 2 * d, "make_chained_hamiltonian: conjugator");
            if (!is_symplectic(f.conjugator, d, 1e-8))
                throw domain_error("make_chained_hamiltonian: conjugator " + std::to_string(k + 1) +
                                   " is not symplectic");
            if (f.plane < 1 || f.plane > d)
                throw domain_error("make_chained_hamiltonian: plane out of range");
            // Affine composition Phi(P_k) o T_k; Phi fixes x_1, so the shift
            // stays -(k+1-1) e_1 after the linear part.
            Mat scale = Mat::Identity(dm, dm);
            scale(0, 0) = static_cast<double>(N);
            Mat m = embed_Phi(f.conjugator, d, n) * scale;
            maps_.push_back(std::move(m));
            shifts_.push_back(-static_cast<double>(k));
            terms_.emplace_back(f.alpha, f.plane, d, n);
        }
    }

    double value(const Vec& p) const override
    {
        check_dim(p);
        const double N = static_cast<double>(factors_.size());
        double acc = p[d_ + 1]; // H0 = y_1
        for (size_t k = 0; k < terms_.size(); ++k) {
            Vec q = maps_[k] * p;
            q[0] += shifts_[k];
            acc += N * terms_[k].value(q);
        }
        return acc;
    }

    Vec gradient(const Vec& p) const override
    {
        check_dim(p);
        const double N = static_cast<double>(factors_.size());
        Vec g = Vec::Zero(dim());
        g[d_ + 1] = 1.0;
        for (size_t k = 0; k < terms_.size(); ++k) {
            Vec q = maps_[k] * p;
            q[0] += shifts_[k];
            const Vec inner_g = terms_[k].gradient(q);
            if (inner_g.isZero(0.0)) continue;
            g.noalias() += N * (maps_[k].transpose() * inner_g);
        }
        return g;
    }

    const std::vector<ChainFactor>& chain_factors() const override { return factors_; }

private:
    int d_;
    std::vector<ChainFactor> factors_;
    std::vector<Mat> maps_;
    std::vector<double> shifts_;
    std::vector<TransitField> terms_;
};

class ScaledField final : public FieldImpl {
public:
    ScaledField(HamiltonianField inner, double rho, bool dilated)
        : FieldImpl(dilated ? FieldKind::dilated : FieldKind::rescaled, inner.pairs(), inner.n()),
          inner_(std::move(inner)), rho_(rho), dilated_(dilated)
    {
        if (rho <= 0.0) throw domain_error("rescale_support: rho must be positive");
    }

    double value(const Vec& p) const override
    {
        const double w = dilated_ ? rho_ * rho_ : rho_;
        return w * inner_.value(p / rho_);
    }

    Vec gradient(const Vec& p) const override
    {
        const double w = dilated_ ? rho_ : 1.0;
        return w * inner_.gradient(p / rho_);
    }

    double scale() const override { return rho_; }
    const HamiltonianField* inner() const override { return &inner_; }
    double alpha() const override { return inner_.alpha(); }
    int plane() const override { return inner_.plane(); }

private:
    HamiltonianField inner_;
    double rho_;
    bool dilated_;
};

} // namespace

HamiltonianField make_linear_hamiltonian(const Vec& coeffs, int pairs, int n)
{
    return HamiltonianField(std::make_shared<LinearField>(coeffs, pairs, n));
}

HamiltonianField make_H0(int pairs, int n)
{
    Vec c = Vec::Zero(2 * pairs + n);
    c[pairs] = 1.0;
    return make_linear_hamiltonian(c, pairs, n);
}

HamiltonianField make_polynomial_hamiltonian(std::vector<MonomialTerm> terms, int pairs, int n)
{
    return HamiltonianField(std::make_shared<PolynomialField>(std::move(terms), pairs, n));
}

HamiltonianField make_rotation_hamiltonian(double alpha, int i, int d, int n)
{
    return HamiltonianField(std::make_shared<RotationField>(alpha, i, d, n));
}

HamiltonianField make_transit_hamiltonian(double alpha, int i, int d, int n)
{
    return HamiltonianField(std::make_shared<TransitField>(alpha, i, d, n));
}

HamiltonianField make_chained_hamiltonian(const std::vector<ChainFactor>& factors, int d, int n)
{
    return HamiltonianField(std::make_shared<ChainedField>(factors, d, n));
}

HamiltonianField rescale_support(const HamiltonianField& h, double rho)
{
    return HamiltonianField(std::make_shared<ScaledField>(h, rho, false));
}

HamiltonianField dilate_support(const HamiltonianField& h, double rho)
{
    return HamiltonianField(std::make_shared<ScaledField>(h, rho, true));
}

} // namespace sympert
