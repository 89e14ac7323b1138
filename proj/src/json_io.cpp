#include "sympert/json_io.hpp"

namespace sympert {

json matrix_to_json(const Mat& m, int d, int n)
{
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return json{{"d", d}, {"n", n}, {"rows", std::move(rows)}};
}

Mat matrix_from_json(const json& j, int* d_out, int* n_out)
{
    if (!j.contains("rows")) throw domain_error("matrix JSON: missing \"rows\"");
    const auto& rows = j.at("rows");
    const auto r = rows.size();
    if (r == 0) throw domain_error("matrix JSON: empty rows");
    const auto c = rows.at(0).size();
    Mat m(r, c);
    for (size_t i = 0; i < r; ++i) {
        if (rows.at(i).size() != c) throw domain_error("matrix JSON: ragged rows");
        for (size_t k = 0; k < c; ++k) m(i, k) = rows.at(i).at(k).get<double>();
    }
    if (d_out) *d_out = j.value("d", 0);
    if (n_out) *n_out = j.value("n", 0);
    return m;
}

json vector_to_json(const Vec& v)
{
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Vec vector_from_json(const json& j)
{
    Vec v(j.size());
    for (size_t i = 0; i < j.size(); ++i) v[i] = j.at(i).get<double>();
    return v;
}

namespace {

json rows_only(const Mat& m)
{
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

json factorization_to_json(const Factorization& f, int d)
{
    json entries = json::array();
    // factors arrive in (pre-rotation, conjugated) pairs per plane split
    for (size_t m = 0; m < f.factors.size();) {
        const auto& fac = f.factors[m];
        json entry;
        entry["k"] = fac.plane;
        if (fac.pre_rotation) {
            entry["theta"] = fac.angle;
            entry["Q_rows"] = rows_only(fac.conjugator);
            if (m + 1 < f.factors.size() && !f.factors[m + 1].pre_rotation &&
                f.factors[m + 1].plane == fac.plane) {
                const auto& main = f.factors[m + 1];
                entry["xi"] = main.angle;
                // planar P recovered from Q_main = Q_pre * pi_k(P)
                const Mat p_full = fac.conjugator.inverse() * main.conjugator;
                Mat p2(2, 2);
                const int i = fac.plane - 1, jj = d + fac.plane - 1;
                p2 << p_full(i, i), p_full(i, jj), p_full(jj, i), p_full(jj, jj);
                entry["P_rows"] = rows_only(p2);
                m += 2;
            } else {
                entry["xi"] = 0.0;
                entry["P_rows"] = rows_only(Mat::Identity(2, 2));
                m += 1;
            }
        } else {
            entry["theta"] = 0.0;
            entry["xi"] = fac.angle;
            entry["Q_rows"] = rows_only(fac.conjugator);
            entry["P_rows"] = rows_only(Mat::Identity(2, 2));
            m += 1;
        }
        entries.push_back(std::move(entry));
    }
    json out;
    out["factors"] = std::move(entries);
    out["residual"] = f.residual;
    out["delta"] = f.diagnostics.delta;
    out["c_fit"] = f.diagnostics.c_fit;
    out["c_P"] = f.diagnostics.c_P;
    out["retries"] = f.diagnostics.retries;
    out["guard_binding"] = f.diagnostics.guard_binding;
    return out;
}

json report_to_json(const VerificationReport& rep)
{
    json checks = json::array();
    for (const auto& c : rep.checks) {
        checks.push_back(json{{"name", c.name},
                              {"measured", c.measured},
                              {"relation", c.relation},
                              {"bound", c.bound},
                              {"pass", c.pass}});
    }
    return json{{"suite", rep.suite},
                {"seed", rep.seed},
                {"config", rep.config_summary},
                {"checks", std::move(checks)},
                {"overall", rep.overall()}};
}

json field_to_json(const HamiltonianField& h)
{
    json out;
    out["d"] = h.pairs();
    out["n"] = h.n();
    switch (h.kind()) {
    case FieldKind::linear:
    case FieldKind::polynomial:
        throw domain_error("field_to_json: only generated kinds serialize");
    case FieldKind::rotation:
        out["kind"] = "rotation";
        out["alpha"] = h.alpha();
        out["i"] = h.plane();
        break;
    case FieldKind::transit:
        out["kind"] = "transit";
        out["d"] = h.pairs() - 1;
        out["alpha"] = h.alpha();
        out["i"] = h.plane();
        break;
    case FieldKind::chained: {
        out["kind"] = "chained";
        out["d"] = h.pairs() - 1;
        json factors = json::array();
        for (const auto& f : h.chain_factors())
            factors.push_back(json{{"P_rows", rows_only(f.conjugator)},
                                   {"i", f.plane},
                                   {"alpha", f.alpha}});
        out["factors"] = std::move(factors);
        break;
    }
    case FieldKind::rescaled:
    case FieldKind::dilated:
        out["kind"] = h.kind() == FieldKind::rescaled ? "rescaled" : "dilated";
        out["rho"] = h.scale();
        out["inner"] = field_to_json(*h.inner());
        break;
    }
    return out;
}

HamiltonianField field_from_json(const json& j)
{
    const std::string kind = j.at("kind").get<std::string>();
    const int d = j.value("d", 1);
    const int n = j.value("n", 0);
    if (kind == "rotation")
        return make_rotation_hamiltonian(j.at("alpha").get<double>(), j.at("i").get<int>(), d, n);
    if (kind == "transit")
        return make_transit_hamiltonian(j.at("alpha").get<double>(), j.at("i").get<int>(), d, n);
    if (kind == "chained") {
        std::vector<ChainFactor> factors;
        for (const auto& f : j.at("factors")) {
            ChainFactor cf;
            cf.conjugator = matrix_from_json(json{{"rows", f.at("P_rows")}});
            cf.plane = f.at("i").get<int>();
            cf.alpha = f.at("alpha").get<double>();
            factors.push_back(std::move(cf));
        }
        return make_chained_hamiltonian(factors, d, n);
    }
    if (kind == "rescaled" || kind == "dilated") {
        const auto inner = field_from_json(j.at("inner"));
        const double rho = j.at("rho").get<double>();
        return kind == "rescaled" ? rescale_support(inner, rho) : dilate_support(inner, rho);
    }
    if (kind == "h0") return make_H0(d, n);
    if (kind == "linear") return make_linear_hamiltonian(vector_from_json(j.at("coeffs")), d, n);
    if (kind == "polynomial") {
        std::vector<MonomialTerm> terms;
        for (const auto& t : j.at("terms")) {
            MonomialTerm term;
            term.coeff = t.at("coeff").get<double>();
            for (const auto& p : t.at("powers"))
                term.powers.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
            terms.push_back(std::move(term));
        }
        return make_polynomial_hamiltonian(std::move(terms), d, n);
    }
    throw domain_error("field_from_json: unknown kind \"" + kind + "\"");
}

} // namespace sympert
