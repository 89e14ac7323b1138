#pragma once

#include "sympert/factorization.hpp"
#include "sympert/hamiltonian.hpp"
#include "sympert/report.hpp"

#include <json.hpp>

namespace sympert {

using json = nlohmann::ordered_json;

/// Matrix schema: {"d": int, "n": int, "rows": [[...], ...]} row-major.
json matrix_to_json(const Mat& m, int d, int n);
Mat matrix_from_json(const json& j, int* d_out = nullptr, int* n_out = nullptr);

/// Factorization schema: one entry per plane split, carrying the paired
/// pre-rotation angle theta and conjugated angle xi, the planar 2x2 P and
/// the outer conjugator Q (identity for the L1 half).
json factorization_to_json(const Factorization& f, int d);

json report_to_json(const VerificationReport& rep);

/// Field descriptor: {"kind": ..., "d", "n", ...kind-specific params}.
json field_to_json(const HamiltonianField& h);
HamiltonianField field_from_json(const json& j);

json vector_to_json(const Vec& v);
Vec vector_from_json(const json& j);

} // namespace sympert
