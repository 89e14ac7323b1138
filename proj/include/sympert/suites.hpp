#pragma once

#include "sympert/json_io.hpp"
#include "sympert/report.hpp"

#include <optional>

namespace sympert {

struct SuiteConfig {
    // factorization battery
    int factorization_trials = 1000;
    std::vector<int> factorization_dims = {1, 2, 3};
    std::vector<double> factorization_deltas = {1e-1, 1e-2, 1e-3, 1e-4};
    // flow battery
    int flow_trials = 100;
    // continuous realization
    int chained_targets_per_dim = 25; // over d in {1, 2}
    // discrete realization
    int discrete_trials = 100;
    int poisson_samples = 1000;
    // flowbox
    int flowbox_forward_samples = 1000;
    int flowbox_chart_samples = 25;
    // numerics
    double step = 1e-3;
    double fd_step = 1e-5;

    static SuiteConfig from_json(const json& j);
    std::string summary() const;
};

std::vector<std::string> suite_names();

/// Runs one named battery (or "all") deterministically under the seed.
VerificationReport run_suite(const std::string& name, unsigned long long seed,
                             const SuiteConfig& cfg = {});

/// Deterministic per-trial seed derivation (FNV-1a over tag and indices).
unsigned long long derive_seed(unsigned long long base, std::string_view tag,
                               unsigned long long a = 0, unsigned long long b = 0);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace sympert
