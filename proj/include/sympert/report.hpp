#pragma once

#include <string>
#include <vector>

namespace sympert {

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    std::string relation = "<="; // measured <relation> bound
    bool pass = false;
};

inline CheckResult check_le(std::string name, double measured, double bound)
{
    return {std::move(name), measured, bound, "<=", measured <= bound};
}

inline CheckResult check_ge(std::string name, double measured, double bound)
{
    return {std::move(name), measured, bound, ">=", measured >= bound};
}

struct VerificationReport {
    std::string suite;
    unsigned long long seed = 0;
    std::string config_summary;
    std::vector<CheckResult> checks;

    bool overall() const
    {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    void append(const VerificationReport& other)
    {
        checks.insert(checks.end(), other.checks.begin(), other.checks.end());
    }
};

} // namespace sympert
