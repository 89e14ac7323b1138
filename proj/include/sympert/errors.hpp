#pragma once

#include <stdexcept>

namespace sympert {

struct ComplexSpectrumError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct GapTooSmallError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NondegeneracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OutOfRegimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InfeasibleAngleError : std::logic_error {
    using std::logic_error::logic_error;
};
struct FactorizationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DivergedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoReturnError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OutOfTubeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoCrossingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateBaseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ChartError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace sympert
