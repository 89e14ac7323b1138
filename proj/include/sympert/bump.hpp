#pragma once

#include <cmath>

namespace sympert {

// C^2 even bump: 1 on [-1/4, 1/4], 0 outside (-1, 1), polynomial transitions.
//
// On a transition the profile is 1 - B(s) with s the normalized offset and
//   B(s) = 168 * int_0^s u^2 (1-u)^5 du
//        = 56 s^3 - 210 s^4 + 336 s^5 - 280 s^6 + 120 s^7 - 21 s^8.
// B matches value/slope/curvature at both ends (C^2 junctions) and satisfies
// int_0^1 (1 - B) = 1/3, so each transition carries mass 3/4 * 1/3 = 1/4 and
// the plateau carries 1/2: the total integral is exactly 1.
class BumpFunction {
public:
    BumpFunction();

    double value(double r) const;
    double d1(double r) const;
    double d2(double r) const;

    /// Antiderivative L(r) = int_{-inf}^r value, exact per piece.
    double antiderivative(double r) const;
    /// Exact integral over [a, b].
    double integrate(double a, double b) const { return antiderivative(b) - antiderivative(a); }
    /// Total mass, exact.
    static constexpr double total_integral() { return 1.0; }

    double c0_norm() const { return c0_; }
    double c1_norm() const { return c1_; }
    double c2_norm() const { return c2_; }

    static constexpr double plateau_radius() { return 0.25; }
    static constexpr double support_radius() { return 1.0; }

private:
    double c0_, c1_, c2_;
};

/// The process-wide bump instance used by every generated Hamiltonian.
const BumpFunction& bump();

} // namespace sympert
