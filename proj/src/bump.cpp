#include "sympert/bump.hpp"

namespace sympert {

namespace {

// B, B', B'' on the normalized transition variable s in [0, 1].
double poly_B(double s)
{
    return s * s * s * (56.0 + s * (-210.0 + s * (336.0 + s * (-280.0 + s * (120.0 - 21.0 * s)))));
}

double poly_B1(double s)
{
    const double t = 1.0 - s;
    const double t2 = t * t;
    return 168.0 * s * s * t2 * t2 * t;
}

double poly_B2(double s)
{
    const double t = 1.0 - s;
    const double t2 = t * t;
    return 168.0 * s * t2 * t2 * (2.0 - 7.0 * s);
}

// C(s) = int_0^s (1 - B), used by the antiderivative.
double poly_C(double s)
{
    const double s3 = s * s * s;
    return s + s3 * s * (-14.0 + s * (42.0 + s * (-56.0 + s * (40.0 + s * (-15.0 + s * (7.0 / 3.0))))));
}

constexpr double kLo = 0.25;
constexpr double kHi = 1.0;
constexpr double kWidth = kHi - kLo;      // 3/4
constexpr double kSlope = 1.0 / kWidth;   // ds/d|r| = 4/3

} // namespace

BumpFunction::BumpFunction()
{
    c0_ = 1.0;
    // |l'| peaks where (u^2 (1-u)^5)' = 0, at u = 2/7; |l''| at the smaller
    // root of 42u^2 - 24u + 2 = 0. Both maxima are exact up to the closed-form
    // critical points.
    c1_ = kSlope * poly_B1(2.0 / 7.0);
    const double u = (12.0 - std::sqrt(60.0)) / 42.0;
    c2_ = kSlope * kSlope * std::abs(poly_B2(u));
}

double BumpFunction::value(double r) const
{
    const double a = std::abs(r);
    if (a <= kLo) return 1.0;
    if (a >= kHi) return 0.0;
    return 1.0 - poly_B((a - kLo) * kSlope);
}

double BumpFunction::d1(double r) const
{
    const double a = std::abs(r);
    if (a <= kLo || a >= kHi) return 0.0;
    const double inner = -poly_B1((a - kLo) * kSlope) * kSlope;
    return r > 0 ? inner : -inner;
}

double BumpFunction::d2(double r) const
{
    const double a = std::abs(r);
    if (a <= kLo || a >= kHi) return 0.0;
    return -poly_B2((a - kLo) * kSlope) * kSlope * kSlope;
}

double BumpFunction::antiderivative(double r) const
{
    if (r <= -kHi) return 0.0;
    if (r <= -kLo) {
        const double s = (-r - kLo) * kSlope;
        return 0.25 - kWidth * poly_C(s);
    }
    if (r <= kLo) return 0.25 + (r + kLo);
    if (r <= kHi) {
        const double s = (r - kLo) * kSlope;
        return 0.75 + kWidth * poly_C(s);
    }
    return 1.0;
}

const BumpFunction& bump()
{
    static const BumpFunction instance;
    return instance;
}

} // namespace sympert
