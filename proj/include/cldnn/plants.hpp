#pragma once

#include "cldnn/dnn.hpp"

#include <cmath>
#include <functional>
#include <string>

namespace cldnn {

/// Double-integrator plant xdd = f(x, xdot) + u with an unknown drift f.
struct Plant {
    std::string name;
    std::function<Vector(const Vector&, const Vector&)> f;
};

inline double sech(double z) { return 1.0 / std::cosh(z); }

inline Vector plant_f1(const Vector& x, const Vector& xd) {
    Vector f(2);
    const double a = std::sin(x(0) + x(1)) * std::cos(xd(0) - xd(1));
    const double b = std::cos(x(0)) * std::sin(x(1)) * std::cos(xd(0)) * std::sin(xd(1));
    f << a + b, b - a * std::sin(x(0));
    return f;
}

inline Vector plant_f2(const Vector& x, const Vector& xd) {
    Vector f(2);
    const double s1 = sech(x(0));
    const double s2 = sech(x(1));
    const double sd = sech(xd(0) + xd(1));
    f << x(0) * xd(1) * std::tanh(x(1)) + s1 * s1, sd * sd - s2 * s2;
    return f;
}

Plant make_plant(const std::string& name);

}  // namespace cldnn
