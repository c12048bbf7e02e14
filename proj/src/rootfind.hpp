#pragma once

#include <cmath>
#include <stdexcept>

namespace newtonlab {

/// Bisection on [a, b] down to interval width `xtol`. Requires a sign change;
/// throws std::invalid_argument otherwise.
template <typename F>
double bisect(F&& f, double a, double b, double xtol = 1e-12) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0)) {
        throw std::invalid_argument("bisect: no sign change on the bracket");
    }
    while (b - a > xtol) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;  // interval collapsed to adjacent doubles
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

/// Composite Simpson quadrature with `panels` subintervals (made even).
template <typename F>
double composite_simpson(F&& f, double a, double b, int panels) {
    if (panels % 2 != 0) ++panels;
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) {
        s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return s * h / 3.0;
}

}  // namespace newtonlab
