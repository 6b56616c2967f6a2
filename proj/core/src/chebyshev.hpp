// Piecewise Chebyshev interpolants and adaptive Simpson quadrature (internal).
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace spincat::detail {

struct ChebPanel {
    double a = 0.0, b = 1.0;
    std::vector<double> coef;  // Chebyshev series on [a, b]

    double eval(double t) const {
        const double x = (2.0 * t - a - b) / (b - a);
        // Clenshaw
        double b1 = 0.0, b2 = 0.0;
        for (std::size_t k = coef.size(); k-- > 1;) {
            const double b0 = 2.0 * x * b1 - b2 + coef[k];
            b2 = b1;
            b1 = b0;
        }
        return x * b1 - b2 + coef[0];
    }
};

struct PiecewiseCheb {
    std::vector<ChebPanel> panels;

    double eval(double t) const {
        for (const auto& p : panels)
            if (t <= p.b || &p == &panels.back()) return p.eval(std::min(t, p.b));
        return panels.back().eval(panels.back().b);
    }
};

// Fit one panel with increasing degree until the tail coefficients drop
// below tol relative to the largest coefficient.
inline ChebPanel fit_panel(const std::function<double(double)>& f, double a, double b, double tol) {
    ChebPanel panel;
    panel.a = a;
    panel.b = b;
    for (int n : {16, 32, 64, 96}) {
        std::vector<double> fx(static_cast<std::size_t>(n) + 1);
        for (int k = 0; k <= n; ++k) {
            const double x = std::cos(M_PI * k / n);  // Chebyshev-Lobatto
            fx[static_cast<std::size_t>(k)] = f(0.5 * ((b - a) * x + a + b));
        }
        std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
        for (int m = 0; m <= n; ++m) {
            double acc = 0.5 * (fx[0] + (m % 2 == 0 ? fx[static_cast<std::size_t>(n)]
                                                    : -fx[static_cast<std::size_t>(n)]));
            for (int k = 1; k < n; ++k)
                acc += fx[static_cast<std::size_t>(k)] * std::cos(M_PI * m * k / n);
            c[static_cast<std::size_t>(m)] = 2.0 * acc / n;
        }
        c[0] *= 0.5;
        double scale = 0.0;
        for (double v : c) scale = std::max(scale, std::abs(v));
        const double tail = std::max({std::abs(c[static_cast<std::size_t>(n)]),
                                      std::abs(c[static_cast<std::size_t>(n) - 1]),
                                      std::abs(c[static_cast<std::size_t>(n) - 2])});
        panel.coef = std::move(c);
        if (tail <= tol * std::max(scale, 1e-30) || n == 96) break;
    }
    return panel;
}

inline PiecewiseCheb fit_piecewise(const std::function<double(double)>& f,
                                   const std::vector<double>& edges, double tol) {
    if (edges.size() < 2) throw std::invalid_argument("fit_piecewise: need at least one panel");
    PiecewiseCheb out;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        out.panels.push_back(fit_panel(f, edges[i], edges[i + 1], tol));
    return out;
}

namespace quad_detail {
inline double simpson(double a, double fa, double fm, double b, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adapt(const std::function<double(double)>& f, double a, double fa, double m,
                    double fm, double b, double fb, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, flm, m, fm);
    const double right = simpson(m, fm, frm, b, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adapt(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace quad_detail

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
inline double adaptive_quadrature(const std::function<double(double)>& f, double a, double b,
                                  double tol) {
    if (b <= a) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = quad_detail::simpson(a, fa, fm, b, fb);
    return quad_detail::adapt(f, a, fa, m, fm, b, fb, whole, tol, 30);
}

}  // namespace spincat::detail
