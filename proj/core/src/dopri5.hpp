// Adaptive Dormand-Prince 5(4) integrator (internal).
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

#include <Eigen/Dense>

#include "spincat/errors.hpp"

namespace spincat::detail {

struct Tolerances {
    double rel = 1e-10;
    double abs = 1e-12;
};

// Integrates y' = rhs(t, y) from t0 to t1 in place.  Steps are clipped to land
// exactly on every entry of `samples` (ascending, within [t0, t1]) and the
// observer is called there; the observer also fires at t1 if listed.
// rhs signature: void(double t, const VectorXd& y, VectorXd& dydt).
template <class Rhs, class Observer>
void dopri5_integrate(const Rhs& rhs, Eigen::VectorXd& y, double t0, double t1, Tolerances tol,
                      std::span<const double> samples, Observer&& observe) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // b - bhat (error coefficients), with the k7 contribution
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

    const auto n = y.size();
    Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), yerr(n);

    double t = t0;
    std::size_t next_sample = 0;
    while (next_sample < samples.size() && samples[next_sample] <= t0) {
        if (samples[next_sample] == t0) observe(t0, y);
        ++next_sample;
    }
    if (t1 <= t0) return;

    rhs(t, y, k1);

    // initial step size from the scaled magnitudes of y and y'
    double h_prop;
    {
        double d0 = 0.0, d1 = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double sc = tol.abs + tol.rel * std::abs(y[i]);
            if (sc > 0.0) {
                d0 = std::max(d0, std::abs(y[i]) / sc);
                d1 = std::max(d1, std::abs(k1[i]) / sc);
            }
        }
        h_prop = (d1 > 1e-300) ? 0.01 * d0 / d1 : 1e-6 * (t1 - t0);
        h_prop = std::clamp(h_prop, 1e-12 * (t1 - t0), t1 - t0);
    }

    const double h_floor = std::max(1e-15 * (t1 - t0), 1e-300);
    double smallest = std::numeric_limits<double>::infinity();
    bool just_rejected = false;
    long steps = 0;

    while (t < t1) {
        const double target =
            (next_sample < samples.size()) ? std::min(samples[next_sample], t1) : t1;
        // clip to land exactly on the next sample; a clipped step must not
        // feed back into the proposed step size
        const bool clipped = h_prop > target - t;
        const double h = clipped ? target - t : h_prop;
        if (++steps > 200'000'000L)
            throw StiffnessError("integrator exceeded the step budget", smallest);

        ytmp = y + h * a21 * k1;
        rhs(t + c2 * h, ytmp, k2);
        ytmp = y + h * (a31 * k1 + a32 * k2);
        rhs(t + c3 * h, ytmp, k3);
        ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        rhs(t + c4 * h, ytmp, k4);
        ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        rhs(t + c5 * h, ytmp, k5);
        ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        rhs(t + h, ytmp, k6);
        ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        rhs(t + h, ynew, k7);
        yerr = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double err_sq = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double sc = tol.abs + tol.rel * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double r = (sc > 0.0) ? yerr[i] / sc : 0.0;
            err_sq += r * r;
        }
        const double err = std::sqrt(err_sq / static_cast<double>(n));

        smallest = std::min(smallest, h);
        if (err <= 1.0) {
            t += h;
            y.swap(ynew);
            k1.swap(k7);  // FSAL
            while (next_sample < samples.size() && samples[next_sample] <= t) {
                observe(samples[next_sample], y);
                ++next_sample;
            }
            if (!clipped) {
                double grow = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
                grow = std::min(grow, just_rejected ? 1.0 : 5.0);
                h_prop = std::max(h * std::max(grow, 0.2), h_floor);
            }
            just_rejected = false;
        } else {
            h_prop = std::max(h * std::max(0.9 * std::pow(err, -0.2), 0.1), h_floor);
            just_rejected = true;
            if (h_prop <= h_floor)
                throw StiffnessError("step size underflow (stiff system)", smallest);
        }
    }
}

}  // namespace spincat::detail
