#include "spincat/squeezing.hpp"

#include <cmath>
#include <stdexcept>

namespace spincat::squeeze {

namespace {

void require_atoms(int n_atoms) {
    if (n_atoms < 1) throw std::domain_error("need at least one atom");
}

}  // namespace

double variance_jx(int n_atoms, double beta) {
    require_atoms(n_atoms);
    const double j = 0.5 * n_atoms;
    const double s = std::sin(beta);
    return 0.5 * j *
           (1.0 + (n_atoms - 1.0) * s * s / (1.0 + std::pow(std::cos(beta), n_atoms)));
}

double variance_jy(int n_atoms, double beta) {
    require_atoms(n_atoms);
    const double j = 0.5 * n_atoms;
    if (n_atoms == 1) return 0.5 * j;  // (2j-1) = 0 kills the correction before cos^(2j-2)
    const double s = std::sin(beta);
    const double c = std::cos(beta);
    return 0.5 * j *
           (1.0 - (n_atoms - 1.0) * std::pow(c, n_atoms - 2) * s * s /
                      (1.0 + std::pow(c, n_atoms)));
}

double squeezing_measure(int n_atoms, double beta) {
    const double j = 0.5 * n_atoms;
    return 1.0 - 2.0 * variance_jy(n_atoms, beta) / j;
}

SqueezingReport report(int n_atoms, double beta) {
    return SqueezingReport{n_atoms, beta, variance_jx(n_atoms, beta), variance_jy(n_atoms, beta),
                           squeezing_measure(n_atoms, beta)};
}

MaxSqueezing max_squeezing(int n_atoms) {
    if (n_atoms < 2) throw std::domain_error("max_squeezing: a single atom never squeezes");
    constexpr int kScan = 1000;
    const double hi = 0.5 * M_PI;
    double best_beta = 0.0, best = -1.0;
    for (int k = 1; k < kScan; ++k) {
        const double beta = hi * k / kScan;
        const double s = squeezing_measure(n_atoms, beta);
        if (s > best) {
            best = s;
            best_beta = beta;
        }
    }
    double a = std::max(0.0, best_beta - hi / kScan);
    double b = std::min(hi, best_beta + hi / kScan);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = squeezing_measure(n_atoms, x1), f2 = squeezing_measure(n_atoms, x2);
    while (b - a > 1e-8) {
        if (f1 > f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = squeezing_measure(n_atoms, x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = squeezing_measure(n_atoms, x2);
        }
    }
    const double beta_m = 0.5 * (a + b);
    return MaxSqueezing{beta_m, squeezing_measure(n_atoms, beta_m)};
}

double variance_oracle(const states::PureState& state, Axis axis) {
    const auto ops = states::spin_operators(state.n_atoms);
    const Eigen::MatrixXcd& op = axis == Axis::x ? ops.jx : (axis == Axis::y ? ops.jy : ops.jz);
    const Eigen::VectorXcd v = op * state.amplitudes;
    const double second = v.squaredNorm();
    const std::complex<double> first = state.amplitudes.dot(v);
    return second - std::norm(first);
}

}  // namespace spincat::squeeze
