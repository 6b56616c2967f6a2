#include "spincat/states.hpp"

#include <cmath>
#include <stdexcept>

#include "spincat/specfun.hpp"

namespace spincat::states {

namespace {

void require_atoms(int n_atoms) {
    if (n_atoms < 1) throw std::domain_error("need at least one atom");
}

Eigen::VectorXcd coherent_amplitudes(int n_atoms, double beta, double alpha) {
    const int dim = n_atoms + 1;
    const double sh = std::sin(0.5 * beta);
    const double ch = std::cos(0.5 * beta);
    Eigen::VectorXcd c(dim);
    for (int i = 0; i < dim; ++i) {
        const int up = i;             // j + m
        const int down = n_atoms - i;  // j - m
        const double ln_binom = 0.5 * (specfun::ln_factorial(n_atoms) -
                                       specfun::ln_factorial(up) - specfun::ln_factorial(down));
        const double mag =
            std::exp(ln_binom) * std::pow(sh, up) * std::pow(ch, down);
        c[i] = mag * std::polar(1.0, -up * alpha);
    }
    return c;
}

}  // namespace

PureState coherent_state(int n_atoms, double beta, double alpha) {
    require_atoms(n_atoms);
    PureState psi{n_atoms, coherent_amplitudes(n_atoms, beta, alpha)};
    psi.amplitudes /= psi.amplitudes.norm();
    return psi;
}

std::complex<double> coherent_overlap(int n_atoms, double beta1, double alpha1, double beta2,
                                      double alpha2) {
    require_atoms(n_atoms);
    // <tau1|tau2> = [cos(b1/2)cos(b2/2) + sin(b1/2)sin(b2/2) e^(-i(a2-a1))]^(2j)
    const std::complex<double> single =
        std::cos(0.5 * beta1) * std::cos(0.5 * beta2) +
        std::sin(0.5 * beta1) * std::sin(0.5 * beta2) * std::polar(1.0, alpha1 - alpha2);
    return std::pow(single, n_atoms);
}

PureState general_cat(int n_atoms, double beta1, double alpha1, double beta2, double alpha2) {
    require_atoms(n_atoms);
    const double norm_sq =
        2.0 * (1.0 + coherent_overlap(n_atoms, beta1, alpha1, beta2, alpha2).real());
    if (norm_sq <= 1e-14)
        throw std::domain_error("degenerate superposition: components cancel");
    PureState psi{n_atoms, coherent_amplitudes(n_atoms, beta1, alpha1) +
                               coherent_amplitudes(n_atoms, beta2, alpha2)};
    psi.amplitudes /= psi.amplitudes.norm();
    return psi;
}

PureState nonpolar_cat(int n_atoms, double beta) {
    if (beta == 0.0) return coherent_state(n_atoms, 0.0, 0.0);
    return general_cat(n_atoms, beta, 0.0, beta, M_PI);
}

PureState polar_cat(int n_atoms) {
    require_atoms(n_atoms);
    PureState psi{n_atoms, Eigen::VectorXcd::Zero(n_atoms + 1)};
    psi.amplitudes[0] = 1.0 / std::sqrt(2.0);
    psi.amplitudes[n_atoms] = 1.0 / std::sqrt(2.0);
    return psi;
}

SpinOperators spin_operators(int n_atoms) {
    require_atoms(n_atoms);
    const int dim = n_atoms + 1;
    const double j = 0.5 * n_atoms;
    SpinOperators ops;
    ops.n_atoms = n_atoms;
    ops.jplus = Eigen::MatrixXcd::Zero(dim, dim);
    ops.jz = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        const double m = -j + i;
        ops.jz(i, i) = m;
        if (i + 1 < dim) ops.jplus(i + 1, i) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    }
    ops.jminus = ops.jplus.adjoint();
    ops.jx = 0.5 * (ops.jplus + ops.jminus);
    ops.jy = std::complex<double>(0.0, -0.5) * (ops.jplus - ops.jminus);
    return ops;
}

DensityMatrix density_of(const PureState& state) {
    DensityMatrix rho;
    rho.n_atoms = state.n_atoms;
    rho.elements = state.amplitudes * state.amplitudes.adjoint();
    return rho;
}

std::complex<double> expectation(const Eigen::MatrixXcd& a, const DensityMatrix& rho) {
    if (a.rows() != rho.elements.rows() || a.cols() != rho.elements.cols())
        throw std::invalid_argument("expectation: dimension mismatch");
    return (rho.elements * a).trace();
}

}  // namespace spincat::states
