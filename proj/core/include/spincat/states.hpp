#pragma once

#include <complex>

#include <Eigen/Dense>

namespace spincat::states {

/// Pure state of N two-level atoms in the symmetric (Dicke) subspace,
/// expanded over |j,m>, j = N/2.  amplitudes[i] is the coefficient of
/// m = -j + i, i = 0..N, so index 0 sits at the south pole.
struct PureState {
    int n_atoms = 0;
    Eigen::VectorXcd amplitudes;

    double j() const { return 0.5 * n_atoms; }
    double m_at(int index) const { return index - j(); }
    int dim() const { return n_atoms + 1; }
};

/// Hermitian, unit-trace density matrix on the Dicke space.  Element (i,k)
/// is rho_{m,l} with m = -j+i, l = -j+k.
struct DensityMatrix {
    int n_atoms = 0;
    Eigen::MatrixXcd elements;

    double j() const { return 0.5 * n_atoms; }
    int dim() const { return n_atoms + 1; }
};

/// Collective angular momentum matrices in the Dicke basis.
struct SpinOperators {
    int n_atoms = 0;
    Eigen::MatrixXcd jx, jy, jz, jplus, jminus;
};

/// Atomic coherent state pointing along (beta, alpha), with beta measured
/// from the SOUTH pole: beta = 0 gives m = -j, beta = pi gives m = +j.
/// Amplitudes c_m = binom(2j, j+m)^(1/2) sin^(j+m)(beta/2) cos^(j-m)(beta/2)
/// e^(-i (j+m) alpha).  The (beta, alpha) parametrization keeps the north
/// pole regular, unlike the stereographic tau = tan(beta/2) e^(-i alpha).
PureState coherent_state(int n_atoms, double beta, double alpha);

/// Overlap <state1|state2> of two coherent states, in closed form (product of
/// single-atom overlaps raised to the 2j-th power).
std::complex<double> coherent_overlap(int n_atoms, double beta1, double alpha1, double beta2,
                                      double alpha2);

/// Normalized equal-weight superposition of two coherent states.
/// Throws std::domain_error when the combined norm is degenerate
/// (components opposite with cancelling phases).
PureState general_cat(int n_atoms, double beta1, double alpha1, double beta2, double alpha2);

/// Cat of the two mirror components (beta, alpha=0) and (beta, alpha=pi),
/// i.e. tau and -tau; both centres lie in the x-z plane.
PureState nonpolar_cat(int n_atoms, double beta);

/// Equal superposition of the polar Dicke states |j,j> and |j,-j>.
PureState polar_cat(int n_atoms);

SpinOperators spin_operators(int n_atoms);

DensityMatrix density_of(const PureState& state);

/// Tr(rho A).
std::complex<double> expectation(const Eigen::MatrixXcd& a, const DensityMatrix& rho);

}  // namespace spincat::states
