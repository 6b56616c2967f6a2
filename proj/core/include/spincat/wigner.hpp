#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "spincat/states.hpp"

namespace spincat::wigner {

/// Product quadrature on the sphere: Gauss-Legendre nodes in cos(theta)
/// crossed with a uniform phi grid.  Weights sum to 4 pi; products
/// Y_KQ conj(Y_K'Q') integrate exactly for K + K' <= min(2 n_theta - 2,
/// n_phi - 1).
struct SphereGrid {
    Eigen::VectorXd theta;         // ascending polar angles
    Eigen::VectorXd theta_weight;  // Gauss-Legendre weights (sum = 2)
    Eigen::VectorXd phi;           // uniform azimuths starting at 0
    double phi_weight = 0.0;       // 2 pi / n_phi

    int n_theta() const { return static_cast<int>(theta.size()); }
    int n_phi() const { return static_cast<int>(phi.size()); }
    double weight(int it, int ip) const {
        (void)ip;
        return theta_weight[it] * phi_weight;
    }
};

SphereGrid sphere_grid(int n_theta, int n_phi);

/// Grid sized for exact product-rule integrals of N-atom states
/// (degree 4j = 2N), optionally oversampled in both directions.
SphereGrid default_grid(int n_atoms, int oversample = 1);

/// Expansion coefficients rho_KQ of an operator over the spherical tensor
/// basis T_KQ, K = 0..2j, |Q| <= K.
struct CharacteristicMatrix {
    int n_atoms = 0;
    std::vector<std::complex<double>> coeffs;  // flat index K^2 + K + Q

    int k_max() const { return n_atoms; }
    std::complex<double>& at(int k, int q) { return coeffs[static_cast<std::size_t>(k) * k + k + q]; }
    const std::complex<double>& at(int k, int q) const {
        return coeffs[static_cast<std::size_t>(k) * k + k + q];
    }
};

/// Real scalar field sampled on a sphere grid (theta-major storage).
struct SphereField {
    int n_atoms = 0;
    SphereGrid grid;
    Eigen::MatrixXd values;  // n_theta x n_phi

    double integral() const;
};

/// Spherical tensor operator T_KQ on the N-atom Dicke space.
Eigen::MatrixXcd tensor_operator(int n_atoms, int k, int q);

/// rho_KQ = sqrt(2K+1) sum_m (-1)^(j-m) (j K j / -m Q m-Q) rho_{m,m-Q};
/// identical to Tr(rho T_KQ^dagger).  Bands of rho that vanish identically
/// are skipped, so diagonal-plus-corner matrices transform in O(N^2).
CharacteristicMatrix characteristic_matrix(const states::DensityMatrix& rho);

/// Same transform for an arbitrary (not necessarily Hermitian) operator.
CharacteristicMatrix characteristic_of_operator(const Eigen::MatrixXcd& a);

/// W(theta,phi) = sqrt((2j+1)/4pi) sum_KQ rho_KQ Y_KQ.  The imaginary residue
/// of the synthesis must stay below 1e-10 (Hermitian input); the real part is
/// stored.  Throws ResolutionError when the grid cannot hold degree 2j.
SphereField wigner_field(const CharacteristicMatrix& chi, const SphereGrid& grid);

/// Wigner transform of an arbitrary operator; the field is complex in
/// general, returned as separate real and imaginary parts.
struct OperatorField {
    SphereField real_part;
    SphereField imag_part;
};
OperatorField operator_wigner(const Eigen::MatrixXcd& a, const SphereGrid& grid);

/// Tr(rho A) recovered from the two Wigner fields by quadrature (product
/// rule).  Requires identical grids, exact to degree 4j.
double product_rule_expectation(const SphereField& w_rho, const SphereField& w_a);

/// Closed-form Wigner function of the polar cat state: two coherent lobes
/// plus a (sin theta)^N cos(N phi) interference ridge along the equator.
double polar_cat_wigner(int n_atoms, double theta, double phi);

/// Closed-form characteristic matrix of the nonpolar cat (mirror pair
/// tau, -tau at polar angle beta).
CharacteristicMatrix nonpolar_cat_characteristic(int n_atoms, double beta);

/// Closed-form Wigner function of the nonpolar cat, evaluated pointwise.
double nonpolar_cat_wigner(int n_atoms, double beta, double theta, double phi);

/// Pointwise synthesis of a characteristic matrix (real part; the imaginary
/// residue must stay below 1e-10).
double field_value(const CharacteristicMatrix& chi, double theta, double phi);

/// Non-classicality nu = 2 I- / (2 I- + 1), I- the integrated negative part.
/// Fields with min W > -1e-9 max|W| count as classical (nu = 0).
double nonclassicality(const SphereField& field);

/// nu evaluated on successively oversampled grids (4x, 8x, ...) until two
/// consecutive values agree to 1e-6.  Throws ResolutionError if 256x is
/// reached without convergence.
double nonclassicality_converged(const CharacteristicMatrix& chi);

/// Extrema of an evolving-polar-cat field.  Requires the polar-cat sparsity
/// pattern (only rho_K0 and rho_N,+-N nonzero); the azimuthal dependence is
/// then a pure cos(N phi) modulation, the minimum lies on the phi = pi/N
/// section and the maximum modulus on one of the phi = 0, pi/N sections.
struct SectionStats {
    double min_w = 0.0;      // min over theta of W(theta, pi/N)
    double max_abs_w = 0.0;  // max |W| over the sphere
};
SectionStats evolving_cat_section_stats(const CharacteristicMatrix& chi);

/// Minimum of W(theta, phi = pi/N) for an evolving polar cat; dense theta
/// sampling plus golden-section refinement, 1e-10 tolerance on W.
double min_section(const CharacteristicMatrix& chi, int n_atoms);

}  // namespace spincat::wigner
