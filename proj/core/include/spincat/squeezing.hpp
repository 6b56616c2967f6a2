#pragma once

#include "spincat/states.hpp"

namespace spincat::squeeze {

/// Dipole variances and squeezing measure of a mirror-pair cat at a given
/// opening angle.
struct SqueezingReport {
    int n_atoms = 0;
    double beta = 0.0;
    double var_jx = 0.0;
    double var_jy = 0.0;
    double s_measure = 0.0;  // 1 - 2 var_jy / j
};

/// (Delta Jx)^2 = (j/2)(1 + (2j-1) sin^2(beta) / (1 + cos^(2j)(beta))).
double variance_jx(int n_atoms, double beta);

/// (Delta Jy)^2 = (j/2)(1 - (2j-1) cos^(2j-2)(beta) sin^2(beta) /
/// (1 + cos^(2j)(beta))).  For N = 1 the vanishing (2j-1) prefactor is applied
/// before the negative power, so the result is exactly j/2 at every beta.
double variance_jy(int n_atoms, double beta);

/// S = 1 - 2 (Delta Jy)^2 / j; positive iff Jy is squeezed below the
/// coherent-state level.
double squeezing_measure(int n_atoms, double beta);

SqueezingReport report(int n_atoms, double beta);

/// Maximizer of S over beta in (0, pi/2): coarse 1000-point scan plus
/// golden-section refinement to |d beta| < 1e-8.  Throws std::domain_error
/// for N = 1 (a single atom never squeezes).
struct MaxSqueezing {
    double beta_m = 0.0;
    double s_max = 0.0;
};
MaxSqueezing max_squeezing(int n_atoms);

enum class Axis { x, y, z };

/// <J_axis^2> - <J_axis>^2 straight from the spin matrices; the independent
/// check of the closed-form variances.
double variance_oracle(const states::PureState& state, Axis axis);

}  // namespace spincat::squeeze
