#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "spincat/states.hpp"
#include "spincat/wigner.hpp"

namespace spincat::dynamics {

/// Thermal environment.  gamma is pinned to 1: all times are in units of the
/// inverse damping rate.
struct BathParams {
    double nbar = 0.0;  // mean photon number at the atomic frequency
    static constexpr double gamma = 1.0;
};

struct IntegratorOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
};

struct EvolveOptions {
    IntegratorOptions integrator;
    double horizon_factor = 5.0;  // auto horizon = factor * t_diss estimate
};

/// Time series of the quantities that stay nonzero for decaying cat states:
/// main diagonal, corner coherence rho_{-j,j}, energy.  Densely re-integrable:
/// diagonal_at restarts the integration from the nearest stored sample, and
/// the corner obeys a closed-form exponential at all times.
struct EvolutionTrace {
    int n_atoms = 0;
    BathParams bath;
    IntegratorOptions integrator;
    std::vector<double> times;
    Eigen::MatrixXd diagonals;  // (N+1) x n_times, column per sample
    std::vector<std::complex<double>> corner;
    std::vector<double> energy;
    std::vector<double> nu;  // per-sample non-classicality; empty unless computed

    Eigen::VectorXd diagonal_at(double t) const;
    std::complex<double> corner_at(double t) const;
};

/// Right-hand side of the master equation for the full density matrix.
/// Each diagonal m - l = const couples only to its two neighbours within the
/// same diagonal.
states::DensityMatrix master_rhs(const states::DensityMatrix& rho, BathParams bath);

/// Evolve an initial state and record the trace.  horizon <= 0 selects the
/// automatic horizon (horizon_factor times the located dissipation time,
/// extending by doubling until the energy crossing is bracketed).  Samples
/// are n_samples uniform times plus the detected characteristic times.
EvolutionTrace evolve(const states::DensityMatrix& rho0, BathParams bath, double horizon,
                      int n_samples, const EvolveOptions& opts = {});

/// Optimized polar-cat path: only the main diagonal is integrated
/// numerically; the corner coherence is attached in closed form.
EvolutionTrace evolve_polar_cat(int n_atoms, BathParams bath, double horizon = 0.0,
                                int n_samples = 401, const EvolveOptions& opts = {});

/// Full density matrix at time t, every nonzero diagonal integrated as an
/// independent tridiagonally-coupled system.
states::DensityMatrix evolve_matrix(const states::DensityMatrix& rho0, BathParams bath, double t,
                                    const IntegratorOptions& opts = {});

/// rho_{-j,j}(t) = (1/2) exp(-j (2 nbar + 1) t) for the polar cat.
double coherence_analytic(int n_atoms, BathParams bath, double t);

/// Boltzmann stationary diagonal of the master equation (delta at m = -j for
/// nbar = 0); normalized so the entries sum to one.
Eigen::VectorXd stationary_state(int n_atoms, BathParams bath);

/// Stationary energy in units of the atomic quantum: closed geometric form,
/// -j at zero temperature.
double stationary_energy(int n_atoms, BathParams bath);

/// Zero-temperature polar-cat diagonal at time t from the recursive
/// integration of the cascade, evaluated by adaptive quadrature over
/// piecewise-Chebyshev representations of each level (no closed-form partial
/// fractions, so coinciding rates b_m = b_{1-m} need no special casing).
Eigen::VectorXd zero_temp_cascade(int n_atoms, double t);
/// Same, for several times sharing one set of level interpolants; column per
/// time.
Eigen::MatrixXd zero_temp_cascade(int n_atoms, const std::vector<double>& times);

/// E = sum_m m rho_mm in units hbar omega_a = 1.
double energy(const Eigen::VectorXd& diagonal);

/// t_dec = 2 / (N (2 nbar + 1)).
double t_dec(int n_atoms, BathParams bath);

/// First time with |E(t) - E(inf)| = |E(0) - E(inf)| / e, bracketed on the
/// trace samples, seeded by cubic interpolation and refined by re-integration
/// to 1e-6 relative.  Throws HorizonError when the trace never crosses.
double t_diss(const EvolutionTrace& trace);

/// First time the evolving-cat Wigner function becomes non-negative
/// (min_section >= -1e-9 max|W|), bisected to 1e-4 relative.  nullopt at
/// nbar = 0 or when the state stays non-classical over the whole trace.
/// The overload takes a replacement for the default section-minimum
/// evaluator (wigner::evolving_cat_section_stats).
std::optional<double> t_ncl(const EvolutionTrace& trace);
using SectionMinEvaluator = std::function<wigner::SectionStats(const wigner::CharacteristicMatrix&)>;
std::optional<double> t_ncl(const EvolutionTrace& trace, const SectionMinEvaluator& min_evaluator);

/// Characteristic matrix of the evolving cat at time t, built from the
/// trace's diagonal and corner (valid whenever the evolved state carries the
/// polar-cat sparsity: main diagonal plus the rho_{+-j,-+j} corners).
wigner::CharacteristicMatrix characteristic_at(const EvolutionTrace& trace, double t);

struct CharacteristicTimes {
    double decoherence = 0.0;
    double dissipation = 0.0;
    std::optional<double> nonclassical;
    double ratio = 0.0;  // dissipation / decoherence
};

/// Full polar-cat pipeline: evolve with automatic horizon and extract all
/// characteristic times.
CharacteristicTimes characteristic_times(int n_atoms, BathParams bath,
                                         const EvolveOptions& opts = {});

}  // namespace spincat::dynamics
