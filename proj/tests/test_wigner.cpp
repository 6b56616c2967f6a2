#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "spincat/errors.hpp"
#include "spincat/specfun.hpp"
#include "spincat/states.hpp"
#include "spincat/wigner.hpp"

using namespace spincat;
using namespace spincat::wigner;
using std::complex;

namespace {

states::PureState random_pure(int n_atoms, std::mt19937& rng) {
    std::normal_distribution<double> nd;
    states::PureState psi{n_atoms, Eigen::VectorXcd(n_atoms + 1)};
    for (int i = 0; i <= n_atoms; ++i) psi.amplitudes[i] = complex<double>(nd(rng), nd(rng));
    psi.amplitudes /= psi.amplitudes.norm();
    return psi;
}

// quadrature of Y_KQ conj(Y_K'Q') on a grid
complex<double> harmonic_overlap(const SphereGrid& g, int k1, int q1, int k2, int q2) {
    complex<double> acc = 0.0;
    for (int it = 0; it < g.n_theta(); ++it)
        for (int ip = 0; ip < g.n_phi(); ++ip)
            acc += g.weight(it, ip) * specfun::spherical_harmonic(k1, q1, g.theta[it], g.phi[ip]) *
                   std::conj(specfun::spherical_harmonic(k2, q2, g.theta[it], g.phi[ip]));
    return acc;
}

}  // namespace

TEST_CASE("sphere grid weights and low-degree exactness") {
    for (auto [nt, np] : {std::pair{2, 3}, {5, 7}, {40, 81}}) {
        const auto g = sphere_grid(nt, np);
        double total = 0.0;
        for (int it = 0; it < g.n_theta(); ++it)
            for (int ip = 0; ip < g.n_phi(); ++ip) total += g.weight(it, ip);
        CHECK(total == doctest::Approx(4.0 * M_PI).epsilon(1e-13));
    }

    const auto g = sphere_grid(2, 3);
    double y00_int = 0.0;
    for (int it = 0; it < 2; ++it)
        for (int ip = 0; ip < 3; ++ip)
            y00_int += g.weight(it, ip) * specfun::spherical_harmonic(0, 0, g.theta[it], g.phi[ip]).real();
    CHECK(y00_int == doctest::Approx(std::sqrt(4.0 * M_PI)).epsilon(1e-13));
    CHECK(harmonic_overlap(g, 1, 1, 1, 1).real() == doctest::Approx(1.0).epsilon(1e-13));

    CHECK_THROWS_AS(sphere_grid(0, 5), std::domain_error);
}

TEST_CASE("spherical harmonics are orthonormal under the grid quadrature, K <= 10") {
    const auto g = sphere_grid(11, 21);
    // precompute harmonics on the nodes
    struct Mode {
        int k, q;
        Eigen::MatrixXcd vals;
    };
    std::vector<Mode> modes;
    for (int k = 0; k <= 10; ++k)
        for (int q = -k; q <= k; ++q) {
            Mode m{k, q, Eigen::MatrixXcd(g.n_theta(), g.n_phi())};
            for (int it = 0; it < g.n_theta(); ++it)
                for (int ip = 0; ip < g.n_phi(); ++ip)
                    m.vals(it, ip) = specfun::spherical_harmonic(k, q, g.theta[it], g.phi[ip]);
            modes.push_back(std::move(m));
        }
    for (std::size_t a = 0; a < modes.size(); ++a)
        for (std::size_t b = a; b < modes.size(); ++b) {
            complex<double> acc = 0.0;
            for (int it = 0; it < g.n_theta(); ++it)
                for (int ip = 0; ip < g.n_phi(); ++ip)
                    acc += g.weight(it, ip) * modes[a].vals(it, ip) * std::conj(modes[b].vals(it, ip));
            const double expect = (a == b) ? 1.0 : 0.0;
            CHECK(std::abs(acc - expect) < 1e-10);
        }
}

TEST_CASE("tensor operators") {
    for (int n : {1, 3, 6}) {
        const auto t00 = tensor_operator(n, 0, 0);
        CHECK((t00 - Eigen::MatrixXcd::Identity(n + 1, n + 1) / std::sqrt(n + 1.0))
                  .cwiseAbs()
                  .maxCoeff() < 1e-14);
    }
    // T_10 for one atom is sqrt(2) Jz
    const auto t10 = tensor_operator(1, 1, 0);
    CHECK(std::abs(t10(0, 0) - complex<double>(-1.0 / std::sqrt(2.0))) < 1e-14);
    CHECK(std::abs(t10(1, 1) - complex<double>(1.0 / std::sqrt(2.0))) < 1e-14);

    // Hilbert-Schmidt orthonormality for all N <= 6
    for (int n = 1; n <= 6; ++n) {
        std::vector<Eigen::MatrixXcd> ts;
        for (int k = 0; k <= n; ++k)
            for (int q = -k; q <= k; ++q) ts.push_back(tensor_operator(n, k, q));
        for (std::size_t a = 0; a < ts.size(); ++a)
            for (std::size_t b = 0; b < ts.size(); ++b) {
                const complex<double> hs = (ts[a].adjoint() * ts[b]).trace();
                CHECK(std::abs(hs - (a == b ? 1.0 : 0.0)) < 1e-13);
            }
    }
    CHECK_THROWS_AS(tensor_operator(2, 3, 0), std::domain_error);
    CHECK_THROWS_AS(tensor_operator(2, 1, 2), std::domain_error);
}

TEST_CASE("characteristic matrix agrees with the trace definition") {
    std::mt19937 rng(2718);
    for (int n = 1; n <= 6; ++n) {
        // random rank-2 mixture
        const auto psi = random_pure(n, rng);
        const auto phi = random_pure(n, rng);
        states::DensityMatrix rho;
        rho.n_atoms = n;
        rho.elements = 0.7 * psi.amplitudes * psi.amplitudes.adjoint() +
                       0.3 * phi.amplitudes * phi.amplitudes.adjoint();
        const auto chi = characteristic_matrix(rho);
        for (int k = 0; k <= n; ++k)
            for (int q = -k; q <= k; ++q) {
                const complex<double> ref =
                    (rho.elements * tensor_operator(n, k, q).adjoint()).trace();
                CHECK(std::abs(chi.at(k, q) - ref) < 1e-12);
                // hermitian symmetry rho_{K,-Q} = (-1)^Q conj(rho_KQ)
                const double sgn = (q % 2 == 0) ? 1.0 : -1.0;
                CHECK(std::abs(chi.at(k, -q) - sgn * std::conj(chi.at(k, q))) < 1e-12);
            }
        CHECK(std::abs(chi.at(0, 0) - 1.0 / std::sqrt(n + 1.0)) < 1e-12);
    }
}

TEST_CASE("characteristic matrix sparsity patterns") {
    // maximally mixed
    states::DensityMatrix mixed;
    mixed.n_atoms = 4;
    mixed.elements = Eigen::MatrixXcd::Identity(5, 5) / 5.0;
    const auto chi_mixed = characteristic_matrix(mixed);
    for (int k = 0; k <= 4; ++k)
        for (int q = -k; q <= k; ++q) {
            const double expect = (k == 0) ? 1.0 / std::sqrt(5.0) : 0.0;
            CHECK(std::abs(chi_mixed.at(k, q) - expect) < 1e-13);
        }

    // polar cat: only rho_K0 and rho_N,+-N
    const int n = 5;
    const auto chi = characteristic_matrix(states::density_of(states::polar_cat(n)));
    for (int k = 0; k <= n; ++k)
        for (int q = -k; q <= k; ++q) {
            if (q == 0 || (k == n && std::abs(q) == n)) continue;
            CHECK(std::abs(chi.at(k, q)) < 1e-14);
        }
    // rho_NN = (-1)^N rho_{j,-j} = -1/2 for N = 5
    CHECK(chi.at(n, n).real() == doctest::Approx(-0.5).epsilon(1e-13));
    CHECK(chi.at(n, -n).real() == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("wigner field basics") {
    states::DensityMatrix mixed;
    mixed.n_atoms = 3;
    mixed.elements = Eigen::MatrixXcd::Identity(4, 4) / 4.0;
    const auto field = wigner_field(characteristic_matrix(mixed), default_grid(3));
    CHECK((field.values.array() - 1.0 / (4.0 * M_PI)).abs().maxCoeff() < 1e-13);
    CHECK(field.integral() == doctest::Approx(1.0).epsilon(1e-12));

    // normalization for random pure states
    std::mt19937 rng(99);
    for (int n = 1; n <= 10; ++n) {
        const auto rho = states::density_of(random_pure(n, rng));
        const auto f = wigner_field(characteristic_matrix(rho), default_grid(n));
        CHECK(f.integral() == doctest::Approx(1.0).epsilon(1e-10));
    }

    // too-coarse grid
    CHECK_THROWS_AS(wigner_field(characteristic_matrix(mixed), sphere_grid(2, 3)), ResolutionError);
}

TEST_CASE("closed-form polar cat field matches the generic pipeline") {
    for (int n = 1; n <= 8; ++n) {
        const auto chi = characteristic_matrix(states::density_of(states::polar_cat(n)));
        const auto grid = default_grid(n);
        const auto field = wigner_field(chi, grid);
        for (int it = 0; it < grid.n_theta(); ++it)
            for (int ip = 0; ip < grid.n_phi(); ++ip)
                CHECK(std::abs(field.values(it, ip) -
                               polar_cat_wigner(n, grid.theta[it], grid.phi[ip])) < 1e-10);
    }
}

TEST_CASE("polar cat has exactly N negative wings along the equator") {
    for (int n : {3, 5, 8}) {
        const int scan = 720;
        int negative_runs = 0;
        bool prev_neg = polar_cat_wigner(n, M_PI / 2, -M_PI / scan) < 0.0;
        for (int k = 0; k < scan; ++k) {
            const bool neg = polar_cat_wigner(n, M_PI / 2, 2.0 * M_PI * k / scan) < 0.0;
            if (neg && !prev_neg) ++negative_runs;
            prev_neg = neg;
        }
        CHECK(negative_runs == n);
    }
}

TEST_CASE("closed-form nonpolar cat field matches the generic pipeline") {
    const int n = 5;
    for (double beta_deg : {20.0, 45.0, 55.0, 70.0}) {
        const double beta = beta_deg * M_PI / 180.0;
        const auto chi_closed = nonpolar_cat_characteristic(n, beta);
        const auto chi_generic = characteristic_matrix(states::density_of(states::nonpolar_cat(n, beta)));
        const auto grid = default_grid(n);
        const auto f_generic = wigner_field(chi_generic, grid);
        for (int it = 0; it < grid.n_theta(); ++it)
            for (int ip = 0; ip < grid.n_phi(); ++ip)
                CHECK(std::abs(f_generic.values(it, ip) -
                               nonpolar_cat_wigner(n, beta, grid.theta[it], grid.phi[ip])) < 1e-9);
    }
    // other sizes, odd and even N, on every grid node
    for (int nn : {1, 2, 3, 7, 8}) {
        const double beta = 0.9;
        const auto grid = default_grid(nn);
        const auto f = wigner_field(characteristic_matrix(states::density_of(states::nonpolar_cat(nn, beta))), grid);
        for (int it = 0; it < grid.n_theta(); ++it)
            for (int ip = 0; ip < grid.n_phi(); ++ip)
                CHECK(std::abs(f.values(it, ip) -
                               nonpolar_cat_wigner(nn, beta, grid.theta[it], grid.phi[ip])) < 1e-9);
    }
}

TEST_CASE("nonpolar cat at beta = pi/2 is the polar cat rotated about y") {
    const int n = 5;
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> td(0.05, M_PI - 0.05), pd(0.0, 2.0 * M_PI);
    for (int rep = 0; rep < 40; ++rep) {
        const double theta = td(rng), phi = pd(rng);
        const double x = std::sin(theta) * std::cos(phi);
        const double y = std::sin(theta) * std::sin(phi);
        const double z = std::cos(theta);
        // rotate the +-x lobes onto the +-z poles
        const double xr = -z, yr = y, zr = x;
        const double theta_r = std::acos(std::clamp(zr, -1.0, 1.0));
        const double phi_r = std::atan2(yr, xr);
        CHECK(nonpolar_cat_wigner(n, M_PI / 2, theta, phi) ==
              doctest::Approx(polar_cat_wigner(n, theta_r, phi_r)).epsilon(1e-9).scale(1.0));
    }

    // beta -> 0 goes over into a single mostly-positive coherent lobe
    const auto grid = default_grid(5, 2);
    const auto f = wigner_field(nonpolar_cat_characteristic(5, 0.0), grid);
    CHECK(f.integral() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(f.values.maxCoeff() > 0.0);
    CHECK(f.values.minCoeff() > -0.05 * f.values.maxCoeff());
}

TEST_CASE("operator fields and the product rule") {
    // A = identity integrates Tr(rho I) = 1 through the product rule
    const int n = 4;
    const auto grid = default_grid(n);
    const auto rho = states::density_of(states::coherent_state(n, M_PI / 3, 0.0));
    const auto w_rho = wigner_field(characteristic_matrix(rho), grid);
    const auto w_id = operator_wigner(Eigen::MatrixXcd::Identity(n + 1, n + 1), grid);
    CHECK(w_id.imag_part.values.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(product_rule_expectation(w_rho, w_id.real_part) == doctest::Approx(1.0).epsilon(1e-10));

    const auto ops = states::spin_operators(n);
    const auto w_jx = operator_wigner(ops.jx, grid);
    CHECK(product_rule_expectation(w_rho, w_jx.real_part) ==
          doctest::Approx(0.5 * n * std::sin(M_PI / 3)).epsilon(1e-9));
    const auto w_jz = operator_wigner(ops.jz, grid);
    CHECK(product_rule_expectation(w_rho, w_jz.real_part) ==
          doctest::Approx(-0.5 * n * std::cos(M_PI / 3)).epsilon(1e-9));

    // polar cat: <Jz> = 0
    const auto w_cat = wigner_field(characteristic_matrix(states::density_of(states::polar_cat(5))),
                                    default_grid(5));
    const auto w_jz5 = operator_wigner(states::spin_operators(5).jz, default_grid(5));
    CHECK(std::abs(product_rule_expectation(w_cat, w_jz5.real_part)) < 1e-10);

    // Jz field for one atom is proportional to cos(theta)
    const auto g1 = default_grid(1, 3);
    const auto w1 = operator_wigner(states::spin_operators(1).jz, g1);
    for (int it = 0; it < g1.n_theta(); ++it) {
        const double ratio = w1.real_part.values(it, 0) / std::cos(g1.theta[it]);
        CHECK(ratio == doctest::Approx(w1.real_part.values(0, 0) / std::cos(g1.theta[0]))
                           .epsilon(1e-10));
    }

    // product rule vs matrix traces on random states
    std::mt19937 rng(7);
    for (int nn : {2, 5, 8}) {
        const auto opsn = states::spin_operators(nn);
        const auto gridn = default_grid(nn);
        const Eigen::MatrixXcd jz2 = opsn.jz * opsn.jz;
        const Eigen::MatrixXcd mats[] = {opsn.jx, opsn.jy, opsn.jz, jz2};
        for (int rep = 0; rep < 3; ++rep) {
            const auto rhon = states::density_of(random_pure(nn, rng));
            const auto wr = wigner_field(characteristic_matrix(rhon), gridn);
            for (const auto& a : mats) {
                const auto wa = operator_wigner(a, gridn);
                const double expect = states::expectation(a, rhon).real();
                CHECK(product_rule_expectation(wr, wa.real_part) ==
                      doctest::Approx(expect).epsilon(1e-9).scale(1.0));
            }
        }
    }

    // mismatched grids are rejected
    const auto other = wigner_field(characteristic_matrix(rho), default_grid(n, 2));
    CHECK_THROWS_AS(product_rule_expectation(w_rho, other), std::invalid_argument);
    // grid too coarse for the degree-4j integrand
    const auto coarse = sphere_grid(n + 1, n + 1);
    const auto wc = wigner_field(characteristic_matrix(rho), coarse);
    CHECK_THROWS_AS(product_rule_expectation(wc, wc), ResolutionError);
}

TEST_CASE("non-classicality measure") {
    // constant positive field
    states::DensityMatrix mixed;
    mixed.n_atoms = 5;
    mixed.elements = Eigen::MatrixXcd::Identity(6, 6) / 6.0;
    CHECK(nonclassicality(wigner_field(characteristic_matrix(mixed), default_grid(5, 4))) == 0.0);

    // thermal diagonal state (classical mixture)
    states::DensityMatrix thermal;
    thermal.n_atoms = 5;
    thermal.elements = Eigen::MatrixXcd::Zero(6, 6);
    double norm = 0.0;
    for (int i = 0; i < 6; ++i) norm += std::pow(0.5, i);
    for (int i = 0; i < 6; ++i) thermal.elements(i, i) = std::pow(0.5, i) / norm;
    CHECK(nonclassicality(wigner_field(characteristic_matrix(thermal), default_grid(5, 4))) == 0.0);

    // polar cat, N = 5: regression value from the oversampled quadrature
    const auto chi = characteristic_matrix(states::density_of(states::polar_cat(5)));
    CHECK(nonclassicality_converged(chi) == doctest::Approx(0.524900).epsilon(0).scale(0).epsilon(2e-4));
}

TEST_CASE("section minimum of evolving-cat fields") {
    const int n = 5;
    const auto chi = characteristic_matrix(states::density_of(states::polar_cat(n)));
    const double mn = min_section(chi, n);
    CHECK(mn < 0.0);

    // matches a dense scan of the closed form on the phi = pi/N section,
    // and is never above the best full-field grid value
    double scan_min = 1e300;
    for (int s = 0; s <= 20000; ++s)
        scan_min = std::min(scan_min, polar_cat_wigner(n, M_PI * s / 20000, M_PI / n));
    CHECK(mn == doctest::Approx(scan_min).epsilon(1e-6));
    const auto f = wigner_field(chi, sphere_grid(160, 20 * n));
    CHECK(mn <= f.values.minCoeff() + 1e-12);

    // thermal diagonal: strictly positive field
    states::DensityMatrix thermal;
    thermal.n_atoms = n;
    thermal.elements = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    double norm = 0.0;
    for (int i = 0; i <= n; ++i) norm += std::pow(0.4, i);
    for (int i = 0; i <= n; ++i) thermal.elements(i, i) = std::pow(0.4, i) / norm;
    CHECK(min_section(characteristic_matrix(thermal), n) > 0.0);

    // corner zeroed: phi-independent field; minimum must match a dense
    // pointwise oracle scan
    auto chi0 = chi;
    chi0.at(n, n) = 0.0;
    chi0.at(n, -n) = 0.0;
    double scan0 = 1e300;
    for (int s = 0; s <= 20000; ++s)
        scan0 = std::min(scan0, field_value(chi0, M_PI * s / 20000, 0.0));
    CHECK(min_section(chi0, n) == doctest::Approx(scan0).epsilon(1e-6).scale(1.0));

    // a state without the sparsity pattern is rejected
    const auto chi_coh = characteristic_matrix(states::density_of(states::coherent_state(n, 1.0, 0.7)));
    CHECK_THROWS_AS(min_section(chi_coh, n), std::invalid_argument);
}

TEST_CASE("C_N symmetry of the polar-cat field") {
    const int n = 5;
    const auto chi = characteristic_matrix(states::density_of(states::polar_cat(n)));
    const auto grid = sphere_grid(n + 3, 4 * n);  // phi grid commensurate with 2pi/N
    const auto f = wigner_field(chi, grid);
    for (int it = 0; it < grid.n_theta(); ++it)
        for (int ip = 0; ip < grid.n_phi(); ++ip)
            CHECK(std::abs(f.values(it, ip) - f.values(it, (ip + 4) % grid.n_phi())) < 1e-10);
}
