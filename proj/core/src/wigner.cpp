#include "spincat/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spincat/errors.hpp"
#include "spincat/specfun.hpp"

namespace spincat::wigner {

using specfun::HalfInt;
using std::complex;

namespace {

int parity_sign(int k) { return (((k % 2) + 2) % 2 == 0) ? 1 : -1; }

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
void gauss_legendre(int n, Eigen::VectorXd& x, Eigen::VectorXd& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        double xi = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = xi;
            if (n == 1) p1 = xi;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double pn = (n == 1) ? xi : p1;
            const double pn1 = (n == 1) ? 1.0 : p0;
            dp = n * (xi * pn - pn1) / (xi * xi - 1.0);
            const double dx = pn / dp;
            xi -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        x[i] = xi;
        w[i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
    }
}

void check_field_grid(int n_atoms, const SphereGrid& grid, const char* who) {
    // synthesis needs degree 2j = N: n_theta >= j+1, n_phi >= 2j+1
    if (2 * grid.n_theta() < n_atoms + 2 || grid.n_phi() < n_atoms + 1)
        throw ResolutionError(std::string(who) + ": grid too coarse for degree N harmonics");
}

// Complex synthesis of a characteristic matrix on a grid.
void synthesize(const CharacteristicMatrix& chi, const SphereGrid& grid, Eigen::MatrixXd& re,
                Eigen::MatrixXd& im) {
    const int n = chi.n_atoms;
    const int n_theta = grid.n_theta(), n_phi = grid.n_phi();
    const double pref = std::sqrt((n + 1.0) / (4.0 * M_PI));
    re.resize(n_theta, n_phi);
    im.resize(n_theta, n_phi);

    // phase table e^(i Q phi)
    Eigen::MatrixXcd phase(2 * n + 1, n_phi);
    for (int q = -n; q <= n; ++q)
        for (int ip = 0; ip < n_phi; ++ip) phase(q + n, ip) = std::polar(1.0, q * grid.phi[ip]);

    std::vector<complex<double>> sq(static_cast<std::size_t>(2 * n + 1));
    for (int it = 0; it < n_theta; ++it) {
        const double theta = grid.theta[it];
        for (int q = -n; q <= n; ++q) {
            const auto pbar = specfun::normalized_legendre(n, std::abs(q), theta);
            complex<double> acc = 0.0;
            for (int k = std::abs(q); k <= n; ++k) acc += chi.at(k, q) * pbar[k];
            if (q < 0) acc *= parity_sign(q);
            sq[static_cast<std::size_t>(q + n)] = acc;
        }
        for (int ip = 0; ip < n_phi; ++ip) {
            complex<double> w = 0.0;
            for (int q = -n; q <= n; ++q) w += sq[static_cast<std::size_t>(q + n)] * phase(q + n, ip);
            re(it, ip) = pref * w.real();
            im(it, ip) = pref * w.imag();
        }
    }
}

CharacteristicMatrix transform_matrix(const Eigen::MatrixXcd& a) {
    const int dim = static_cast<int>(a.rows());
    if (a.cols() != dim || dim < 1) throw std::invalid_argument("characteristic: square matrix required");
    const int n = dim - 1;
    const HalfInt j = HalfInt::from_twice(n);

    CharacteristicMatrix chi;
    chi.n_atoms = n;
    chi.coeffs.assign(static_cast<std::size_t>(dim) * dim, 0.0);

    for (int q = -n; q <= n; ++q) {
        // band rho_{m, m-Q}: row index i = j+m from max(0, q) to min(n, n+q)
        bool any = false;
        for (int i = std::max(0, q); i <= std::min(n, n + q); ++i)
            if (a(i, i - q) != 0.0) {
                any = true;
                break;
            }
        if (!any) continue;
        for (int i = std::max(0, q); i <= std::min(n, n + q); ++i) {
            const complex<double> elem = a(i, i - q);
            if (elem == 0.0) continue;
            const HalfInt m = HalfInt::from_twice(2 * i - n);
            // (K j j / Q, m-Q, -m) row over K, an even permutation of
            // (j K j / -m, Q, m-Q)
            const auto row = specfun::wigner3j_row(j, j, m - HalfInt::whole(q), -m);
            const int sign = parity_sign((n - (2 * i - n)) / 2);  // (-1)^(j-m)
            for (int k = std::max(std::abs(q), (row.l1_min.twice + 1) / 2); k <= n; ++k) {
                const double w3 = row.at(HalfInt::whole(k));
                if (w3 == 0.0) continue;
                chi.at(k, q) += std::sqrt(2.0 * k + 1.0) * sign * w3 * elem;
            }
        }
    }
    return chi;
}

}  // namespace

SphereGrid sphere_grid(int n_theta, int n_phi) {
    if (n_theta < 1 || n_phi < 1) throw std::domain_error("sphere_grid: need at least one node");
    SphereGrid grid;
    Eigen::VectorXd x;
    gauss_legendre(n_theta, x, grid.theta_weight);
    grid.theta.resize(n_theta);
    for (int i = 0; i < n_theta; ++i) grid.theta[i] = std::acos(std::clamp(x[i], -1.0, 1.0));
    grid.phi.resize(n_phi);
    for (int i = 0; i < n_phi; ++i) grid.phi[i] = 2.0 * M_PI * i / n_phi;
    grid.phi_weight = 2.0 * M_PI / n_phi;
    return grid;
}

SphereGrid default_grid(int n_atoms, int oversample) {
    if (oversample < 1) throw std::domain_error("default_grid: oversample must be positive");
    return sphere_grid(oversample * (n_atoms + 1), oversample * (2 * n_atoms + 1));
}

double SphereField::integral() const {
    double acc = 0.0;
    for (int it = 0; it < grid.n_theta(); ++it)
        acc += grid.theta_weight[it] * values.row(it).sum();
    return acc * grid.phi_weight;
}

Eigen::MatrixXcd tensor_operator(int n_atoms, int k, int q) {
    if (n_atoms < 1) throw std::domain_error("tensor_operator: need at least one atom");
    if (k < 0 || k > n_atoms) throw std::domain_error("tensor_operator: K must lie in [0, 2j]");
    if (std::abs(q) > k) throw std::domain_error("tensor_operator: |Q| <= K required");
    const int dim = n_atoms + 1;
    const HalfInt j = HalfInt::from_twice(n_atoms);
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = std::max(0, q); i <= std::min(n_atoms, n_atoms + q); ++i) {
        const HalfInt m = HalfInt::from_twice(2 * i - n_atoms);
        const double w3 =
            specfun::wigner3j(j, HalfInt::whole(k), j, -m, HalfInt::whole(q), m - HalfInt::whole(q));
        t(i, i - q) = parity_sign((n_atoms - m.twice) / 2) * std::sqrt(2.0 * k + 1.0) * w3;
    }
    return t;
}

CharacteristicMatrix characteristic_matrix(const states::DensityMatrix& rho) {
    return transform_matrix(rho.elements);
}

CharacteristicMatrix characteristic_of_operator(const Eigen::MatrixXcd& a) {
    return transform_matrix(a);
}

SphereField wigner_field(const CharacteristicMatrix& chi, const SphereGrid& grid) {
    check_field_grid(chi.n_atoms, grid, "wigner_field");
    Eigen::MatrixXd re, im;
    synthesize(chi, grid, re, im);
    const double scale = std::max(1.0, re.cwiseAbs().maxCoeff());
    if (im.cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw std::invalid_argument("wigner_field: non-Hermitian input (imaginary residue)");
    return SphereField{chi.n_atoms, grid, std::move(re)};
}

OperatorField operator_wigner(const Eigen::MatrixXcd& a, const SphereGrid& grid) {
    const auto chi = characteristic_of_operator(a);
    check_field_grid(chi.n_atoms, grid, "operator_wigner");
    Eigen::MatrixXd re, im;
    synthesize(chi, grid, re, im);
    return OperatorField{SphereField{chi.n_atoms, grid, std::move(re)},
                         SphereField{chi.n_atoms, grid, std::move(im)}};
}

double product_rule_expectation(const SphereField& w_rho, const SphereField& w_a) {
    if (w_rho.n_atoms != w_a.n_atoms) throw std::invalid_argument("product rule: atom counts differ");
    const SphereGrid& g = w_rho.grid;
    const SphereGrid& h = w_a.grid;
    if (g.n_theta() != h.n_theta() || g.n_phi() != h.n_phi() ||
        (g.theta - h.theta).cwiseAbs().maxCoeff() > 1e-14)
        throw std::invalid_argument("product rule: grids differ");
    const int n = w_rho.n_atoms;
    // the integrand has harmonic degree up to 4j = 2N
    if (2 * g.n_theta() - 2 < 2 * n || g.n_phi() - 1 < 2 * n)
        throw ResolutionError("product rule: grid not exact to degree 4j");
    double acc = 0.0;
    for (int it = 0; it < g.n_theta(); ++it)
        acc += g.theta_weight[it] * (w_rho.values.row(it).cwiseProduct(w_a.values.row(it))).sum();
    acc *= g.phi_weight;
    return acc * 4.0 * M_PI / (n + 1.0);
}

double polar_cat_wigner(int n_atoms, double theta, double phi) {
    if (n_atoms < 1) throw std::domain_error("polar_cat_wigner: need at least one atom");
    const int n = n_atoms;
    const auto p_north = specfun::normalized_legendre(n, 0, theta);
    const auto p_south = specfun::normalized_legendre(n, 0, M_PI - theta);
    double lobes = 0.0;
    for (int l = 0; l <= n; ++l) {
        const double coef = std::sqrt(2.0 * l + 1.0) *
                            std::exp(specfun::ln_factorial(n) -
                                     0.5 * (specfun::ln_factorial(n - l) +
                                            specfun::ln_factorial(n + l + 1)));
        lobes += coef * (p_north[l] + p_south[l]);
    }
    const double ridge_coef = std::exp(0.5 * specfun::ln_factorial(2 * n + 1) -
                                       0.5 * std::log(4.0 * M_PI) - n * std::log(2.0) -
                                       specfun::ln_factorial(n));
    const double ridge =
        2.0 * ridge_coef * std::pow(std::sin(theta), n) * std::cos(n * phi);
    return 0.5 * std::sqrt((n + 1.0) / (4.0 * M_PI)) * (lobes + ridge);
}

CharacteristicMatrix nonpolar_cat_characteristic(int n_atoms, double beta) {
    if (n_atoms < 1) throw std::domain_error("nonpolar_cat_characteristic: need at least one atom");
    if (beta < 0.0 || beta > M_PI)
        throw std::domain_error("nonpolar_cat_characteristic: beta outside [0, pi]");
    const int n = n_atoms;
    const HalfInt j = HalfInt::from_twice(n);
    const double sh = std::sin(0.5 * beta), ch = std::cos(0.5 * beta);
    const double ln_sh = sh > 0.0 ? std::log(sh) : 0.0;
    const double ln_ch = ch > 0.0 ? std::log(ch) : 0.0;
    const double denom = 2.0 * (1.0 + std::pow(std::cos(beta), n));
    if (denom <= 1e-14)
        throw std::domain_error("nonpolar_cat_characteristic: degenerate superposition");

    CharacteristicMatrix chi;
    chi.n_atoms = n;
    chi.coeffs.assign(static_cast<std::size_t>(n + 1) * (n + 1), 0.0);

    for (int q = -n; q <= n; ++q) {
        // m runs where all four factorial arguments are non-negative
        for (int i = std::max(0, -q); i <= std::min(n, n - q); ++i) {
            const int up = i;        // j + m
            const int down = n - i;  // j - m
            const int up_q = up + q;
            const int down_q = down - q;
            const int phases = parity_sign(down - q) + parity_sign(n + up) + parity_sign(n) +
                               parity_sign(n - q);
            if (phases == 0) continue;
            const int e_sin = 2 * up + q;
            const int e_cos = 2 * down - q;
            if ((sh == 0.0 && e_sin > 0) || (ch == 0.0 && e_cos > 0)) continue;
            const double ln_mag = specfun::ln_factorial(n) -
                                  0.5 * (specfun::ln_factorial(up) + specfun::ln_factorial(down) +
                                         specfun::ln_factorial(up_q) + specfun::ln_factorial(down_q)) +
                                  e_sin * ln_sh + e_cos * ln_ch;
            const double amp = phases * std::exp(ln_mag) / denom;
            const HalfInt m = HalfInt::from_twice(2 * i - n);
            // (K j j / Q, m, -m-Q) row over K, an even permutation of
            // (j K j / -m-Q, Q, m)
            const auto row = specfun::wigner3j_row(j, j, m, -m - HalfInt::whole(q));
            for (int k = std::abs(q); k <= n; ++k) {
                const double w3 = row.at(HalfInt::whole(k));
                if (w3 == 0.0) continue;
                chi.at(k, q) += std::sqrt(2.0 * k + 1.0) * amp * w3;
            }
        }
    }
    return chi;
}

double field_value(const CharacteristicMatrix& chi, double theta, double phi) {
    const int n = chi.n_atoms;
    complex<double> acc = 0.0;
    for (int q = -n; q <= n; ++q) {
        const auto pbar = specfun::normalized_legendre(n, std::abs(q), theta);
        complex<double> sq = 0.0;
        for (int k = std::abs(q); k <= n; ++k) sq += chi.at(k, q) * pbar[k];
        if (q < 0) sq *= parity_sign(q);
        acc += sq * std::polar(1.0, q * phi);
    }
    const double w = std::sqrt((n + 1.0) / (4.0 * M_PI));
    if (std::abs(acc.imag()) > 1e-10 * std::max(1.0, std::abs(acc.real())))
        throw std::invalid_argument("field_value: non-Hermitian characteristic matrix");
    return w * acc.real();
}

double nonpolar_cat_wigner(int n_atoms, double beta, double theta, double phi) {
    return field_value(nonpolar_cat_characteristic(n_atoms, beta), theta, phi);
}

double nonclassicality(const SphereField& field) {
    const double max_abs = field.values.cwiseAbs().maxCoeff();
    const double min_w = field.values.minCoeff();
    if (min_w > -1e-9 * max_abs) return 0.0;  // quadrature-scale noise floor
    double i_minus = 0.0;
    for (int it = 0; it < field.grid.n_theta(); ++it)
        for (int ip = 0; ip < field.grid.n_phi(); ++ip)
            if (field.values(it, ip) < 0.0)
                i_minus -= field.grid.weight(it, ip) * field.values(it, ip);
    return 2.0 * i_minus / (2.0 * i_minus + 1.0);
}

double nonclassicality_converged(const CharacteristicMatrix& chi) {
    double prev = 0.0;
    bool have_prev = false;
    for (int oversample = 4; oversample <= 256; oversample *= 2) {
        const double nu = nonclassicality(wigner_field(chi, default_grid(chi.n_atoms, oversample)));
        if (have_prev && std::abs(nu - prev) < 1e-6) return nu;
        prev = nu;
        have_prev = true;
    }
    throw ResolutionError("nonclassicality: nu did not converge under oversampling");
}

namespace {

struct SectionCurve {
    // W on the phi = pi/N section is pref * (sum_K a_K Pbar_K0 + ridge * Pbar_NN);
    // on phi = 0 the ridge term flips sign.
    const CharacteristicMatrix& chi;
    double pref;
    double ridge;  // -2 Re(rho_NN)

    double operator()(double theta, int ridge_sign) const {
        const int n = chi.n_atoms;
        const auto p0 = specfun::normalized_legendre(n, 0, theta);
        double acc = 0.0;
        for (int k = 0; k <= n; ++k) acc += chi.at(k, 0).real() * p0[k];
        const double pnn = specfun::normalized_legendre(n, n, theta)[n];
        return pref * (acc + ridge_sign * ridge * pnn);
    }
};

}  // namespace

SectionStats evolving_cat_section_stats(const CharacteristicMatrix& chi) {
    const int n = chi.n_atoms;
    double max_abs = 0.0, off_pattern = 0.0;
    for (int k = 0; k <= n; ++k)
        for (int q = -k; q <= k; ++q) {
            const double mag = std::abs(chi.at(k, q));
            max_abs = std::max(max_abs, mag);
            if (q != 0 && !(k == n && std::abs(q) == n)) off_pattern = std::max(off_pattern, mag);
        }
    if (off_pattern > 1e-12)
        throw std::invalid_argument(
            "min_section: characteristic matrix lacks the polar-cat sparsity pattern; "
            "use a full-field minimum instead");

    SectionCurve curve{chi, std::sqrt((n + 1.0) / (4.0 * M_PI)),
                       -2.0 * chi.at(n, n).real()};

    const int samples = std::max(32 * n, 128);
    SectionStats stats;
    stats.min_w = 1e300;
    int arg_min = 0;
    for (int s = 0; s <= samples; ++s) {
        const double theta = M_PI * s / samples;
        const double w_min_section = curve(theta, +1);
        const double w_other = curve(theta, -1);
        stats.max_abs_w =
            std::max({stats.max_abs_w, std::abs(w_min_section), std::abs(w_other)});
        if (w_min_section < stats.min_w) {
            stats.min_w = w_min_section;
            arg_min = s;
        }
    }

    // golden-section refinement around the minimum node
    double a = M_PI * std::max(0, arg_min - 1) / samples;
    double b = M_PI * std::min(samples, arg_min + 1) / samples;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = curve(x1, +1), f2 = curve(x2, +1);
    for (int it = 0; it < 200; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = curve(x1, +1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = curve(x2, +1);
        }
        if (std::abs(f1 - f2) < 1e-10 * std::max(1.0, std::abs(f1)) && (b - a) < 1e-8) break;
    }
    stats.min_w = std::min({stats.min_w, f1, f2});
    stats.max_abs_w = std::max(stats.max_abs_w, std::abs(stats.min_w));
    return stats;
}

double min_section(const CharacteristicMatrix& chi, int n_atoms) {
    if (chi.n_atoms != n_atoms) throw std::invalid_argument("min_section: atom count mismatch");
    return evolving_cat_section_stats(chi).min_w;
}

}  // namespace spincat::wigner
