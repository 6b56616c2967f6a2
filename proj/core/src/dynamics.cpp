#include "spincat/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "chebyshev.hpp"
#include "dopri5.hpp"
#include "spincat/errors.hpp"
#include "spincat/specfun.hpp"

namespace spincat::dynamics {

using specfun::HalfInt;
using std::complex;

namespace {

constexpr double kInvE = 0.36787944117144233;  // 1/e

// Tridiagonal coefficients of one diagonal band m - l = d (m = l + d).
// Applied independently to each contiguous block of the state vector, so a
// complex band travels as [re; im].
struct BandSystem {
    Eigen::VectorXd loss, lo, hi;
    int block = 0;

    void operator()(double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) const {
        const int blocks = static_cast<int>(y.size()) / block;
        for (int b = 0; b < blocks; ++b) {
            const int off = b * block;
            for (int k = 0; k < block; ++k) {
                double v = -loss[k] * y[off + k];
                if (k > 0) v += lo[k] * y[off + k - 1];
                if (k + 1 < block) v += hi[k] * y[off + k + 1];
                dy[off + k] = v;
            }
        }
    }
};

BandSystem band_system(int n_atoms, double nbar, int d) {
    const double j = 0.5 * n_atoms;
    const double jj = j * (j + 1.0);
    const int len = n_atoms + 1 - d;
    BandSystem sys;
    sys.block = len;
    sys.loss.resize(len);
    sys.lo.resize(len);
    sys.hi.resize(len);
    for (int k = 0; k < len; ++k) {
        const double l = -j + k;
        const double m = l + d;
        sys.loss[k] = 0.5 * (nbar * (2.0 * jj - m * (m + 1.0) - l * (l + 1.0)) +
                             (nbar + 1.0) * (2.0 * jj - m * (m - 1.0) - l * (l - 1.0)));
        sys.lo[k] = nbar * std::sqrt((jj - m * (m - 1.0)) * (jj - l * (l - 1.0)));
        sys.hi[k] = (nbar + 1.0) * std::sqrt((jj - m * (m + 1.0)) * (jj - l * (l + 1.0)));
    }
    return sys;
}

double corner_rate(int n_atoms, BathParams bath) {
    return 0.5 * n_atoms * (2.0 * bath.nbar + 1.0);
}

Eigen::VectorXd integrate_diagonal(const BandSystem& sys, Eigen::VectorXd y, double t0, double t1,
                                   const IntegratorOptions& opts,
                                   std::span<const double> samples,
                                   const std::function<void(double, const Eigen::VectorXd&)>& obs) {
    detail::Tolerances tol{opts.rel_tol, opts.abs_tol};
    detail::dopri5_integrate(sys, y, t0, t1, tol, samples,
                             [&](double t, const Eigen::VectorXd& v) {
                                 if (obs) obs(t, v);
                             });
    return y;
}

void check_trace_invariants(const EvolutionTrace& trace) {
    for (std::size_t s = 0; s < trace.times.size(); ++s) {
        const double sum = trace.diagonals.col(static_cast<Eigen::Index>(s)).sum();
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::runtime_error("evolution trace lost probability (sum of rho_mm drifted)");
        if (trace.diagonals.col(static_cast<Eigen::Index>(s)).minCoeff() < -1e-10)
            throw std::runtime_error("evolution trace produced a negative population");
        if (std::abs(trace.corner[s]) > 0.5 + 1e-12)
            throw std::runtime_error("evolution trace corner coherence exceeded 1/2");
    }
}

// Core trace builder: diagonal integrated numerically, corner attached
// analytically.
EvolutionTrace build_trace(int n_atoms, BathParams bath, const Eigen::VectorXd& diag0,
                           complex<double> corner0, double horizon,
                           const std::vector<double>& sample_times, const EvolveOptions& opts) {
    EvolutionTrace trace;
    trace.n_atoms = n_atoms;
    trace.bath = bath;
    trace.integrator = opts.integrator;
    trace.times = sample_times;
    const auto n_samples = static_cast<Eigen::Index>(sample_times.size());
    trace.diagonals.resize(n_atoms + 1, n_samples);
    trace.corner.resize(sample_times.size());
    trace.energy.resize(sample_times.size());

    const auto sys = band_system(n_atoms, bath.nbar, 0);
    Eigen::Index col = 0;
    integrate_diagonal(sys, diag0, 0.0, horizon, opts.integrator, sample_times,
                       [&](double, const Eigen::VectorXd& y) { trace.diagonals.col(col++) = y; });
    if (col != n_samples) throw std::runtime_error("evolution trace missed sample times");

    const double rate = corner_rate(n_atoms, bath);
    for (std::size_t s = 0; s < sample_times.size(); ++s) {
        trace.corner[s] = corner0 * std::exp(-rate * sample_times[s]);
        trace.energy[s] = energy(trace.diagonals.col(static_cast<Eigen::Index>(s)));
    }
    check_trace_invariants(trace);
    return trace;
}

std::vector<double> uniform_times(double horizon, int n_samples) {
    if (n_samples < 2) throw std::domain_error("need at least two samples");
    std::vector<double> ts(static_cast<std::size_t>(n_samples));
    for (int s = 0; s < n_samples; ++s)
        ts[static_cast<std::size_t>(s)] = horizon * s / (n_samples - 1);
    ts.back() = horizon;
    return ts;
}

// first crossing of |E - E_inf| below gap/e on the sampled trace; nullopt if
// the trace never gets there
std::optional<std::size_t> crossing_index(const EvolutionTrace& trace) {
    const double e_inf = stationary_energy(trace.n_atoms, trace.bath);
    const double gap = std::abs(trace.energy.front() - e_inf);
    if (gap <= 0.0) return std::nullopt;
    const double target = gap * kInvE;
    for (std::size_t s = 1; s < trace.times.size(); ++s)
        if (std::abs(trace.energy[s] - e_inf) <= target) return s;
    return std::nullopt;
}

// Catmull-Rom interpolation of g over the four samples around the bracket,
// used to seed the re-integration refinement.
double cubic_seed(const std::vector<double>& ts, const std::vector<double>& gs, std::size_t hi) {
    const std::size_t lo = hi - 1;
    std::vector<std::size_t> idx;
    if (lo > 0) idx.push_back(lo - 1);
    idx.push_back(lo);
    idx.push_back(hi);
    if (hi + 1 < ts.size()) idx.push_back(hi + 1);
    // bisection on the Lagrange interpolant through the distinct nodes
    auto interp = [&](double t) {
        double acc = 0.0;
        for (std::size_t a = 0; a < idx.size(); ++a) {
            double term = gs[idx[a]];
            for (std::size_t b = 0; b < idx.size(); ++b) {
                if (a == b) continue;
                term *= (t - ts[idx[b]]) / (ts[idx[a]] - ts[idx[b]]);
            }
            acc += term;
        }
        return acc;
    };
    double a = ts[lo], b = ts[hi];
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (a + b);
        (interp(mid) > 0.0 ? a : b) = mid;
    }
    return 0.5 * (a + b);
}

double auto_horizon(int n_atoms, BathParams bath, const Eigen::VectorXd& diag0,
                    const EvolveOptions& opts) {
    const double e_inf = stationary_energy(n_atoms, bath);
    const double gap = std::abs(energy(diag0) - e_inf);
    if (gap <= 1e-14 * std::max(1.0, std::abs(e_inf)))
        throw HorizonError("cannot size the horizon automatically: energy starts stationary");
    const double target = gap * kInvE;
    const auto sys = band_system(n_atoms, bath.nbar, 0);
    double horizon = 8.0 * t_dec(n_atoms, bath);
    for (int attempt = 0; attempt < 60; ++attempt) {
        const auto ts = uniform_times(horizon, 129);
        double t_prev = 0.0, g_prev = gap - target;
        double found = -1.0;
        integrate_diagonal(sys, diag0, 0.0, horizon, opts.integrator, ts,
                           [&](double t, const Eigen::VectorXd& y) {
                               if (found >= 0.0) return;
                               const double g = std::abs(energy(y) - e_inf) - target;
                               if (g <= 0.0 && t > 0.0) {
                                   const double w = g_prev / (g_prev - g);
                                   found = t_prev + w * (t - t_prev);
                               }
                               t_prev = t;
                               g_prev = g;
                           });
        if (found > 0.0) return opts.horizon_factor * found;
        horizon *= 2.0;
    }
    throw HorizonError("energy relaxation not reached within the horizon search budget");
}

void insert_sample(EvolutionTrace& trace, double t) {
    if (t <= 0.0 || t >= trace.times.back()) return;
    const auto pos = std::lower_bound(trace.times.begin(), trace.times.end(), t);
    const double spacing = trace.times.back() * 1e-9;
    if (pos != trace.times.end() && std::abs(*pos - t) < spacing) return;
    if (pos != trace.times.begin() && std::abs(*(pos - 1) - t) < spacing) return;

    const Eigen::VectorXd diag = trace.diagonal_at(t);
    const auto idx = static_cast<Eigen::Index>(pos - trace.times.begin());
    EvolutionTrace& tr = trace;
    const Eigen::Index n_cols = tr.diagonals.cols();
    Eigen::MatrixXd diags(tr.diagonals.rows(), n_cols + 1);
    diags << tr.diagonals.leftCols(idx), diag, tr.diagonals.rightCols(n_cols - idx);
    tr.diagonals = std::move(diags);
    tr.times.insert(tr.times.begin() + idx, t);
    tr.corner.insert(tr.corner.begin() + idx, tr.corner.front() * std::exp(-corner_rate(tr.n_atoms, tr.bath) * t));
    tr.energy.insert(tr.energy.begin() + idx, energy(diag));
}

std::optional<double> locate_t_diss(const EvolutionTrace& trace) {
    const auto hit = crossing_index(trace);
    if (!hit) return std::nullopt;
    const double e_inf = stationary_energy(trace.n_atoms, trace.bath);
    const double gap = std::abs(trace.energy.front() - e_inf);
    const double target = gap * kInvE;

    std::vector<double> g(trace.energy.size());
    for (std::size_t s = 0; s < g.size(); ++s) g[s] = std::abs(trace.energy[s] - e_inf) - target;

    const std::size_t hi = *hit;
    double a = trace.times[hi - 1], b = trace.times[hi];
    if (g[hi] == 0.0) return trace.times[hi];

    const double seed = cubic_seed(trace.times, g, hi);
    auto g_at = [&](double t) {
        return std::abs(energy(trace.diagonal_at(t)) - e_inf) - target;
    };
    if (seed > a && seed < b) {
        (g_at(seed) > 0.0 ? a : b) = seed;
    }
    while (b - a > 1e-6 * 0.5 * (a + b)) {
        const double mid = 0.5 * (a + b);
        (g_at(mid) > 0.0 ? a : b) = mid;
    }
    return 0.5 * (a + b);
}

}  // namespace

Eigen::VectorXd EvolutionTrace::diagonal_at(double t) const {
    if (times.empty()) throw std::invalid_argument("empty trace");
    if (t < times.front()) throw std::invalid_argument("time precedes the trace origin");
    auto pos = std::upper_bound(times.begin(), times.end(), t);
    const auto idx = static_cast<std::size_t>(pos - times.begin()) - 1;
    Eigen::VectorXd y = diagonals.col(static_cast<Eigen::Index>(idx));
    if (t == times[idx]) return y;
    const auto sys = band_system(n_atoms, bath.nbar, 0);
    detail::Tolerances tol{integrator.rel_tol, integrator.abs_tol};
    detail::dopri5_integrate(sys, y, times[idx], t, tol, {}, [](double, const Eigen::VectorXd&) {});
    return y;
}

complex<double> EvolutionTrace::corner_at(double t) const {
    if (corner.empty()) throw std::invalid_argument("empty trace");
    return corner.front() * std::exp(-corner_rate(n_atoms, bath) * (t - times.front()));
}

states::DensityMatrix master_rhs(const states::DensityMatrix& rho, BathParams bath) {
    const int n = rho.n_atoms;
    const int dim = n + 1;
    const double j = 0.5 * n;
    const double jj = j * (j + 1.0);
    const double nb = bath.nbar;
    states::DensityMatrix out;
    out.n_atoms = n;
    out.elements.resize(dim, dim);
    for (int i = 0; i < dim; ++i) {
        const double m = -j + i;
        for (int k = 0; k < dim; ++k) {
            const double l = -j + k;
            complex<double> v = -0.5 *
                                (nb * (2.0 * jj - m * (m + 1.0) - l * (l + 1.0)) +
                                 (nb + 1.0) * (2.0 * jj - m * (m - 1.0) - l * (l - 1.0))) *
                                rho.elements(i, k);
            if (i > 0 && k > 0)
                v += nb * std::sqrt((jj - m * (m - 1.0)) * (jj - l * (l - 1.0))) *
                     rho.elements(i - 1, k - 1);
            if (i + 1 < dim && k + 1 < dim)
                v += (nb + 1.0) * std::sqrt((jj - m * (m + 1.0)) * (jj - l * (l + 1.0))) *
                     rho.elements(i + 1, k + 1);
            out.elements(i, k) = v;
        }
    }
    return out;
}

namespace {

EvolutionTrace evolve_from_diagonal(int n, BathParams bath, const Eigen::VectorXd& diag0,
                                    complex<double> corner0, double horizon, int n_samples,
                                    const EvolveOptions& opts) {
    if (n < 1) throw std::domain_error("evolve: need at least one atom");
    if (bath.nbar < 0.0) throw std::domain_error("evolve: nbar must be non-negative");
    const double t_end = horizon > 0.0 ? horizon : auto_horizon(n, bath, diag0, opts);
    EvolutionTrace trace =
        build_trace(n, bath, diag0, corner0, t_end, uniform_times(t_end, n_samples), opts);

    insert_sample(trace, t_dec(n, bath));
    if (const auto td = locate_t_diss(trace)) insert_sample(trace, *td);
    check_trace_invariants(trace);
    return trace;
}

}  // namespace

EvolutionTrace evolve(const states::DensityMatrix& rho0, BathParams bath, double horizon,
                      int n_samples, const EvolveOptions& opts) {
    const int n = rho0.n_atoms;
    if (n < 1) throw std::domain_error("evolve: need at least one atom");
    if (rho0.elements.diagonal().imag().cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("evolve: density matrix diagonal must be real");
    return evolve_from_diagonal(n, bath, rho0.elements.diagonal().real(), rho0.elements(0, n),
                                horizon, n_samples, opts);
}

EvolutionTrace evolve_polar_cat(int n_atoms, BathParams bath, double horizon, int n_samples,
                                const EvolveOptions& opts) {
    if (n_atoms < 1) throw std::domain_error("evolve_polar_cat: need at least one atom");
    Eigen::VectorXd diag0 = Eigen::VectorXd::Zero(n_atoms + 1);
    diag0[0] = 0.5;
    diag0[n_atoms] = 0.5;
    return evolve_from_diagonal(n_atoms, bath, diag0, 0.5, horizon, n_samples, opts);
}

states::DensityMatrix evolve_matrix(const states::DensityMatrix& rho0, BathParams bath, double t,
                                    const IntegratorOptions& opts) {
    const int n = rho0.n_atoms;
    const int dim = n + 1;
    if (t < 0.0) throw std::domain_error("evolve_matrix: negative time");
    states::DensityMatrix out;
    out.n_atoms = n;
    out.elements = Eigen::MatrixXcd::Zero(dim, dim);
    for (int d = 0; d <= n; ++d) {
        const int len = dim - d;
        Eigen::VectorXd y(2 * len);
        bool any = false;
        for (int k = 0; k < len; ++k) {
            const complex<double> v = rho0.elements(k + d, k);
            y[k] = v.real();
            y[len + k] = v.imag();
            if (v != 0.0) any = true;
        }
        if (!any) continue;  // zero diagonals stay zero (bands decouple)
        if (t > 0.0) {
            auto sys = band_system(n, bath.nbar, d);
            sys.block = len;
            // single-element bands decay as pure exponentials; drop the
            // absolute floor so the relative accuracy survives deep decay
            detail::Tolerances tol{opts.rel_tol, len == 1 ? 0.0 : opts.abs_tol};
            detail::dopri5_integrate(sys, y, 0.0, t, tol, {},
                                     [](double, const Eigen::VectorXd&) {});
        }
        for (int k = 0; k < len; ++k) {
            const complex<double> v(y[k], y[len + k]);
            out.elements(k + d, k) = v;
            if (d > 0) out.elements(k, k + d) = std::conj(v);
        }
    }
    return out;
}

double coherence_analytic(int n_atoms, BathParams bath, double t) {
    if (t < 0.0) throw std::domain_error("coherence_analytic: negative time");
    return 0.5 * std::exp(-corner_rate(n_atoms, bath) * t);
}

Eigen::VectorXd stationary_state(int n_atoms, BathParams bath) {
    if (n_atoms < 1) throw std::domain_error("stationary_state: need at least one atom");
    const int dim = n_atoms + 1;
    Eigen::VectorXd p = Eigen::VectorXd::Zero(dim);
    if (bath.nbar == 0.0) {
        p[0] = 1.0;
        return p;
    }
    const double q = bath.nbar / (bath.nbar + 1.0);
    for (int k = 0; k < dim; ++k) p[k] = std::pow(q, k);
    p /= p.sum();
    return p;
}

double stationary_energy(int n_atoms, BathParams bath) {
    const double j = 0.5 * n_atoms;
    if (bath.nbar == 0.0) return -j;
    const double q = bath.nbar / (bath.nbar + 1.0);
    const double n = n_atoms;
    // sum_k k q^k over k = 0..N, normalized by the geometric sum
    const double num = q * (1.0 - (n + 1.0) * std::pow(q, n) + n * std::pow(q, n + 1.0));
    const double den = (1.0 - q) * (1.0 - std::pow(q, n + 1.0));
    return num / den - j;
}

Eigen::MatrixXd zero_temp_cascade(int n_atoms, const std::vector<double>& times) {
    if (n_atoms < 1) throw std::domain_error("zero_temp_cascade: need at least one atom");
    for (double t : times)
        if (t < 0.0) throw std::domain_error("zero_temp_cascade: negative time");
    const int dim = n_atoms + 1;
    const double j = 0.5 * n_atoms;
    const double horizon = times.empty() ? 0.0 : *std::max_element(times.begin(), times.end());
    Eigen::MatrixXd out(dim, static_cast<Eigen::Index>(times.size()));

    // b_m = j(j+1) - m(m-1); index i = j + m
    const auto b_of = [&](int i) {
        const double m = -j + i;
        return j * (j + 1.0) - m * (m - 1.0);
    };

    // top level is explicit
    std::function<double(double)> level = [j](double t) { return 0.5 * std::exp(-2.0 * j * t); };
    if (!times.empty())
        for (std::size_t s = 0; s < times.size(); ++s)
            out(dim - 1, static_cast<Eigen::Index>(s)) = level(times[s]);

    if (horizon <= 0.0) {
        // cascade has not started; populations are the initial polar cat
        for (std::size_t s = 0; s < times.size(); ++s) {
            for (int i = 0; i + 1 < dim; ++i) out(i, static_cast<Eigen::Index>(s)) = 0.0;
            out(0, static_cast<Eigen::Index>(s)) = 0.5;
        }
        out.row(dim - 1).setConstant(0.5);
        return out;
    }

    // geometric panel edges resolving the fastest rate
    const double b_max = j * (j + 1.0) + 1.0;
    std::vector<double> edges;
    {
        const int k_panels = std::clamp(
            static_cast<int>(std::ceil(std::log2(std::max(2.0, horizon * b_max)))), 1, 42);
        edges.push_back(0.0);
        for (int k = k_panels - 1; k >= 0; --k) edges.push_back(horizon * std::ldexp(1.0, -k));
    }

    constexpr double quad_tol = 1e-12;
    for (int i = dim - 2; i >= 0; --i) {
        const double b_m = b_of(i);
        const double b_up = b_of(i + 1);
        const std::function<double(double)> prev = level;
        auto value = [b_m, b_up, i, prev](double t) {
            if (t <= 0.0) return i == 0 ? 0.5 : 0.0;
            const double base = (i == 0) ? 0.5 * std::exp(-b_m * t) : 0.0;
            const double cut = b_m > 0.0 ? 45.0 / b_m : t;
            const double lo = std::max(0.0, t - cut);
            const double integral = detail::adaptive_quadrature(
                [&](double s) { return std::exp(-b_m * (t - s)) * prev(s); }, lo, t, quad_tol);
            return base + b_up * integral;
        };
        const auto interp = detail::fit_piecewise(value, edges, 1e-13);
        level = [interp](double t) { return interp.eval(t); };
        for (std::size_t s = 0; s < times.size(); ++s)
            out(i, static_cast<Eigen::Index>(s)) = times[s] == 0.0 ? (i == 0 ? 0.5 : 0.0)
                                                                   : interp.eval(times[s]);
    }
    return out;
}

Eigen::VectorXd zero_temp_cascade(int n_atoms, double t) {
    return zero_temp_cascade(n_atoms, std::vector<double>{t}).col(0);
}

double energy(const Eigen::VectorXd& diagonal) {
    const int dim = static_cast<int>(diagonal.size());
    const double j = 0.5 * (dim - 1);
    double e = 0.0;
    for (int i = 0; i < dim; ++i) e += (-j + i) * diagonal[i];
    return e;
}

double t_dec(int n_atoms, BathParams bath) {
    if (n_atoms < 1) throw std::domain_error("t_dec: need at least one atom");
    return 2.0 / (n_atoms * (2.0 * bath.nbar + 1.0));
}

double t_diss(const EvolutionTrace& trace) {
    const double e_inf = stationary_energy(trace.n_atoms, trace.bath);
    const double gap = std::abs(trace.energy.front() - e_inf);
    if (gap <= 1e-14 * std::max(1.0, std::abs(e_inf)))
        throw std::domain_error("t_diss: trace starts at the stationary energy");
    const auto found = locate_t_diss(trace);
    if (!found)
        throw HorizonError(
            "t_diss: energy has not relaxed to the 1/e gap within the trace horizon; "
            "re-run the evolution with a longer horizon");
    return *found;
}

wigner::CharacteristicMatrix characteristic_at(const EvolutionTrace& trace, double t) {
    const int n = trace.n_atoms;
    const HalfInt j = HalfInt::from_twice(n);
    const Eigen::VectorXd diag = trace.diagonal_at(t);
    const complex<double> corner = trace.corner_at(t);  // rho_{-j,j}

    wigner::CharacteristicMatrix chi;
    chi.n_atoms = n;
    chi.coeffs.assign(static_cast<std::size_t>(n + 1) * (n + 1), 0.0);
    for (int i = 0; i <= n; ++i) {
        if (diag[i] == 0.0) continue;
        const HalfInt m = HalfInt::from_twice(2 * i - n);
        const auto row = specfun::wigner3j_row(j, j, m, -m);
        const int sign = ((n - i) % 2 == 0) ? 1 : -1;  // (-1)^(j-m)
        for (int k = 0; k <= n; ++k) {
            const double w3 = row.at(HalfInt::whole(k));
            if (w3 != 0.0) chi.at(k, 0) += std::sqrt(2.0 * k + 1.0) * sign * w3 * diag[i];
        }
    }
    const double corner_sign = (n % 2 == 0) ? 1.0 : -1.0;
    chi.at(n, n) = corner_sign * std::conj(corner);  // (-1)^N rho_{j,-j}
    chi.at(n, -n) = corner;
    return chi;
}

std::optional<double> t_ncl(const EvolutionTrace& trace) {
    return t_ncl(trace, wigner::evolving_cat_section_stats);
}

std::optional<double> t_ncl(const EvolutionTrace& trace, const SectionMinEvaluator& min_evaluator) {
    if (trace.bath.nbar == 0.0) return std::nullopt;  // stays non-classical
    const auto classical = [&](double t) {
        const auto stats = min_evaluator(characteristic_at(trace, t));
        return stats.min_w >= -1e-9 * stats.max_abs_w;
    };
    if (classical(0.0)) return 0.0;
    double b = trace.times.back();
    if (!classical(b)) return std::nullopt;
    double a = 0.0;
    while (b - a > 1e-4 * b) {
        const double mid = 0.5 * (a + b);
        (classical(mid) ? b : a) = mid;
    }
    return 0.5 * (a + b);
}

CharacteristicTimes characteristic_times(int n_atoms, BathParams bath, const EvolveOptions& opts) {
    const auto trace = evolve_polar_cat(n_atoms, bath, 0.0, 601, opts);
    CharacteristicTimes out;
    out.decoherence = t_dec(n_atoms, bath);
    out.dissipation = t_diss(trace);
    out.nonclassical = t_ncl(trace);
    out.ratio = out.dissipation / out.decoherence;
    return out;
}

}  // namespace spincat::dynamics
