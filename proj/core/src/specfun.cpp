#include "spincat/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace spincat::specfun {

namespace {

constexpr int kLnFactTableSize = 4097;

// The table is kept in extended precision: ln(2000!) is about 1.3e4, so a
// double-rounded table entry already carries ~1e-12 absolute error, which the
// Racah exponentials would inherit as relative error.
std::vector<long double> build_ln_factorial_table() {
    std::vector<long double> table(kLnFactTableSize);
    long double sum = 0.0L, comp = 0.0L;
    table[0] = 0.0L;
    for (int n = 1; n < kLnFactTableSize; ++n) {
        long double term = std::log(static_cast<long double>(n)) - comp;
        long double next = sum + term;
        comp = (next - sum) - term;
        sum = next;
        table[n] = sum;
    }
    return table;
}

long double ln_factorial_l(int n) {
    if (n < 0) throw std::domain_error("ln_factorial: negative argument");
    static const std::vector<long double> table = build_ln_factorial_table();
    if (n < kLnFactTableSize) return table[n];
    return std::lgammal(static_cast<long double>(n) + 1.0L);
}

int parity_sign(int k) { return (k % 2 == 0) ? 1 : -1; }

}  // namespace

double ln_factorial(int n) { return static_cast<double>(ln_factorial_l(n)); }

namespace {

// Racah sum bookkeeping: t runs over [t_min, t_max] and the denominator
// factorial arguments are t, t-t1, t-t2, t3-t, t4-t, t5-t (all >= 0 there).
struct RacahTerms {
    int t_min, t_max;
    int t1, t2, t3, t4, t5;
};

long double racah_sum(const RacahTerms& r, long double* max_log_term) {
    long double sum = 0.0L;
    long double max_log = -1e300L;
    for (int t = r.t_min; t <= r.t_max; ++t) {
        long double lt =
            -(ln_factorial_l(t) + ln_factorial_l(t - r.t1) + ln_factorial_l(t - r.t2) +
              ln_factorial_l(r.t3 - t) + ln_factorial_l(r.t4 - t) + ln_factorial_l(r.t5 - t));
        max_log = std::max(max_log, lt);
        sum += parity_sign(t) * std::exp(lt);
    }
    *max_log_term = max_log;
    return sum;
}

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;
using BigFloat = boost::multiprecision::cpp_bin_float_100;

BigInt big_factorial(int n) {
    BigInt f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

// Exact fallback for when the double-precision alternating sum has cancelled
// away too many digits (large j in the oscillatory region).
double wigner3j_exact(const RacahTerms& r, int perim, const int (&tri)[3], const int (&jm)[6],
                      int phase) {
    BigRat sum = 0;
    for (int t = r.t_min; t <= r.t_max; ++t) {
        BigInt den = big_factorial(t) * big_factorial(t - r.t1) * big_factorial(t - r.t2) *
                     big_factorial(r.t3 - t) * big_factorial(r.t4 - t) * big_factorial(r.t5 - t);
        BigRat term(BigInt(1), den);
        if (t % 2 != 0) term = -term;
        sum += term;
    }
    if (sum == 0) return 0.0;
    BigRat prod(big_factorial(tri[0]) * big_factorial(tri[1]) * big_factorial(tri[2]),
                big_factorial(perim + 1));
    for (int v : jm) prod *= big_factorial(v);
    BigFloat value = sqrt(BigFloat(prod)) * BigFloat(sum);
    return phase * static_cast<double>(value);
}

}  // namespace

double wigner3j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3) {
    const HalfInt js[3] = {j1, j2, j3};
    const HalfInt ms[3] = {m1, m2, m3};
    for (int i = 0; i < 3; ++i) {
        if (((js[i].twice + ms[i].twice) % 2 + 2) % 2 != 0)
            throw std::domain_error("wigner3j: j and m must differ by an integer");
        if (std::abs(ms[i].twice) > js[i].twice)
            throw std::domain_error("wigner3j: |m| exceeds j");
    }
    if (m1.twice + m2.twice + m3.twice != 0) return 0.0;
    const int perim2 = j1.twice + j2.twice + j3.twice;
    if (perim2 % 2 != 0) return 0.0;  // non-integer perimeter cannot couple
    const int perim = perim2 / 2;
    const int tri[3] = {(j1.twice + j2.twice - j3.twice) / 2, (j1.twice - j2.twice + j3.twice) / 2,
                        (-j1.twice + j2.twice + j3.twice) / 2};
    if (tri[0] < 0 || tri[1] < 0 || tri[2] < 0) return 0.0;

    const int jm[6] = {(j1.twice + m1.twice) / 2, (j1.twice - m1.twice) / 2,
                       (j2.twice + m2.twice) / 2, (j2.twice - m2.twice) / 2,
                       (j3.twice + m3.twice) / 2, (j3.twice - m3.twice) / 2};

    RacahTerms r;
    r.t1 = (j2.twice - j3.twice - m1.twice) / 2;
    r.t2 = (j1.twice - j3.twice + m2.twice) / 2;
    r.t3 = tri[0];  // j1 + j2 - j3
    r.t4 = jm[1];   // j1 - m1
    r.t5 = jm[2];   // j2 + m2
    r.t_min = std::max({0, r.t1, r.t2});
    r.t_max = std::min({r.t3, r.t4, r.t5});
    if (r.t_min > r.t_max) return 0.0;

    const int phase_exp = (j1.twice - j2.twice - m3.twice) / 2;
    const int phase = parity_sign(std::abs(phase_exp) % 2);

    long double max_log_term = 0.0L;
    const long double sum = racah_sum(r, &max_log_term);

    long double ln_pref = -ln_factorial_l(perim + 1);
    for (int v : tri) ln_pref += ln_factorial_l(v);
    for (int v : jm) ln_pref += ln_factorial_l(v);
    ln_pref *= 0.5L;

    // Estimated absolute rounding error of the alternating sum after applying
    // the prefactor (extended-precision accumulation, so the per-term noise
    // floor is ~1e-19 relative); escalate to exact arithmetic when the
    // cancellation threatens the 1e-12 contract.
    const int n_terms = r.t_max - r.t_min + 1;
    const double err_est = static_cast<double>(
        std::exp(max_log_term + ln_pref) * static_cast<long double>(n_terms) * 1.0e-18L);
    if (!(err_est < 1e-13)) return wigner3j_exact(r, perim, tri, jm, phase);

    return static_cast<double>(phase * sum * std::exp(ln_pref));
}

double Wigner3jRow::at(HalfInt l1) const {
    const int offset2 = l1.twice - l1_min.twice;
    if (offset2 < 0 || offset2 % 2 != 0) return 0.0;
    const std::size_t idx = static_cast<std::size_t>(offset2 / 2);
    return idx < values.size() ? values[idx] : 0.0;
}

// Three-term recurrence in l1 for f(l1) = (l1 l2 l3 / m1 m2 m3), swept forward
// from l1_min into the classically allowed region and backward from l1_max,
// matched on a three-point overlap, then normalized by
// sum (2 l1 + 1) f^2 = 1 with sign(f(l1_max)) = (-1)^(l2-l3+m2+m3).
Wigner3jRow wigner3j_row(HalfInt l2h, HalfInt l3h, HalfInt m2h, HalfInt m3h) {
    if (((l2h.twice + m2h.twice) % 2 + 2) % 2 != 0 || ((l3h.twice + m3h.twice) % 2 + 2) % 2 != 0)
        throw std::domain_error("wigner3j_row: j and m must differ by an integer");
    if (std::abs(m2h.twice) > l2h.twice || std::abs(m3h.twice) > l3h.twice)
        throw std::domain_error("wigner3j_row: |m| exceeds j");

    const double l2 = l2h.value(), l3 = l3h.value();
    const double m2 = m2h.value(), m3 = m3h.value();
    const double m1 = -(m2 + m3);
    const double dd = (l2 - l3) * (l2 - l3);
    const double ss = (l2 + l3 + 1.0) * (l2 + l3 + 1.0);
    const double pre2 = m1 * (l2 * (l2 + 1.0) - l3 * (l3 + 1.0));
    const double m3m2 = m3 - m2;
    const auto coef_a = [&](double l1) {
        return std::sqrt((l1 * l1 - dd) * (ss - l1 * l1) * (l1 * l1 - m1 * m1));
    };

    Wigner3jRow row;
    row.l1_min = HalfInt::from_twice(
        std::max(std::abs(l2h.twice - l3h.twice), std::abs(m2h.twice + m3h.twice)));
    const int n = (l2h.twice + l3h.twice - row.l1_min.twice) / 2 + 1;
    row.values.assign(static_cast<std::size_t>(n), 0.0);
    auto& f = row.values;
    const double l1min = row.l1_min.value();
    const double l1max = l1min + (n - 1);

    const int sign_exp = std::abs(l2h.twice - l3h.twice + m2h.twice + m3h.twice) / 2;
    const bool want_negative = (sign_exp % 2) != 0;

    if (n == 1) {
        f[0] = (want_negative ? -1.0 : 1.0) / std::sqrt(2.0 * l1min + 1.0);
        return row;
    }

    constexpr double kHuge = 0x1p+250, kTinySq = 0x1p-500, kTiny = 0x1p-250;

    int i = 0;
    f[0] = kTiny;
    double sum_fwd = (2.0 * l1min + 1.0) * f[0] * f[0];
    double c_prev = 1e300;
    double old_a = 0.0;
    while (i + 1 < n) {
        ++i;
        const double l1 = l1min + i;
        const double new_a = coef_a(l1);
        const double c_prev_abs = std::abs(c_prev);
        double c;
        if (i > 1) {
            const double inv = 1.0 / ((l1 - 1.0) * new_a);
            c = (2.0 * l1 - 1.0) * (pre2 - (l1 * l1 - l1) * m3m2) * inv;
            f[i] = f[i - 1] * c - f[i - 2] * l1 * old_a * inv;
        } else {
            c = (l1 > 1.000001)
                    ? (2.0 * l1 - 1.0) * (pre2 - (l1 * l1 - l1) * m3m2) / ((l1 - 1.0) * new_a)
                    : -(2.0 * l1 - 1.0) * l1 * m3m2 / new_a;
            f[i] = f[i - 1] * c;
        }
        old_a = new_a;
        sum_fwd += (2.0 * l1 + 1.0) * f[i] * f[i];
        if (std::abs(f[i]) >= kHuge) {
            for (int k = 0; k <= i; ++k) f[k] *= kTiny;
            sum_fwd *= kTinySq;
        }
        if (c_prev_abs <= std::abs(c)) break;
        c_prev = c;
    }

    double sum_bwd = 0.0;
    bool last_negative = false;
    double fct_fwd = 1.0, fct_bwd = 1.0;
    int split = n;

    if (i + 1 < n) {
        const double x1 = f[i - 2], x2 = f[i - 1], x3 = f[i];
        split = i - 2;

        int k = n - 1;
        f[k] = kTiny;
        sum_bwd = (2.0 * l1max + 1.0) * f[k] * f[k];
        old_a = 0.0;
        while (k > split) {
            --k;
            const double l1 = l1min + k;
            const double lp = l1 + 1.0;
            const double a_up = coef_a(lp);
            if (k == n - 2)
                f[k] = f[k + 1] * (2.0 * l1 + 3.0) * (pre2 - lp * (lp + 1.0) * m3m2) /
                       ((l1 + 2.0) * a_up);
            else
                f[k] = (f[k + 1] * (2.0 * l1 + 3.0) * (pre2 - lp * (lp + 1.0) * m3m2) -
                        f[k + 2] * lp * old_a) /
                       ((l1 + 2.0) * a_up);
            old_a = a_up;
            sum_bwd += (2.0 * l1 + 1.0) * f[k] * f[k];
            if (std::abs(f[k]) >= kHuge) {
                for (int q = k; q < n; ++q) f[q] *= kTiny;
                sum_bwd *= kTinySq;
            }
        }
        // overlap entries belong to the forward sum
        for (int q = split; q < std::min(n, split + 3); ++q)
            sum_bwd -= (2.0 * (l1min + q) + 1.0) * f[q] * f[q];

        const double ratio =
            (x1 * f[split] + x2 * f[split + 1] + x3 * f[split + 2]) / (x1 * x1 + x2 * x2 + x3 * x3);
        if (std::abs(ratio) < 1.0) {
            fct_bwd = 1.0 / ratio;
            sum_bwd /= ratio * ratio;
            last_negative = ratio < 0.0;
        } else {
            fct_fwd = ratio;
            sum_fwd *= ratio * ratio;
        }
    } else {
        last_negative = f[n - 1] < 0.0;
    }

    double norm = 1.0 / std::sqrt(sum_fwd + sum_bwd);
    if (last_negative != want_negative) norm = -norm;

    for (int q = 0; q < std::min(split, n); ++q) f[q] *= norm * fct_fwd;
    for (int q = split; q < n; ++q) f[q] *= norm * fct_bwd;
    return row;
}

std::vector<double> normalized_legendre(int k_max, int m, double theta) {
    if (m < 0) throw std::domain_error("normalized_legendre: order must be non-negative");
    std::vector<double> p(static_cast<std::size_t>(k_max) + 1, 0.0);
    if (m > k_max) return p;
    // Extended precision keeps the coherent rounding growth of the upward
    // sweep below 1e-12 absolute out to K = 1000.
    const long double x = std::cos(static_cast<long double>(theta));
    const long double s = std::sin(static_cast<long double>(theta));

    // Sectoral seed built multiplicatively; Condon-Shortley phase lives in
    // the per-step minus sign.
    long double pmm = 1.0L / std::sqrt(4.0L * static_cast<long double>(M_PI));
    for (int k = 1; k <= m; ++k) pmm *= -std::sqrt((2.0L * k + 1.0L) / (2.0L * k)) * s;
    p[m] = static_cast<double>(pmm);
    long double prev2 = pmm;
    long double prev1 = std::sqrt(2.0L * m + 3.0L) * x * pmm;
    if (m + 1 <= k_max) p[m + 1] = static_cast<double>(prev1);
    for (int l = m + 2; l <= k_max; ++l) {
        const long double ll = l, mm = m;
        const long double a = std::sqrt((4.0L * ll * ll - 1.0L) / (ll * ll - mm * mm));
        const long double b =
            std::sqrt(((ll - 1.0L) * (ll - 1.0L) - mm * mm) / (4.0L * (ll - 1.0L) * (ll - 1.0L) - 1.0L));
        const long double cur = a * (x * prev1 - b * prev2);
        p[l] = static_cast<double>(cur);
        prev2 = prev1;
        prev1 = cur;
    }
    return p;
}

std::complex<double> spherical_harmonic(int k, int q, double theta, double phi) {
    if (k < 0 || std::abs(q) > k) throw std::domain_error("spherical_harmonic: need |Q| <= K");
    const int qa = std::abs(q);
    const double pbar = normalized_legendre(k, qa, theta)[k];
    std::complex<double> y = pbar * std::polar(1.0, qa * phi);
    if (q < 0) y = static_cast<double>(parity_sign(qa)) * std::conj(y);
    return y;
}

}  // namespace spincat::specfun
