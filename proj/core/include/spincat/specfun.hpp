#pragma once

#include <complex>
#include <vector>

namespace spincat::specfun {

/// Half-integer quantum number, stored as twice its value so that
/// arithmetic on j, m, K, Q stays exact (j = N/2 is half-integer for odd N).
struct HalfInt {
    int twice = 0;

    static constexpr HalfInt from_twice(int t) { return HalfInt{t}; }
    static constexpr HalfInt whole(int n) { return HalfInt{2 * n}; }

    constexpr double value() const { return 0.5 * twice; }
    constexpr bool is_integer() const { return twice % 2 == 0; }

    friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return HalfInt{a.twice + b.twice}; }
    friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return HalfInt{a.twice - b.twice}; }
    friend constexpr HalfInt operator-(HalfInt a) { return HalfInt{-a.twice}; }
    friend constexpr bool operator==(HalfInt a, HalfInt b) { return a.twice == b.twice; }
    friend constexpr auto operator<=>(HalfInt a, HalfInt b) { return a.twice <=> b.twice; }
};

/// ln(n!). Relative error below 1e-14 up to n = 2000.
double ln_factorial(int n);

/// Wigner 3j symbol (j1 j2 j3 / m1 m2 m3) by the Racah single-sum formula,
/// evaluated with log-factorials and separate sign tracking.  Returns 0 when a
/// selection rule fails (m-sum, triangle, non-integer perimeter).  Throws
/// std::domain_error for |m| > j or a j/m pair that is not integer-valued.
/// When the alternating sum loses too many digits the evaluation escalates
/// internally to exact big-integer arithmetic, keeping the absolute error
/// below 1e-12 for all j up to 500.
double wigner3j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3);

/// All 3j symbols (l1 l2 l3 / -(m2+m3) m2 m3) for l1 = l1_min .. l2+l3 in one
/// sweep of the three-term recurrence in l1 (two-sided, renormalized).  Much
/// cheaper and better conditioned than per-symbol Racah sums when a whole
/// column of coefficients is needed.
struct Wigner3jRow {
    HalfInt l1_min;
    std::vector<double> values;

    /// Value at l1; zero outside [l1_min, l1_min + size).
    double at(HalfInt l1) const;
};
Wigner3jRow wigner3j_row(HalfInt l2, HalfInt l3, HalfInt m2, HalfInt m3);

/// Fully normalized associated Legendre functions Pbar_{K,m}(cos theta) for
/// K = 0..k_max at fixed order m >= 0, so that Y_{K,m} = Pbar_{K,m} e^{i m phi}.
/// Condon-Shortley phase included.  Entries with K < m are zero.
/// Stable three-term upward recurrence in the degree; no raw factorial ratios.
std::vector<double> normalized_legendre(int k_max, int m, double theta);

/// Orthonormal spherical harmonic Y_KQ(theta, phi), Condon-Shortley phase.
std::complex<double> spherical_harmonic(int k, int q, double theta, double phi);

}  // namespace spincat::specfun
