#pragma once

// Independent numerical references. Nothing here uses the library's closed
// forms: transforms and pairings are brute-force quadratures.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

// Composite trapezoid rule with n intervals on [lo, hi].
template <class F>
auto trapezoid(F&& f, double lo, double hi, int n) {
  const double h = (hi - lo) / n;
  auto s = 0.5 * (f(lo) + f(hi));
  for (int k = 1; k < n; ++k) s += f(lo + k * h);
  return s * h;
}

// int f(x) e^{-2 pi i x xi} dx over [-L, L]
inline cd fourier(const std::function<cd(double)>& f, double xi, double L = 12.0, int n = 4800) {
  return trapezoid([&](double x) { return f(x) * std::polar(1.0, -2.0 * pi * x * xi); }, -L, L, n);
}

// Normalized Gaussian with standard deviation w, and its first derivative.
inline double density(double u, double w) {
  return std::exp(-u * u / (2.0 * w * w)) / (w * std::sqrt(2.0 * pi));
}
inline double density_d1(double u, double w) { return -u / (w * w) * density(u, w); }

// W(f)(x, omega) = int f(x + t/2) conj f(x - t/2) e^{-2 pi i t omega} dt on [-L, L].
inline cd wigner_point(const std::function<cd(double)>& f, double x, double omega, double L, int n) {
  return trapezoid(
      [&](double t) { return f(x + t / 2) * std::conj(f(x - t / 2)) * std::polar(1.0, -2.0 * pi * t * omega); },
      -L, L, n);
}

// <W(f), phi1 (x) phi2> = int int f(u) conj f(v) conj phi1((u+v)/2) conj phi2hat(v-u) du dv,
// with f = a * (derivative of the normalized Gaussian of width w) at 0, and phi2hat
// obtained by quadrature.
inline cd mollified_dirac_derivative_pairing(cd a, double w, const std::function<cd(double)>& phi1,
                                             const std::function<cd(double)>& phi2) {
  const double L = 10.0 * w;
  const int n = 320;
  const double h = 2.0 * L / n;
  // v - u and (u + v) / 2 take only 2n + 1 distinct values each.
  std::vector<cd> hat(2 * n + 1), mid(2 * n + 1), f(n + 1);
  for (int k = -n; k <= n; ++k) {
    hat[k + n] = std::conj(fourier(phi2, k * h, 8.0, 1600));
    mid[k + n] = std::conj(phi1(-L + (k + n) * h / 2.0));
  }
  for (int i = 0; i <= n; ++i) f[i] = a * density_d1(-L + i * h, w);
  cd s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double wu = (i == 0 || i == n) ? 0.5 : 1.0;
    for (int j = 0; j <= n; ++j) {
      const double wv = (j == 0 || j == n) ? 0.5 : 1.0;
      s += wu * wv * f[i] * std::conj(f[j]) * mid[i + j] * hat[j - i + n];
    }
  }
  return s * h * h;
}

// Richardson extrapolation in w^2 from widths w and w/2.
inline cd richardson(const std::function<cd(double)>& value_at_width, double w) {
  return (4.0 * value_at_width(0.5 * w) - value_at_width(w)) / 3.0;
}

}  // namespace oracle
