#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace alasso {

// Adaptive Gauss-Kronrod quadrature (15-point Kronrod / 7-point Gauss pair),
// bisecting intervals until the local error estimate meets the tolerance.

namespace detail {

// Positive half of the K15 nodes, descending; indices 1, 3, 5, 7 are the
// embedded G7 nodes (7 is the center).
inline constexpr double kGK15Nodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
};
inline constexpr double kK15Weights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
inline constexpr double kG7Weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct GKResult {
  double value;
  double error;
};

template <typename F>
GKResult gk15(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_center = f(mid);
  double kron = kK15Weights[7] * f_center;
  double gauss = kG7Weights[3] * f_center;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kGK15Nodes[i];
    const double fv = f(mid - dx) + f(mid + dx);
    kron += kK15Weights[i] * fv;
    if (i % 2 == 1) gauss += kG7Weights[i / 2] * fv;
  }
  kron *= half;
  gauss *= half;
  return {kron, std::fabs(kron - gauss)};
}

template <typename F>
double integrate_recurse(const F& f, double a, double b, double tol, int depth, int max_depth) {
  const GKResult r = gk15(f, a, b);
  if (r.error <= tol || depth >= max_depth) return r.value;
  const double mid = 0.5 * (a + b);
  return integrate_recurse(f, a, mid, 0.5 * tol, depth + 1, max_depth) +
         integrate_recurse(f, mid, b, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace detail

/// Integrate f over [a, b] to absolute tolerance abs_tol.
template <typename F>
double integrate(const F& f, double a, double b, double abs_tol = 1e-9, int max_depth = 40) {
  if (!(a <= b)) throw std::domain_error("integrate: requires a <= b");
  if (a == b) return 0.0;
  return detail::integrate_recurse(f, a, b, abs_tol, 0, max_depth);
}

}  // namespace alasso
