#ifndef LIGHTSTORE_DETAIL_QUADRATURE_HPP
#define LIGHTSTORE_DETAIL_QUADRATURE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

// Adaptive Gauss-Kronrod 7/15 for complex-valued integrands on a real
// interval. Panels are seeded from caller-supplied breakpoints (tooth cores,
// period boundaries); each panel is bisected while the embedded G7 estimate
// disagrees with K15 by more than its share of the tolerance.

namespace lightstore::detail {

// K15 nodes on [-1, 1] (symmetric; only the non-negative half stored) and the
// matching K15 / G7 weights.
inline constexpr std::array<double, 8> gk_nodes = {
    0.000000000000000000000000000000000e+00, 2.077849550078984676006894037732449e-01,
    4.058451513773971669066064120769615e-01, 5.860872354676911302941448382587296e-01,
    7.415311855993944398638647732807884e-01, 8.648644233597690727897127886409262e-01,
    9.491079123427585245261896840478513e-01, 9.914553711208126392068546975263285e-01};

inline constexpr std::array<double, 8> k15_weights = {
    2.094821410847278280129991748917143e-01, 2.044329400752988924141619992346491e-01,
    1.903505780647854099132564024210137e-01, 1.690047266392679028265834265985503e-01,
    1.406532597155259187451895905102379e-01, 1.047900103222501838398763225415180e-01,
    6.309209262997855329070066318920429e-02, 2.293532201052922496373200805896959e-02};

// G7 weights aligned with the even-index K15 nodes (0, 2, 4, 6).
inline constexpr std::array<double, 4> g7_weights = {
    4.179591836734693877551020408163265e-01, 3.818300505051189449503697754889751e-01,
    2.797053914892766679014677714237796e-01, 1.294849661688696932706114326790820e-01};

struct PanelResult {
  std::complex<double> value;
  double error;  // |K15 - G7| estimate
};

template <typename F>
PanelResult gauss_kronrod_15(F&& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  std::complex<double> k15 = 0.0, g7 = 0.0;
  for (std::size_t i = 0; i < gk_nodes.size(); ++i) {
    const double x = half * gk_nodes[i];
    std::complex<double> s = f(mid + x);
    if (i != 0) s += f(mid - x);
    k15 += k15_weights[i] * s;
    if (i % 2 == 0) g7 += g7_weights[i / 2] * s;
  }
  k15 *= half;
  g7 *= half;
  return {k15, std::abs(k15 - g7)};
}

struct AdaptiveResult {
  std::complex<double> value;
  double error;
  bool converged;
};

// breakpoints: initial panel boundaries, must include a and b and be sorted.
template <typename F>
AdaptiveResult adaptive_integrate(F&& f, const std::vector<double>& breakpoints,
                                  double abs_tol, int max_depth = 14) {
  struct Panel {
    double a, b;
    int depth;
    PanelResult r;
  };
  std::vector<Panel> stack;
  stack.reserve(breakpoints.size() * 2);
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double a = breakpoints[i], b = breakpoints[i + 1];
    if (b > a) stack.push_back({a, b, 0, gauss_kronrod_15(f, a, b)});
  }

  std::complex<double> total = 0.0;
  double err_done = 0.0;
  bool converged = true;
  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();
    const double local_tol = abs_tol * (p.b - p.a) /
                             (breakpoints.back() - breakpoints.front());
    if (p.r.error <= std::max(local_tol, 1e-16 * std::abs(p.r.value)) ||
        p.depth >= max_depth) {
      if (p.depth >= max_depth && p.r.error > local_tol) converged = false;
      total += p.r.value;
      err_done += p.r.error;
      continue;
    }
    const double m = 0.5 * (p.a + p.b);
    stack.push_back({p.a, m, p.depth + 1, gauss_kronrod_15(f, p.a, m)});
    stack.push_back({m, p.b, p.depth + 1, gauss_kronrod_15(f, m, p.b)});
  }
  return {total, err_done, converged};
}

}  // namespace lightstore::detail

#endif
