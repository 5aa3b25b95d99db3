#pragma once

#include "tubefocal/expression.hpp"
#include "tubefocal/jet.hpp"

namespace tubefocal {

// ---------------------------------------------------------------------------
// Central-difference derivative oracle, fully independent of the jet rules.
// First and second derivatives use one Richardson extrapolation level over
// steps h and h/2 (raising O(h^2) to O(h^4)).  The third derivative uses the
// antisymmetric seven-point stencil on [u-3h, u+3h], which is also O(h^4)
// but keeps the largest step at h, avoiding the 1/h^3 roundoff blow-up a
// step-halving pass would take.  Requires f defined on [u-3h, u+3h].
// ---------------------------------------------------------------------------

struct FdOptions {
  double h = 1e-3;
  bool richardson = true;  // false: plain O(h^2) central stencils
};

template <class F>
Jet3d fd_jet3_of(F&& f, double u, FdOptions opt = {}) {
  const double h = opt.h;
  const auto d1 = [&](double s) { return (f(u + s) - f(u - s)) / (2.0 * s); };
  const auto d2 = [&](double s) { return (f(u + s) - 2.0 * f(u) + f(u - s)) / (s * s); };
  const auto d3_five = [&](double s) {
    return (f(u + 2 * s) - 2.0 * f(u + s) + 2.0 * f(u - s) - f(u - 2 * s)) / (2.0 * s * s * s);
  };

  Jet3d r;
  r.f = f(u);
  if (!opt.richardson) {
    r.d1 = d1(h);
    r.d2 = d2(h);
    r.d3 = d3_five(h);
    return r;
  }
  r.d1 = (4.0 * d1(h / 2) - d1(h)) / 3.0;
  r.d2 = (4.0 * d2(h / 2) - d2(h)) / 3.0;
  // antisymmetric weights (-13/8, 1, -1/8) on offsets (h, 2h, 3h) kill the
  // f^(5) term: sum c_k k = 0, sum c_k k^3 = 3, sum c_k k^5 = 0
  r.d3 = (-1.625 * (f(u + h) - f(u - h)) + (f(u + 2 * h) - f(u - 2 * h)) -
          0.125 * (f(u + 3 * h) - f(u - 3 * h))) /
         (h * h * h);
  return r;
}

inline Jet3d fd_jet3(const ExprTree& tree, double u, FdOptions opt = {}) {
  return fd_jet3_of([&](double x) { return eval_value(tree, x); }, u, opt);
}

}  // namespace tubefocal
