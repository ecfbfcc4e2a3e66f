#pragma once

#include <functional>

#include "reachopt/types.hpp"

namespace reachopt {

struct LbfgsbOptions {
  int max_iters{100};
  double tolerance{1e-6};  // projected-gradient infinity norm
  int history{10};
  int max_halvings{20};
};

struct LbfgsbResult {
  VecX x;
  double f{0.0};
  int iterations{0};
  bool converged{false};
};

/// Objective callback: value at x, gradient written into g.
using GradientFn = std::function<double(const VecX& x, VecX& g)>;

/// Per-accepted-iteration callback (iteration, iterate, value).
using AcceptFn = std::function<void(int, const VecX&, double)>;

/// Limited-memory quasi-Newton minimization subject to box bounds. Search
/// directions come from the two-loop recursion; every candidate step is
/// projected onto the box and accepted only if it does not increase the
/// objective, so accepted iterates are monotone. Converged when the
/// projected-gradient infinity norm drops below tolerance.
LbfgsbResult lbfgsb_minimize(const GradientFn& fg, VecX x0, const VecX& lower, const VecX& upper,
                             const LbfgsbOptions& opts = {}, const AcceptFn& on_accept = {});

}  // namespace reachopt
