#pragma once

#include <vector>

#include "topospec/field_builder.hpp"

namespace topospec {

struct BatchTriple {
  int comp[3];
  bool fix = false;
  int fixed_component = 2;
  double sheet = 1.0;
};

struct QuadOutcome {
  double raw = 0.0;
  double error = 0.0;
  bool converged = true;
  int n_r = 0;
  int n_phi = 0;
};

struct QuadOptions {
  double tol = 5e-3;
  int max_doublings = 2;
  int threads = 0;
};

// Wrapping integrals (1/4pi) of S.(dS/dt x dS/dphi) over the log-radial grid
// for many triples drawn from a shared component table. Composite Simpson in
// t = ln r and the periodic midpoint rule in phi; the error estimate is the
// change against the grid with every other node in both directions. Triples
// whose estimate exceeds tol are recomputed on doubled grids.
std::vector<QuadOutcome> integrate_batch(const std::vector<ComponentField>& comps,
                                         const std::vector<BatchTriple>& triples, const Grid& grid,
                                         const QuadOptions& opt = {});

}  // namespace topospec
