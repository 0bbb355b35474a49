#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "topospec/lie_basis.hpp"

namespace topospec {

using cplx = std::complex<double>;

struct QuditState {
  int d = 0;
  std::vector<int> l;
  std::vector<cplx> c;
  bool degenerate = false;  // constructed with allow_degenerate and repeated l
};

struct SubspacePerturbation {
  Eigen::MatrixXd delta;  // delta(j,k): weight of profile j attached to |k>
};

// Field-space description psi^(k)(r,phi) = A_k g(r,phi), g_p = f_{l_p}(r) e^{i l_p phi}.
// The observable fields are m_a = sum_k psi^(k)^dagger T_a psi^(k).
struct ModeSource {
  int d = 0;
  std::vector<int> l;
  std::vector<CMatrix> terms;
};

double radial_profile(int l, double r);

QuditState make_state(const std::vector<int>& l, const std::vector<cplx>& c, bool allow_degenerate = false);

ModeSource mode_source(const QuditState& s);

// psi_k = (1 - mean delta) c_k g_k + sum_{j != k} delta_jk c_j g_j.
ModeSource inject_subspace(const QuditState& s, const SubspacePerturbation& pert);

// Seeded uniform off-diagonal perturbation with entries in [lo, hi].
SubspacePerturbation random_perturbation(int d, double lo, double hi, unsigned seed);

// Reverses the photon roles (l -> -l); flips the sign of every wrapping number.
QuditState swap_photons(const QuditState& s);

}  // namespace topospec
