#include "topospec/qudit_state.hpp"

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

namespace topospec {

double radial_profile(int l, double r) {
  if (r < 0.0) throw std::invalid_argument("radius must be nonnegative");
  const int a = std::abs(l);
  const double power = a == 0 ? 1.0 : std::pow(r, a);
  return power * std::exp(-r * r);
}

QuditState make_state(const std::vector<int>& l, const std::vector<cplx>& c, bool allow_degenerate) {
  if (l.size() != c.size())
    throw std::invalid_argument("dimension mismatch: " + std::to_string(l.size()) + " charges vs " +
                                std::to_string(c.size()) + " amplitudes");
  if (l.size() < 2) throw std::invalid_argument("state dimension must be at least 2");
  const std::set<int> distinct(l.begin(), l.end());
  const bool repeated = distinct.size() != l.size();
  if (repeated && !allow_degenerate) throw std::invalid_argument("duplicate OAM charge in state");
  bool any = false;
  for (const auto& x : c) {
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) throw std::invalid_argument("non-finite amplitude");
    any = any || std::abs(x) > 0.0;
  }
  if (!any) throw std::invalid_argument("all amplitudes are zero");
  QuditState s;
  s.d = static_cast<int>(l.size());
  s.l = l;
  s.c = c;
  s.degenerate = repeated;
  return s;
}

ModeSource mode_source(const QuditState& s) {
  ModeSource m;
  m.d = s.d;
  m.l = s.l;
  CMatrix a = CMatrix::Zero(s.d, s.d);
  for (int i = 0; i < s.d; ++i) a(i, i) = s.c[i];
  m.terms.push_back(a);
  return m;
}

ModeSource inject_subspace(const QuditState& s, const SubspacePerturbation& pert) {
  const int d = s.d;
  if (pert.delta.rows() != d || pert.delta.cols() != d)
    throw std::invalid_argument("perturbation matrix must be d x d");
  double sum = 0.0;
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      const double v = pert.delta(j, k);
      if (j == k && v != 0.0) throw std::invalid_argument("perturbation diagonal must be zero");
      if (v < 0.0 || v > 1.0) throw std::invalid_argument("perturbation entries must lie in [0,1]");
      sum += v;
    }
  const double mean = d > 1 ? sum / (d * (d - 1.0)) : 0.0;
  ModeSource m;
  m.d = d;
  m.l = s.l;
  CMatrix a = CMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    a(k, k) = (1.0 - mean) * s.c[k];
    for (int j = 0; j < d; ++j)
      if (j != k) a(k, j) = pert.delta(j, k) * s.c[j];
  }
  m.terms.push_back(a);
  return m;
}

SubspacePerturbation random_perturbation(int d, double lo, double hi, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  SubspacePerturbation p;
  p.delta = Eigen::MatrixXd::Zero(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      if (j != k) p.delta(j, k) = u(rng);
  return p;
}

QuditState swap_photons(const QuditState& s) {
  QuditState out = s;
  for (auto& x : out.l) x = -x;
  return out;
}

}  // namespace topospec
