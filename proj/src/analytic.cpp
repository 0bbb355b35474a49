#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <numeric>

#include "topospec/invariants.hpp"

namespace topospec {

double heaviside(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? 0.0 : 0.5); }

double sgn(double x) { return heaviside(x) - heaviside(-x); }

const std::vector<std::string>& canonical_labels() {
  static const std::vector<std::string> labels = {"123", "45*", "67*", "124", "125", "126", "127", "12*", "451",
                                                  "452", "453", "456", "457", "671", "672", "673", "674", "675"};
  return labels;
}

namespace {

Axis cartan_axis(int row, int col) {
  const auto cw = cartan_weyl(3);
  for (const auto& r : cw.roots)
    if (r.row == row && r.col == col) {
      Axis a;
      for (int k = 0; k < 2; ++k)
        if (r.cartan_combo(k) != 0.0) a.weights.push_back({cw.cartan[k].index, r.cartan_combo(k)});
      return a;
    }
  throw std::logic_error("missing root");
}

double either(double x, double y) {
  const double a = heaviside(x), b = heaviside(y);
  return a + b - a * b;
}

}  // namespace

TripleSpec canonical_triple(const std::string& label) {
  const auto& labels = canonical_labels();
  if (std::find(labels.begin(), labels.end(), label) == labels.end())
    throw UnknownLabel("unknown canonical triple '" + label + "'");
  TripleSpec t;
  t.label = label;
  t.axes[0] = Axis::single(label[0] - '0');
  t.axes[1] = Axis::single(label[1] - '0');
  if (label[2] != '*') {
    t.axes[2] = Axis::single(label[2] - '0');
  } else if (label[0] == '6') {
    t.axes[2] = cartan_axis(2, 3);
  } else {
    t.axes[2] = cartan_axis(1, 3);
  }
  return t;
}

double wrapping_analytic_d3(const std::string& label, const std::array<int, 3>& l) {
  const double l0 = l[0], l1 = l[1], l2 = l[2];
  const double a0 = std::abs(l0), a1 = std::abs(l1), a2 = std::abs(l2);
  static const std::map<std::string, int> code = {{"123", 0},  {"45*", 1},  {"67*", 2},  {"124", 3},  {"125", 3},
                                                  {"126", 4},  {"127", 4},  {"12*", 5},  {"451", 6},  {"452", 6},
                                                  {"453", 7},  {"456", 8},  {"457", 8},  {"671", 9},  {"672", 9},
                                                  {"673", 10}, {"674", 11}, {"675", 11}};
  const auto it = code.find(label);
  if (it == code.end()) throw UnknownLabel("unknown canonical triple '" + label + "'");
  switch (it->second) {
    case 0: return (l0 - l1) * sgn(a0 - a1);
    case 1: return (l0 - l2) * sgn(a0 - a2);
    case 2: return (l1 - l2) * sgn(a1 - a2);
    case 3: return (l0 - l1) * sgn(a2 - a1);
    case 4: return (l0 - l1) * sgn(a2 - a0);
    case 5:
      return (l0 - l1) * sgn(a0 - a2) *
             (either(a0 + a1 - 2 * a2, a1 - a0) + either(a0 - a1, 2 * a2 - a0 - a1));
    case 6: return -(l0 - l2) * sgn(a1 - a2);
    case 7:
      return (l0 - l2) * sgn(a0 - a1) * (either(a0 - a2, 2 * a1 - a0 - a2) + either(a2 - a0, a0 + a2 - 2 * a1));
    case 8: return -(l0 - l2) * sgn(a1 - a0);
    case 9: return (l1 - l2) * sgn(a0 - a2);
    case 10:
      return (l2 - l1) * sgn(a1 - a0) * (either(2 * a0 - a1 - a2, a1 - a2) + either(a1 + a2 - 2 * a0, a2 - a1));
    case 11: return (l1 - l2) * sgn(a0 - a1);
  }
  return 0.0;
}

double wrapping_analytic_usual(int d, const RootPair& root, const std::vector<int>& l) {
  if (static_cast<int>(l.size()) != d) throw std::invalid_argument("charge list length differs from d");
  if (root.row < 1 || root.col > d || root.row >= root.col) throw std::invalid_argument("invalid root");
  const double li = l[root.row - 1], lj = l[root.col - 1];
  return (li - lj) * sgn(std::abs(li) - std::abs(lj));
}

namespace {

struct PairInfo {
  int row = 0, col = 0;
  int third = -1;
  double orient = 1.0;
};

bool find_pair(int d, const TripleSpec& spec, PairInfo& info) {
  for (int k = 0; k < 3; ++k) {
    const Axis& a = spec.axes[k];
    const Axis& b = spec.axes[(k + 1) % 3];
    if (!a.is_single() || !b.is_single()) continue;
    if (root_of_pair(d, a.weights[0].first, b.weights[0].first, info.row, info.col)) {
      info.third = (k + 2) % 3;
      info.orient = 1.0;
      return true;
    }
    if (root_of_pair(d, b.weights[0].first, a.weights[0].first, info.row, info.col)) {
      info.third = (k + 2) % 3;
      info.orient = -1.0;
      return true;
    }
  }
  return false;
}

// Terms of the leading exponent at one end: the smallest exponent for r -> 0,
// the largest for r -> infinity.
std::vector<FieldTerm> leading_group(const ComponentField& f, bool at_origin, double& e) {
  std::vector<FieldTerm> out;
  if (f.terms.empty()) return out;
  e = f.terms.front().e;
  for (const auto& t : f.terms) e = at_origin ? std::min(e, t.e) : std::max(e, t.e);
  for (const auto& t : f.terms)
    if (t.e == e) out.push_back(t);
  return out;
}

// Range of sum_n (a cos n phi + b sin n phi) over one period.
void trig_range(const std::vector<FieldTerm>& g, double& lo, double& hi) {
  int nmax = 0;
  for (const auto& t : g) nmax = std::max(nmax, t.n);
  const int samples = 512 * std::max(1, nmax);
  lo = INFINITY;
  hi = -INFINITY;
  for (int k = 0; k < samples; ++k) {
    const double phi = (k + 0.5) * 2.0 * std::numbers::pi / samples;
    double v = 0.0;
    for (const auto& t : g) v += t.a * std::cos(t.n * phi) + t.b * std::sin(t.n * phi);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
}

// Limit of the third unit-vector component at one end. Returns false on a tie.
bool end_limit(const ComponentField& third, double e_pair, bool at_origin, double sheet, double& z, bool& wedge,
               bool& point) {
  wedge = false;
  point = false;
  z = 0.0;
  double e = 0.0;
  const auto g = leading_group(third, at_origin, e);
  if (g.empty()) return true;
  if (e == e_pair) return false;
  const bool dominant = at_origin ? e < e_pair : e > e_pair;
  if (!dominant) return true;
  double lo, hi;
  trig_range(g, lo, hi);
  if (lo > 0.0) {
    z = 1.0;
    point = true;
  } else if (hi < 0.0) {
    z = -1.0;
    point = true;
  } else if (lo < 0.0 && hi > 0.0) {
    z = sheet;
    wedge = true;
  } else {
    return false;
  }
  return true;
}

}  // namespace

std::optional<double> wrapping_analytic_pattern(const QuditState& s, const TripleSpec& spec) {
  PairInfo info;
  if (!find_pair(s.d, spec, info)) return std::nullopt;
  const cplx ci = s.c[info.row - 1], cj = s.c[info.col - 1];
  if (std::abs(ci) == 0.0 || std::abs(cj) == 0.0) return 0.0;
  const double li = s.l[info.row - 1], lj = s.l[info.col - 1];
  const double e_pair = std::abs(li) + std::abs(lj);
  const ComponentField third = component_field(s, spec.axes[info.third]);
  int slot = 2;
  const double sheet = sheet_sign(s.d, spec, slot);
  double z0, zi;
  bool w0, wi, p0, pi;
  if (!end_limit(third, e_pair, true, sheet, z0, w0, p0)) return std::nullopt;
  if (!end_limit(third, e_pair, false, sheet, zi, wi, pi)) return std::nullopt;
  const double raw = info.orient * 0.5 * (li - lj) * (zi - z0);
  const bool sphere = p0 && pi;
  return sphere && !is_exotic_pair_triple(s.d, spec) ? raw : 2.0 * raw;
}

bool is_exotic_pair_triple(int d, const TripleSpec& spec) {
  PairInfo info;
  if (!find_pair(d, spec, info)) return false;
  const RVector third = spec.axes[info.third].dense(d);
  RVector own = RVector::Zero(basis_size(d));
  const auto cw = cartan_weyl(d);
  for (const auto& r : cw.roots)
    if (r.row == info.row && r.col == info.col)
      for (int k = 0; k < d - 1; ++k) own(cw.cartan[k].index - 1) = r.cartan_combo(k);
  const double c = third.dot(own) / (third.norm() * own.norm());
  return std::abs(std::abs(c) - 1.0) > 1e-12;
}

Singularity singularity_class(const std::string& label, const std::array<int, 3>& l) {
  const int a0 = std::abs(l[0]), a1 = std::abs(l[1]), a2 = std::abs(l[2]);
  auto res = [](bool singular) { return singular ? Singularity::SingularAtOrigin : Singularity::Regular; };
  if (label == "123" || label == "45*" || label == "67*" || label == "128" || label == "458" || label == "678")
    return Singularity::Regular;
  if (label == "124" || label == "125") return res(a2 == a1 + 1);
  if (label == "126" || label == "127") return res(a2 == a0 + 1);
  if (label == "451" || label == "452") return res(a1 == a2 + 1);
  if (label == "456" || label == "457") return res(a1 == a0 + 1);
  if (label == "671" || label == "672") return res(a0 == a2 + 1);
  if (label == "674" || label == "675") return res(a0 == a1 + 1);
  if (label == "453")
    return res((a2 < a1 && a1 < a0 && 2 * a1 == a0 + a2 + 1) || (a2 < a0 && a0 < a1 && a0 == a2 + 1));
  if (label == "673")
    return res((a2 < a0 && a0 < a1 && 2 * a0 == a1 + a2 + 1) || (a2 < a1 && a1 < a0 && a1 == a2 + 1));
  if (label == "12*")
    return res((a1 < a2 && a2 < a0 && 2 * a2 == a0 + a1 + 1) || (a1 < a0 && a0 < a2 && a0 == a1 + 1));
  throw UnknownLabel("no singularity classification for triple '" + label + "'");
}

const char* singularity_name(Singularity s) { return s == Singularity::Regular ? "regular" : "singular"; }

AccidentalPrediction accidental_predict(const QuditState& s, const TripleSpec& spec) {
  AccidentalPrediction out;
  int cos_slot = -1, sin_slot = -1;
  int cos_root[2] = {0, 0}, sin_root[2] = {0, 0};
  for (int k = 0; k < 3; ++k) {
    const Axis& a = spec.axes[k];
    if (!a.is_single()) continue;
    const int idx = a.weights[0].first;
    for (int j = 2; j <= s.d; ++j)
      for (int i = 1; i < j; ++i) {
        if (sym_index(i, j) == idx && cos_slot < 0) {
          cos_slot = k;
          cos_root[0] = i;
          cos_root[1] = j;
        }
        if (antisym_index(i, j) == idx && sin_slot < 0) {
          sin_slot = k;
          sin_root[0] = i;
          sin_root[1] = j;
        }
      }
  }
  if (cos_slot < 0 || sin_slot < 0) return out;
  if (cos_root[0] == sin_root[0] && cos_root[1] == sin_root[1]) return out;
  out.mixed = true;
  const int li = s.l[cos_root[0] - 1], lj = s.l[cos_root[1] - 1];
  const int lk = s.l[sin_root[0] - 1], lm = s.l[sin_root[1] - 1];
  const int a = li - lj;   // cos((l_i - l_j) phi)
  const int b = lm - lk;   // sin((l_m - l_k) phi)
  if (a == 0 || b == 0) {
    out.value = 0.0;
    return out;
  }
  const int p = std::gcd(std::abs(a), std::abs(b));
  const bool odd = (std::abs(a) / p) % 2 == 1 && (std::abs(b) / p) % 2 == 1;
  if (!odd) {
    out.value = 0.0;
    return out;
  }
  out.p = p;
  // winding of (cos(a phi), sin(b phi)) about the origin
  const int w = p * (b > 0 ? 1 : -1) * (((std::abs(b) / p - 1) / 2) % 2 == 0 ? 1 : -1);
  const int z_slot = 3 - cos_slot - sin_slot;
  const ComponentField zf = component_field(s, spec.axes[z_slot]);
  const ComponentField xf = component_field(s, spec.axes[cos_slot]);
  const ComponentField yf = component_field(s, spec.axes[sin_slot]);
  double zlim[2];
  for (int end = 0; end < 2; ++end) {
    const bool origin = end == 0;
    double ez = 0.0, ex = 0.0, ey = 0.0;
    const auto gz = leading_group(zf, origin, ez);
    const auto gx = leading_group(xf, origin, ex);
    const auto gy = leading_group(yf, origin, ey);
    if (gz.empty() || gx.empty() || gy.empty()) return out;
    const bool dom = origin ? (ez < ex && ez < ey) : (ez > ex && ez > ey);
    if (!dom) return out;
    double lo, hi;
    trig_range(gz, lo, hi);
    if (lo > 0.0)
      zlim[end] = 1.0;
    else if (hi < 0.0)
      zlim[end] = -1.0;
    else
      return out;
  }
  // even permutation of (x, y, z) slots carries the usual orientation
  const int perm[3] = {cos_slot, sin_slot, z_slot};
  int inversions = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (perm[i] > perm[j]) ++inversions;
  const double orient = inversions % 2 == 0 ? -1.0 : 1.0;
  out.value = orient * w * 0.5 * (zlim[1] - zlim[0]);
  return out;
}

WrappingResult glue(WrappingResult r, MapKind kind) {
  r.glued = kind == MapKind::DiskToDisk ? 2.0 * r.raw : r.raw;
  return r;
}

WrappingResult glue(WrappingResult r, MapKind kind, bool exotic_pair) {
  return glue(r, exotic_pair && kind == MapKind::SphereToSphere ? MapKind::DiskToDisk : kind);
}

}  // namespace topospec
