#include "topospec/field_builder.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>

namespace topospec {

RVector Axis::dense(int d) const {
  RVector v = RVector::Zero(basis_size(d));
  for (const auto& [idx, w] : weights) {
    if (idx < 1 || idx > basis_size(d))
      throw std::out_of_range("axis index " + std::to_string(idx) + " out of range for d=" + std::to_string(d));
    v(idx - 1) += w;
  }
  return v;
}

const char* map_kind_name(MapKind k) {
  switch (k) {
    case MapKind::SphereToSphere: return "sphere";
    case MapKind::DiskToDisk: return "disk";
    case MapKind::Degenerate: return "degenerate";
  }
  return "?";
}

MapKind parse_map_kind(const std::string& s) {
  if (s == "sphere") return MapKind::SphereToSphere;
  if (s == "disk") return MapKind::DiskToDisk;
  if (s == "degenerate") return MapKind::Degenerate;
  throw std::invalid_argument("unknown map class '" + s + "'");
}

void ComponentField::eval(double r, double phi, double& m, double& m_r, double& m_phi) const {
  const double g = std::exp(-2.0 * r * r);
  double v = 0.0, vr = 0.0, vp = 0.0;
  for (const auto& t : terms) {
    const double c = std::cos(t.n * phi), s = std::sin(t.n * phi);
    const double ang = t.a * c + t.b * s;
    const double dang = t.n * (t.b * c - t.a * s);
    const double p = t.e == 0.0 ? 1.0 : std::pow(r, t.e);
    const double dp = t.e == 0.0 ? 0.0 : t.e * std::pow(r, t.e - 1.0);
    v += p * ang;
    vr += (dp - 4.0 * r * p) * ang;
    vp += p * dang;
  }
  m = g * v;
  m_r = g * vr;
  m_phi = g * vp;
}

double ComponentField::value(double r, double phi) const {
  double m, mr, mp;
  eval(r, phi, m, mr, mp);
  return m;
}

ComponentField component_field(const ModeSource& src, const Axis& axis) {
  const int d = src.d;
  const auto basis = build_basis(d);
  CMatrix M = CMatrix::Zero(d, d);
  for (const auto& [idx, w] : axis.weights) {
    if (idx < 1 || idx > basis_size(d))
      throw std::out_of_range("axis index " + std::to_string(idx) + " out of range for d=" + std::to_string(d));
    M += w * basis[idx - 1].matrix;
  }
  const int P = static_cast<int>(src.l.size());
  CMatrix K = CMatrix::Zero(P, P);
  double natural = 0.0;
  for (const auto& A : src.terms) {
    K += A.adjoint() * M * A;
    natural += A.squaredNorm();
  }
  natural *= M.norm();

  std::map<std::pair<double, int>, std::pair<double, double>> acc;
  for (int p = 0; p < P; ++p) {
    const double e = 2.0 * std::abs(src.l[p]);
    acc[{e, 0}].first += K(p, p).real();
    for (int q = p + 1; q < P; ++q) {
      const double eq = std::abs(src.l[p]) + std::abs(src.l[q]);
      int n = src.l[q] - src.l[p];
      double a = 2.0 * K(p, q).real(), b = -2.0 * K(p, q).imag();
      if (n < 0) {
        n = -n;
        b = -b;
      }
      if (n == 0) b = 0.0;
      auto& slot = acc[{eq, n}];
      slot.first += a;
      slot.second += b;
    }
  }
  ComponentField f;
  if (natural == 0.0) return f;
  // roundoff relative to the amplitude and axis norms, not to the surviving terms
  const double cut = 1e-12 * natural;
  for (const auto& [k, v] : acc) {
    double a = std::abs(v.first) > cut ? v.first : 0.0;
    double b = std::abs(v.second) > cut ? v.second : 0.0;
    if (a != 0.0 || b != 0.0) f.terms.push_back({k.first, k.second, a, b});
  }
  return f;
}

ComponentField component_field(const QuditState& s, const Axis& axis) { return component_field(mode_source(s), axis); }

Grid resolve_grid(const Grid& g, const std::vector<int>& l) {
  Grid out = g;
  if (!(out.r_min > 0.0) || !(out.r_max > out.r_min)) throw std::invalid_argument("grid requires 0 < r_min < r_max");
  int amax = 0, amin = 1 << 30, dl = 0;
  for (size_t i = 0; i < l.size(); ++i) {
    amax = std::max(amax, std::abs(l[i]));
    amin = std::min(amin, std::abs(l[i]));
    for (size_t j = i + 1; j < l.size(); ++j) dl = std::max(dl, std::abs(l[i] - l[j]));
  }
  if (out.n_phi <= 0) out.n_phi = 64 * std::max(1, dl);
  if (out.n_phi % 2) ++out.n_phi;
  if (out.n_r <= 0) {
    const double span = std::log(out.r_max / out.r_min);
    const int spread = std::max(1, 2 * (amax - amin));
    const int want = static_cast<int>(std::ceil(span * 8.0 * spread));
    out.n_r = std::clamp(want, 256, 16384);
  }
  out.n_r = 4 * ((out.n_r + 2) / 4) + 1;  // Simpson on both the fine and the every-other grid
  return out;
}

namespace {

// Scaled component values at log-radius t: common positive factors dropped.
void scaled_eval(const std::array<ComponentField, 3>& comp, double t, double phi, Vec3& m, Vec3& mt, Vec3& mp) {
  double shift = -INFINITY;
  for (const auto& c : comp)
    for (const auto& term : c.terms) shift = std::max(shift, term.e * t);
  m.setZero();
  mt.setZero();
  mp.setZero();
  for (int k = 0; k < 3; ++k)
    for (const auto& term : comp[k].terms) {
      const double w = std::exp(term.e * t - shift);
      const double c = std::cos(term.n * phi), s = std::sin(term.n * phi);
      const double ang = term.a * c + term.b * s;
      m[k] += w * ang;
      mt[k] += term.e * w * ang;
      mp[k] += w * term.n * (term.b * c - term.a * s);
    }
}

void apply_fix(const UnitField& f, Vec3& m, Vec3& mt, Vec3& mp) {
  if (!f.origin_fixed) return;
  const int k = f.fixed_component;
  const double sg = m[k] < 0.0 ? -1.0 : 1.0;
  m[k] = f.sheet * std::abs(m[k]);
  mt[k] *= f.sheet * sg;
  mp[k] *= f.sheet * sg;
}

}  // namespace

void UnitField::eval(double r, double phi, Vec3& s, Vec3& s_r, Vec3& s_phi) const {
  if (!(r > 0.0)) throw std::invalid_argument("unit field evaluated at r <= 0");
  Vec3 m, mt, mp;
  scaled_eval(comp, std::log(r), phi, m, mt, mp);
  apply_fix(*this, m, mt, mp);
  const double n = m.norm();
  if (n == 0.0) throw DegenerateField("unit field undefined: all components vanish");
  s = m / n;
  s_r = (mt - s * s.dot(mt)) / (n * r);
  s_phi = (mp - s * s.dot(mp)) / n;
}

Vec3 UnitField::unit(double r, double phi) const {
  Vec3 s, a, b;
  eval(r, phi, s, a, b);
  return s;
}

double UnitField::density(double r, double phi) const {
  Vec3 s, a, b;
  eval(r, phi, s, a, b);
  return s.dot(a.cross(b));
}

double sheet_sign(int d, const TripleSpec& spec, int& fixed_component) {
  for (int k = 0; k < 3; ++k) {
    const Axis& a = spec.axes[k];
    const Axis& b = spec.axes[(k + 1) % 3];
    if (!a.is_single() || !b.is_single()) continue;
    int row, col;
    if (root_of_pair(d, a.weights[0].first, b.weights[0].first, row, col) ||
        root_of_pair(d, b.weights[0].first, a.weights[0].first, row, col)) {
      fixed_component = (k + 2) % 3;
      return col == row + 1 ? 1.0 : -1.0;
    }
  }
  fixed_component = 2;
  return 1.0;
}

UnitField triple_field(const ModeSource& src, const TripleSpec& spec, bool fix_origin, const Grid& grid, double sheet,
                       int fixed_component) {
  UnitField f;
  for (int k = 0; k < 3; ++k) f.comp[k] = component_field(src, spec.axes[k]);
  if (f.comp[0].zero() && f.comp[1].zero() && f.comp[2].zero())
    throw DegenerateField("triple " + spec.label + " has identically vanishing components");
  f.origin_fixed = fix_origin;
  f.sheet = sheet;
  f.fixed_component = fixed_component;
  f.grid = resolve_grid(grid, src.l);
  return f;
}

UnitField triple_field(const QuditState& s, const TripleSpec& spec, bool fix_origin, const Grid& grid) {
  int slot = 2;
  const double sg = sheet_sign(s.d, spec, slot);
  return triple_field(mode_source(s), spec, fix_origin, grid, sg, slot);
}

MapClass classify_map(const UnitField& field) {
  UnitField raw = field;
  raw.origin_fixed = false;
  const Grid& g = field.grid;
  const int n = std::max(g.n_phi, 16);
  const double ends[2] = {std::log(g.r_min), std::log(g.r_max)};
  MapClass mc;
  bool constant = true;
  Vec3 first;
  bool have_first = false;
  for (int e = 0; e < 2; ++e) {
    Vec3 mean = Vec3::Zero();
    std::vector<Vec3> pts;
    pts.reserve(n);
    Vec3 lo = Vec3::Constant(INFINITY), hi = Vec3::Constant(-INFINITY);
    for (int k = 0; k < n; ++k) {
      const double phi = (k + 0.5) * 2.0 * std::numbers::pi / n;
      Vec3 m, mt, mp;
      scaled_eval(raw.comp, ends[e], phi, m, mt, mp);
      const double nn = m.norm();
      const Vec3 s = nn > 0.0 ? Vec3(m / nn) : Vec3::Zero();
      pts.push_back(s);
      mean += s;
      lo = lo.cwiseMin(s);
      hi = hi.cwiseMax(s);
      if (!have_first) {
        first = s;
        have_first = true;
      } else if ((s - first).norm() > 1e-9) {
        constant = false;
      }
    }
    mean /= n;
    double var = 0.0;
    for (const auto& p : pts) var += (p - mean).squaredNorm();
    var /= n;
    (e == 0 ? mc.var_r_min : mc.var_r_max) = var;
    const int k = field.fixed_component;
    if (lo[k] < -0.5 && hi[k] > 0.5) {
      mc.wedge = true;
      mc.wedge_component = k;
    }
  }
  if (constant) {
    // probe the interior for any radial variation
    for (int i = 1; i < 16 && constant; ++i) {
      const double t = ends[0] + (ends[1] - ends[0]) * i / 16.0;
      for (int k = 0; k < 8 && constant; ++k) {
        Vec3 m, mt, mp;
        scaled_eval(raw.comp, t, (k + 0.5) * std::numbers::pi / 4.0, m, mt, mp);
        if (m.norm() > 0.0 && (m / m.norm() - first).norm() > 1e-9) constant = false;
      }
    }
  }
  const double thr = 1e-6;
  if (constant)
    mc.kind = MapKind::Degenerate;
  else if (mc.var_r_min < thr && mc.var_r_max < thr)
    mc.kind = MapKind::SphereToSphere;
  else
    mc.kind = MapKind::DiskToDisk;
  return mc;
}

MapClass classify_map(const UnitField& field, const QuditState&) { return classify_map(field); }

void dump_field_csv(const UnitField& f, const std::string& path, int n_r, int n_phi) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "r,phi,S1,S2,S3\n";
  const double t0 = std::log(f.grid.r_min), t1 = std::log(f.grid.r_max);
  out.precision(12);
  for (int i = 0; i < n_r; ++i) {
    const double r = std::exp(t0 + (t1 - t0) * i / std::max(1, n_r - 1));
    for (int k = 0; k < n_phi; ++k) {
      const double phi = (k + 0.5) * 2.0 * std::numbers::pi / n_phi;
      const Vec3 s = f.unit(r, phi);
      out << r << ',' << phi << ',' << s[0] << ',' << s[1] << ',' << s[2] << '\n';
    }
  }
}

}  // namespace topospec
