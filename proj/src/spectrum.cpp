#include "topospec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "topospec/parallel.hpp"

namespace topospec {

const char* mode_name(SpectrumMode m) { return m == SpectrumMode::Full ? "full" : "canonical18"; }

SpectrumMode parse_mode(const std::string& s) {
  if (s == "full" || s == "Full") return SpectrumMode::Full;
  if (s == "canonical18" || s == "Canonical18" || s == "canonical") return SpectrumMode::Canonical18;
  throw std::invalid_argument("unknown mode '" + s + "' (expected full or canonical18)");
}

std::vector<double> TopologicalSpectrum::glued() const {
  std::vector<double> v;
  for (const auto& e : entries) v.push_back(e.glued);
  return v;
}

std::vector<double> TopologicalSpectrum::analytic_or_glued() const {
  std::vector<double> v;
  for (const auto& e : entries) v.push_back(e.analytic ? *e.analytic : e.glued);
  return v;
}

int TopologicalSpectrum::nonconverged() const {
  int n = 0;
  for (const auto& e : entries) n += e.converged ? 0 : 1;
  return n;
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

namespace {

std::string full_label(int d, int a, int b, int c) {
  if (d <= 3) return std::to_string(a) + std::to_string(b) + std::to_string(c);
  return std::to_string(a) + "-" + std::to_string(b) + "-" + std::to_string(c);
}

// Canonical label equal to a cyclic rotation of a sorted d = 3 triple.
std::string canonical_alias(const TripleSpec& t) {
  if (!t.axes[0].is_single() || !t.axes[1].is_single() || !t.axes[2].is_single()) return t.label;
  const int v[3] = {t.axes[0].weights[0].first, t.axes[1].weights[0].first, t.axes[2].weights[0].first};
  for (int k = 0; k < 3; ++k) {
    const std::string s =
        std::to_string(v[k]) + std::to_string(v[(k + 1) % 3]) + std::to_string(v[(k + 2) % 3]);
    for (const auto& c : canonical_labels())
      if (c == s) return s;
    if (s == "128" || s == "458" || s == "678") return s;
  }
  return t.label;
}

bool all_nonzero(const QuditState& s) {
  for (const auto& c : s.c)
    if (std::abs(c) == 0.0) return false;
  return true;
}

TopologicalSpectrum core(const ModeSource& src, SpectrumMode mode, const SpectrumOptions& opt,
                         const QuditState* pure) {
  const int d = src.d;
  TopologicalSpectrum spec;
  spec.d = d;
  spec.mode = mode;
  const auto triples = enumerate_triples(d, mode);
  const Grid grid = resolve_grid(opt.grid, src.l);
  const size_t n = triples.size();

  std::vector<RVector> keys;
  std::vector<ComponentField> comps;
  std::vector<std::array<int, 3>> slots(n);
  for (size_t i = 0; i < n; ++i)
    for (int k = 0; k < 3; ++k) {
      const RVector v = triples[i].axes[k].dense(d);
      int found = -1;
      for (size_t j = 0; j < keys.size(); ++j)
        if ((keys[j] - v).cwiseAbs().maxCoeff() == 0.0) {
          found = static_cast<int>(j);
          break;
        }
      if (found < 0) {
        found = static_cast<int>(keys.size());
        keys.push_back(v);
        comps.push_back(component_field(src, triples[i].axes[k]));
      }
      slots[i][k] = found;
    }

  spec.entries.resize(n);
  std::vector<BatchTriple> batch(n);
  std::vector<int> mult(n, 1);
  std::vector<char> exotic(n, 0);
  const bool table = pure && d == 3 && !pure->degenerate && all_nonzero(*pure);
  parallel_for(
      n,
      [&](size_t i) {
        SpectrumEntry& e = spec.entries[i];
        e.spec = triples[i];
        e.label = triples[i].label;
        UnitField f;
        for (int k = 0; k < 3; ++k) f.comp[k] = comps[slots[i][k]];
        f.grid = grid;
        int slot = 2;
        const double sheet = sheet_sign(d, triples[i], slot);
        f.sheet = sheet;
        f.fixed_component = slot;
        exotic[i] = is_exotic_pair_triple(d, triples[i]);
        BatchTriple& b = batch[i];
        for (int k = 0; k < 3; ++k) b.comp[k] = slots[i][k];
        b.sheet = sheet;
        b.fixed_component = slot;
        if (f.comp[0].zero() && f.comp[1].zero() && f.comp[2].zero()) {
          e.map_class.kind = MapKind::Degenerate;
        } else {
          e.map_class = classify_map(f);
          b.fix = e.map_class.kind == MapKind::DiskToDisk && e.map_class.wedge;
          e.origin_fixed = b.fix;
        }
        if (pure && d == 3) {
          const std::string alias = canonical_alias(triples[i]);
          try {
            e.singular = singularity_class(alias, {pure->l[0], pure->l[1], pure->l[2]}) ==
                         Singularity::SingularAtOrigin;
          } catch (const UnknownLabel&) {
            e.singular = false;
          }
          if (e.singular) mult[i] = 4;
          if (opt.analytic) {
            const auto& cl = canonical_labels();
            if (table && std::find(cl.begin(), cl.end(), alias) != cl.end())
              e.analytic = wrapping_analytic_d3(alias, {pure->l[0], pure->l[1], pure->l[2]});
            else
              e.analytic = wrapping_analytic_pattern(*pure, triples[i]);
          }
        } else if (pure && opt.analytic) {
          e.analytic = wrapping_analytic_pattern(*pure, triples[i]);
        }
      },
      opt.quad.threads);

  for (int m : {1, 4}) {
    std::vector<int> idx;
    for (size_t i = 0; i < n; ++i)
      if (mult[i] == m && !(spec.entries[i].map_class.kind == MapKind::Degenerate && comps[slots[i][0]].zero() &&
                            comps[slots[i][1]].zero() && comps[slots[i][2]].zero()))
        idx.push_back(static_cast<int>(i));
    if (idx.empty()) continue;
    std::vector<BatchTriple> sub;
    for (int i : idx) sub.push_back(batch[i]);
    Grid g = grid;
    g.n_phi *= m;
    const auto res = integrate_batch(comps, sub, g, opt.quad);
    for (size_t a = 0; a < idx.size(); ++a) {
      SpectrumEntry& e = spec.entries[idx[a]];
      e.raw = res[a].raw;
      e.quadrature_error = res[a].error;
      e.converged = res[a].converged;
    }
  }
  for (size_t i = 0; i < n; ++i) {
    SpectrumEntry& e = spec.entries[i];
    WrappingResult w;
    w.raw = e.raw;
    w = glue(w, e.map_class.kind, exotic[i]);
    e.glued = w.glued;
    e.trivial = is_trivial(e.glued);
  }
  return spec;
}

}  // namespace

std::vector<TripleSpec> enumerate_triples(int d, SpectrumMode mode) {
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
  std::vector<TripleSpec> out;
  if (mode == SpectrumMode::Canonical18) {
    if (d != 3) throw std::invalid_argument("canonical18 mode requires d = 3");
    for (const auto& l : canonical_labels()) out.push_back(canonical_triple(l));
    return out;
  }
  const int n = basis_size(d);
  out.reserve(binomial(n, 3));
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b)
      for (int c = b + 1; c <= n; ++c) {
        TripleSpec t;
        t.label = full_label(d, a, b, c);
        t.axes = {Axis::single(a), Axis::single(b), Axis::single(c)};
        out.push_back(std::move(t));
      }
  return out;
}

TopologicalSpectrum compute_spectrum(const QuditState& state, SpectrumMode mode, const SpectrumOptions& opt) {
  const QuditState s = opt.swap_photons ? swap_photons(state) : state;
  return core(mode_source(s), mode, opt, &s);
}

TopologicalSpectrum compute_spectrum(const ModeSource& src, SpectrumMode mode, const SpectrumOptions& opt) {
  ModeSource s = src;
  if (opt.swap_photons)
    for (auto& x : s.l) x = -x;
  return core(s, mode, opt, nullptr);
}

std::vector<double> analytic_spectrum_d3(const std::array<int, 3>& l) {
  std::vector<double> v;
  for (const auto& label : canonical_labels()) v.push_back(wrapping_analytic_d3(label, l));
  return v;
}

long long independent_count(int d) {
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
  if (d == 2) return 1;
  return static_cast<long long>(d) * (d - 1) * (d - 2) * (d + 3) / 4;
}

Capacity capacity(int d) {
  if (d < 2) throw std::invalid_argument("dimension must be at least 2");
  Capacity c;
  c.topo_levels = binomial(d * d - 1, 3);
  c.oam_levels = d;
  c.topo_bits = std::log2(static_cast<double>(c.topo_levels));
  c.oam_bits = std::log2(static_cast<double>(d));
  c.independent = independent_count(d);
  return c;
}

SimilarityScores similarity(const std::vector<double>& a, const std::vector<double>& e) {
  if (a.size() != e.size()) throw std::invalid_argument("spectrum length mismatch");
  double l1a = 0.0, l1e = 0.0, sum_abs_a = 0.0, sq = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    l1a += std::abs(a[i]);
    l1e += std::abs(e[i]);
    sq += (std::abs(a[i]) - std::abs(e[i])) * (std::abs(a[i]) - std::abs(e[i]));
  }
  sum_abs_a = l1a;
  if (l1a == 0.0 || l1e == 0.0) throw std::invalid_argument("similarity undefined for a zero spectrum");
  double dot = 0.0, na = 0.0, ne = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double x = a[i] / l1a, y = e[i] / l1e;
    dot += x * y;
    na += x * x;
    ne += y * y;
  }
  SimilarityScores s;
  s.residual = 1.0 - sq / sum_abs_a;
  s.cosine = dot / (std::sqrt(na) * std::sqrt(ne));
  return s;
}

}  // namespace topospec
