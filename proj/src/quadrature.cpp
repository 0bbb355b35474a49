#include "topospec/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "topospec/parallel.hpp"

namespace topospec {

namespace {

struct Level {
  std::vector<double> fine;
  std::vector<double> coarse;
};

struct CompiledTerm {
  int e_idx;
  double e;
  int n;
  double a;
  double b;
};

Level integrate_level(const std::vector<ComponentField>& comps, const std::vector<BatchTriple>& triples,
                      const std::vector<int>& active, double t_min, double t_max, int n_t, int n_phi, int threads) {
  const int nc = static_cast<int>(comps.size());
  const int nt = n_t;
  const double h = (t_max - t_min) / (nt - 1);

  std::map<double, int> e_index;
  for (const auto& c : comps)
    for (const auto& t : c.terms) e_index.emplace(t.e, 0);
  int k = 0;
  std::vector<double> exps;
  for (auto& [e, idx] : e_index) {
    idx = k++;
    exps.push_back(e);
  }
  const int ne = static_cast<int>(exps.size());
  std::vector<double> table(static_cast<size_t>(ne) * nt);
  for (int i = 0; i < nt; ++i) {
    const double t = t_min + i * h;
    double shift = -INFINITY;
    for (double e : exps) shift = std::max(shift, e * t);
    for (int j = 0; j < ne; ++j) table[static_cast<size_t>(j) * nt + i] = std::exp(exps[j] * t - shift);
  }
  std::vector<std::vector<CompiledTerm>> cterms(nc);
  for (int c = 0; c < nc; ++c)
    for (const auto& t : comps[c].terms) cterms[c].push_back({e_index.at(t.e), t.e, t.n, t.a, t.b});

  std::vector<double> w(nt), wc(nt, 0.0);
  for (int i = 0; i < nt; ++i) w[i] = (i == 0 || i == nt - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
  for (auto& x : w) x *= h / 3.0;
  const int ncoarse = (nt - 1) / 2 + 1;
  for (int j = 0; j < ncoarse; ++j)
    wc[2 * j] = ((j == 0 || j == ncoarse - 1) ? 1.0 : (j % 2 ? 4.0 : 2.0)) * (2.0 * h) / 3.0;

  std::vector<char> used(nc, 0);
  for (int idx : active)
    for (int s = 0; s < 3; ++s) used[triples[idx].comp[s]] = 1;

  const int chunks = std::min(n_phi, 64);
  const size_t na = active.size();
  std::vector<std::vector<double>> fine(chunks, std::vector<double>(na, 0.0));
  std::vector<std::vector<double>> coarse(chunks, std::vector<double>(na, 0.0));
  const double dphi = 2.0 * std::numbers::pi / n_phi;

  parallel_for(
      chunks,
      [&](size_t ch) {
        const int k0 = static_cast<int>(ch * n_phi / chunks), k1 = static_cast<int>((ch + 1) * n_phi / chunks);
        std::vector<double> M(static_cast<size_t>(nc) * nt), MT(M.size()), MP(M.size());
        for (int kk = k0; kk < k1; ++kk) {
          const double phi = (kk + 0.5) * dphi;
          for (int c = 0; c < nc; ++c) {
            if (!used[c]) continue;
            double* m = &M[static_cast<size_t>(c) * nt];
            double* mt = &MT[static_cast<size_t>(c) * nt];
            double* mp = &MP[static_cast<size_t>(c) * nt];
            std::fill(m, m + nt, 0.0);
            std::fill(mt, mt + nt, 0.0);
            std::fill(mp, mp + nt, 0.0);
            for (const auto& term : cterms[c]) {
              const double cs = std::cos(term.n * phi), sn = std::sin(term.n * phi);
              const double alpha = term.a * cs + term.b * sn;
              const double beta = term.n * (term.b * cs - term.a * sn);
              const double ae = alpha * term.e;
              const double* ex = &table[static_cast<size_t>(term.e_idx) * nt];
              for (int i = 0; i < nt; ++i) {
                m[i] += alpha * ex[i];
                mt[i] += ae * ex[i];
                mp[i] += beta * ex[i];
              }
            }
          }
          const bool even = kk % 2 == 0;
          for (size_t a = 0; a < na; ++a) {
            const BatchTriple& tr = triples[active[a]];
            const double* m0 = &M[static_cast<size_t>(tr.comp[0]) * nt];
            const double* m1 = &M[static_cast<size_t>(tr.comp[1]) * nt];
            const double* m2 = &M[static_cast<size_t>(tr.comp[2]) * nt];
            const double* t0 = &MT[static_cast<size_t>(tr.comp[0]) * nt];
            const double* t1 = &MT[static_cast<size_t>(tr.comp[1]) * nt];
            const double* t2 = &MT[static_cast<size_t>(tr.comp[2]) * nt];
            const double* p0 = &MP[static_cast<size_t>(tr.comp[0]) * nt];
            const double* p1 = &MP[static_cast<size_t>(tr.comp[1]) * nt];
            const double* p2 = &MP[static_cast<size_t>(tr.comp[2]) * nt];
            double sf = 0.0, sc = 0.0;
            for (int i = 0; i < nt; ++i) {
              double v[3] = {m0[i], m1[i], m2[i]};
              double vt[3] = {t0[i], t1[i], t2[i]};
              double vp[3] = {p0[i], p1[i], p2[i]};
              if (tr.fix) {
                const int s = tr.fixed_component;
                const double sg = v[s] < 0.0 ? -tr.sheet : tr.sheet;
                v[s] *= sg;
                vt[s] *= sg;
                vp[s] *= sg;
              }
              const double mx = std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
              if (mx == 0.0) continue;
              const double inv = 1.0 / mx;
              for (int q = 0; q < 3; ++q) {
                v[q] *= inv;
                vt[q] *= inv;
                vp[q] *= inv;
              }
              const double det = v[0] * (vt[1] * vp[2] - vt[2] * vp[1]) + v[1] * (vt[2] * vp[0] - vt[0] * vp[2]) +
                                 v[2] * (vt[0] * vp[1] - vt[1] * vp[0]);
              const double n2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
              const double dens = det / (n2 * std::sqrt(n2));
              sf += w[i] * dens;
              sc += wc[i] * dens;
            }
            fine[ch][a] += sf * dphi;
            if (even) coarse[ch][a] += sc * 2.0 * dphi;
          }
        }
      },
      threads);

  Level out;
  out.fine.assign(na, 0.0);
  out.coarse.assign(na, 0.0);
  for (int ch = 0; ch < chunks; ++ch)
    for (size_t a = 0; a < na; ++a) {
      out.fine[a] += fine[ch][a];
      out.coarse[a] += coarse[ch][a];
    }
  return out;
}

}  // namespace

std::vector<QuadOutcome> integrate_batch(const std::vector<ComponentField>& comps,
                                         const std::vector<BatchTriple>& triples, const Grid& grid,
                                         const QuadOptions& opt) {
  std::vector<QuadOutcome> out(triples.size());
  if (triples.empty()) return out;
  if (grid.n_r < 5 || (grid.n_r - 1) % 4 != 0) throw std::invalid_argument("n_r must be 4k+1");
  if (grid.n_phi < 2 || grid.n_phi % 2 != 0) throw std::invalid_argument("n_phi must be even");
  const double t_min = std::log(grid.r_min), t_max = std::log(grid.r_max);
  std::vector<int> active(triples.size());
  for (size_t i = 0; i < triples.size(); ++i) active[i] = static_cast<int>(i);
  int n_t = grid.n_r, n_phi = grid.n_phi;
  const double norm = 1.0 / (4.0 * std::numbers::pi);
  for (int level = 0; level <= opt.max_doublings && !active.empty(); ++level) {
    const Level lv = integrate_level(comps, triples, active, t_min, t_max, n_t, n_phi, opt.threads);
    std::vector<int> retry;
    for (size_t a = 0; a < active.size(); ++a) {
      QuadOutcome& q = out[active[a]];
      q.raw = lv.fine[a] * norm;
      q.error = std::abs(lv.fine[a] - lv.coarse[a]) * norm;
      q.n_r = n_t;
      q.n_phi = n_phi;
      q.converged = q.error <= opt.tol;
      if (!q.converged) retry.push_back(active[a]);
    }
    active.swap(retry);
    n_t = 2 * (n_t - 1) + 1;
    n_phi *= 2;
  }
  return out;
}

}  // namespace topospec
