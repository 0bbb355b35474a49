#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "topospec/spectrum.hpp"

namespace topospec {

namespace {

using i128 = __int128;

i128 abs128(i128 x) { return x < 0 ? -x : x; }

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

void normalize(std::vector<i128>& row) {
  i128 g = 0;
  for (auto x : row) g = gcd128(g, x);
  if (g > 1)
    for (auto& x : row) x /= g;
}

// Row-echelon basis kept in reduced integer form; insert returns true when the rank grows.
struct EchelonBasis {
  std::vector<std::vector<i128>> rows;
  std::vector<size_t> pivots;

  bool insert(std::vector<i128> v) {
    for (size_t r = 0; r < rows.size(); ++r) {
      const size_t p = pivots[r];
      if (v[p] == 0) continue;
      const i128 a = rows[r][p], b = v[p];
      const i128 g = gcd128(a, b);
      for (size_t k = 0; k < v.size(); ++k) v[k] = v[k] * (a / g) - rows[r][k] * (b / g);
      normalize(v);
    }
    for (size_t k = 0; k < v.size(); ++k)
      if (v[k] != 0) {
        rows.push_back(std::move(v));
        pivots.push_back(k);
        return true;
      }
    return false;
  }
};

}  // namespace

int exact_rank(const std::vector<std::vector<long long>>& rows) {
  EchelonBasis basis;
  size_t width = 0;
  for (const auto& r : rows) {
    if (width == 0) width = r.size();
    if (r.size() != width) throw std::invalid_argument("exact_rank: rows have unequal length");
    basis.insert(std::vector<i128>(r.begin(), r.end()));
  }
  return static_cast<int>(basis.rows.size());
}

DependencyReport dependency_scan(int l_range) {
  if (l_range < 1) throw std::invalid_argument("l_range must be positive");
  const auto& labels = canonical_labels();
  std::map<std::string, size_t> at;
  for (size_t i = 0; i < labels.size(); ++i) at[labels[i]] = i;

  struct Lin {
    std::string name;
    std::vector<std::pair<std::string, int>> terms;
  };
  const std::vector<Lin> relations = {
      {"N123 - N456 + N674 = 0", {{"123", 1}, {"456", -1}, {"674", 1}}},
      {"N671 - N45* - N126 = 0", {{"671", 1}, {"45*", -1}, {"126", -1}}},
      {"N67* + N451 - N124 = 0", {{"67*", 1}, {"451", 1}, {"124", -1}}},
  };
  const std::vector<Lin> pairwise = {
      {"N124 = N125", {{"124", 1}, {"125", -1}}}, {"N126 = N127", {{"126", 1}, {"127", -1}}},
      {"N451 = N452", {{"451", 1}, {"452", -1}}}, {"N456 = N457", {{"456", 1}, {"457", -1}}},
      {"N671 = N672", {{"671", 1}, {"672", -1}}}, {"N674 = N675", {{"674", 1}, {"675", -1}}},
  };

  DependencyReport rep;
  for (const auto& r : relations) rep.relations.push_back({r.name, 0.0, true});
  for (const auto& r : pairwise) rep.pairwise.push_back({r.name, 0.0, true});

  auto check = [&](const std::vector<Lin>& lins, std::vector<RelationCheck>& out, const std::vector<double>& v) {
    for (size_t i = 0; i < lins.size(); ++i) {
      double s = 0.0;
      for (const auto& [lab, coef] : lins[i].terms) s += coef * v[at[lab]];
      out[i].max_residual = std::max(out[i].max_residual, std::abs(s));
      if (s != 0.0) out[i].holds = false;
    }
  };

  EchelonBasis basis;
  for (int a = -l_range; a <= l_range; ++a)
    for (int b = -l_range; b <= l_range; ++b)
      for (int c = -l_range; c <= l_range; ++c) {
        if (a == b || b == c || a == c) continue;
        const auto v = analytic_spectrum_d3({a, b, c});
        ++rep.samples;
        check(relations, rep.relations, v);
        check(pairwise, rep.pairwise, v);
        if (basis.rows.size() == labels.size()) continue;
        std::vector<i128> row(v.size());
        for (size_t k = 0; k < v.size(); ++k) {
          const double scaled = v[k] * 4.0;
          if (scaled != std::round(scaled)) throw std::runtime_error("analytic invariant is not a quarter-integer");
          row[k] = static_cast<i128>(std::llround(scaled));
        }
        basis.insert(std::move(row));
      }
  rep.rank = static_cast<int>(basis.rows.size());
  return rep;
}

}  // namespace topospec
