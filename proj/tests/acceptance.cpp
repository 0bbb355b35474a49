// Acceptance checks. Each criterion prints one PASS/FAIL line; the exit code is 0 on PASS.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "topospec/io.hpp"
#include "topospec/spectrum.hpp"
#include "topospec/tomography.hpp"

#ifndef TOPOSPEC_FIXTURE_DIR
#define TOPOSPEC_FIXTURE_DIR "tests/fixtures"
#endif

using namespace topospec;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double step(double x) { return x > 0 ? 1.0 : x < 0 ? 0.0 : 0.5; }

const SpectrumEntry& entry(const TopologicalSpectrum& sp, const std::string& label) {
  for (const auto& e : sp.entries)
    if (e.label == label) return e;
  throw std::runtime_error("no entry " + label);
}

std::vector<double> values_of(const TopologicalSpectrum& sp) { return sp.glued(); }

// Arguments of every step function in the closed form of a canonical triple.
// A zero argument marks an accidental (tie) configuration.
std::vector<int> step_arguments(const std::string& label, const std::array<int, 3>& l) {
  const int a0 = std::abs(l[0]), a1 = std::abs(l[1]), a2 = std::abs(l[2]);
  if (label == "123") return {a0 - a1};
  if (label == "45*") return {a0 - a2};
  if (label == "67*") return {a1 - a2};
  if (label == "124" || label == "125") return {a2 - a1};
  if (label == "126" || label == "127") return {a2 - a0};
  if (label == "451" || label == "452") return {a1 - a2};
  if (label == "456" || label == "457") return {a1 - a0};
  if (label == "671" || label == "672") return {a0 - a2};
  if (label == "674" || label == "675") return {a0 - a1};
  if (label == "12*") return {a0 - a2, a0 + a1 - 2 * a2, a1 - a0};
  if (label == "453") return {a0 - a1, a0 - a2, 2 * a1 - a0 - a2};
  if (label == "673") return {a1 - a0, 2 * a0 - a1 - a2, a1 - a2};
  throw std::runtime_error("unknown label " + label);
}

bool accidental(const std::string& label, const std::array<int, 3>& l) {
  for (int x : step_arguments(label, l))
    if (x == 0) return true;
  return false;
}

// 1. Qubit ladder.
Outcome c1() {
  const auto t0 = Clock::now();
  std::vector<std::pair<int, int>> pairs = {{0, -1}, {5, 0}, {0, -8}};  // N = -1, 5, -8
  std::mt19937 rng(1);
  std::uniform_int_distribution<int> u(-10, 10);
  while (pairs.size() < 30) {
    const int l0 = u(rng), l1 = u(rng);
    if (std::abs(l0) == std::abs(l1) || std::abs(l0 - l1) > 15) continue;
    if (std::find(pairs.begin(), pairs.end(), std::make_pair(l0, l1)) != pairs.end()) continue;
    pairs.push_back({l0, l1});
  }
  double worst = 0.0;
  int maxN = 0;
  for (const auto& [l0, l1] : pairs) {
    const double want = (l0 - l1) * (step(std::abs(l0) - std::abs(l1)) - step(std::abs(l1) - std::abs(l0)));
    const auto sp = compute_spectrum(make_state({l0, l1}, {1.0, 1.0}), SpectrumMode::Full);
    worst = std::max(worst, std::abs(sp.entries.at(0).glued - want));
    maxN = std::max(maxN, static_cast<int>(std::abs(want)));
  }
  const double dt = seconds_since(t0);
  return {worst <= 0.02 && dt < 30.0,
          fmt("30 states, max |N| %d, max |numeric - analytic| %.4f, %.1f s", maxN, worst, dt)};
}

// 2. Qutrit exemplar.
Outcome c2() {
  const std::array<int, 3> l{-1, 0, 1};
  const auto sp = compute_spectrum(make_state({-1, 0, 1}, {1.0, 1.0, 1.0}), SpectrumMode::Canonical18);
  const auto& e123 = entry(sp, "123");
  const auto& e124 = entry(sp, "124");
  const auto& e453 = entry(sp, "453");
  const bool analytic_ok = wrapping_analytic_d3("123", l) == -1.0;
  const bool numeric_ok = std::abs(e123.glued + 1.0) <= 0.05;
  const double twice = 2.0 * e124.raw;
  const bool half_ok = std::abs(twice - std::round(twice)) <= 0.1 && std::lround(twice) % 2 != 0;
  const bool glued_ok = std::abs(std::abs(e124.glued) - 1.0) <= 0.05;
  const bool class_ok = e123.map_class.kind == MapKind::SphereToSphere &&
                        e124.map_class.kind == MapKind::DiskToDisk && e453.map_class.kind == MapKind::DiskToDisk;
  return {analytic_ok && numeric_ok && half_ok && glued_ok && class_ok,
          fmt("N123 analytic %g numeric %.4f; 124 raw %.4f glued %.4f; classes 123 %s 124 %s 453 %s",
              wrapping_analytic_d3("123", l), e123.glued, e124.raw, e124.glued, map_kind_name(e123.map_class.kind),
              map_kind_name(e124.map_class.kind), map_kind_name(e453.map_class.kind))};
}

// 3. Numeric against closed forms over [-4,4]^3.
Outcome c3() {
  const auto t0 = Clock::now();
  int compared = 0, bad = 0, excluded = 0, singular = 0, singular_conv = 0;
  double worst = 0.0;
  std::string first_bad;
  for (int a = -4; a <= 4; ++a)
    for (int b = -4; b <= 4; ++b)
      for (int c = -4; c <= 4; ++c) {
        if (a == b || b == c || a == c) continue;
        const std::array<int, 3> l{a, b, c};
        const auto sp = compute_spectrum(make_state({a, b, c}, {1.0, 1.0, 1.0}), SpectrumMode::Canonical18);
        for (const auto& e : sp.entries) {
          if (e.singular) {
            ++singular;
            singular_conv += e.converged ? 1 : 0;
          }
          if (accidental(e.label, l)) {
            ++excluded;
            continue;
          }
          ++compared;
          const double err = std::abs(e.glued - wrapping_analytic_d3(e.label, l));
          worst = std::max(worst, err);
          if (err >= 0.05) {
            if (bad++ == 0) first_bad = fmt(" first mismatch %s at (%d,%d,%d)", e.label.c_str(), a, b, c);
          }
        }
      }
  const double dt = seconds_since(t0);
  const double conv = singular ? double(singular_conv) / singular : 1.0;
  return {bad == 0 && conv >= 0.95 && dt < 600.0,
          fmt("%d entries compared, %d mismatches, max error %.4f, %d accidental excluded; singular converged %d/%d; "
              "%.1f s%s",
              compared, bad, worst, excluded, singular_conv, singular, dt, first_bad.c_str())};
}

// 4. Counting and full-spectrum runtime.
Outcome c4() {
  const bool counts = enumerate_triples(3, SpectrumMode::Full).size() == 56 &&
                      enumerate_triples(5, SpectrumMode::Full).size() == 2024 &&
                      enumerate_triples(7, SpectrumMode::Full).size() == 17296 && independent_count(3) == 9;
  std::string timing;
  bool fast = true;
  for (int d : {5, 7}) {
    std::vector<int> l;
    std::vector<cplx> c;
    for (int k = 0; k < d; ++k) {
      l.push_back(k - d / 2);
      c.push_back(1.0);
    }
    const auto t0 = Clock::now();
    const auto sp = compute_spectrum(make_state(l, c), SpectrumMode::Full);
    const double dt = seconds_since(t0);
    fast = fast && dt < 900.0;
    timing += fmt("; d=%d %zu triples in %.1f s (%d above quadrature tolerance)", d, sp.entries.size(), dt,
                  sp.nonconverged());
  }
  return {counts && fast, fmt("counts 56/2024/17296, independent(3) = %lld%s, %u hardware threads",
                              independent_count(3), timing.c_str(), std::thread::hardware_concurrency())};
}

// 5. Dependency scan.
Outcome c5() {
  const auto rep = dependency_scan(10);
  bool holds = true;
  for (const auto& r : rep.relations) holds = holds && r.holds && r.max_residual == 0.0;
  for (const auto& r : rep.pairwise) holds = holds && r.holds && r.max_residual == 0.0;
  return {rep.rank == 9 && holds && rep.relations.size() == 3 && rep.pairwise.size() == 6,
          fmt("rank %d over %ld samples; 3 relations and 6 identities %s", rep.rank, rep.samples,
              holds ? "hold exactly" : "violated")};
}

// 6. Scaling law.
Outcome c6() {
  const auto a1 = analytic_spectrum_d3({-1, 0, 1});
  const auto a3 = analytic_spectrum_d3({-3, 0, 3});
  bool exact = true;
  for (size_t k = 0; k < a1.size(); ++k) exact = exact && a3[k] == 3.0 * a1[k];
  const auto n1 = compute_spectrum(make_state({-1, 0, 1}, {1.0, 1.0, 1.0}), SpectrumMode::Canonical18).glued();
  const auto n3 = compute_spectrum(make_state({-3, 0, 3}, {1.0, 1.0, 1.0}), SpectrumMode::Canonical18).glued();
  double worst = 0.0;
  for (size_t k = 0; k < n1.size(); ++k) worst = std::max(worst, std::abs(n3[k] - 3.0 * n1[k]));
  return {exact && worst <= 0.1,
          fmt("analytic %s; numeric max |N(-3,0,3) - 3 N(-1,0,1)| %.4f", exact ? "exact" : "differs", worst)};
}

// 7. Singularity classifier against measured small-r growth.
Outcome c7() {
  const std::vector<std::string> labels = {"124", "125", "126", "127", "451", "452", "456", "457", "671",
                                           "672", "674", "675", "453", "673", "12*", "123", "45*", "67*"};
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> u(-6, 6);
  std::uniform_int_distribution<size_t> pick(0, labels.size() - 1);
  auto generic = [](const std::array<int, 3>& l) {
    const int a[3] = {std::abs(l[0]), std::abs(l[1]), std::abs(l[2])};
    if (a[0] == a[1] || a[1] == a[2] || a[0] == a[2]) return false;
    for (int i = 0; i < 3; ++i)
      if (2 * a[i] == a[(i + 1) % 3] + a[(i + 2) % 3]) return false;
    return true;
  };
  // Median over phi of |density| in Cartesian measure.
  auto growth = [](const UnitField& f, double r) {
    const int n = 720;
    std::vector<double> v(n);
    for (int k = 0; k < n; ++k) v[k] = std::abs(f.density(r, (k + 0.5) * 2.0 * M_PI / n)) / r;
    std::nth_element(v.begin(), v.begin() + n / 2, v.end());
    return v[n / 2];
  };
  int n_sing = 0, n_reg = 0, agree = 0;
  std::string first_bad;
  while (n_sing + n_reg < 50) {
    const std::array<int, 3> l{u(rng), u(rng), u(rng)};
    if (!generic(l)) continue;
    const std::string& label = labels[pick(rng)];
    const bool sing = singularity_class(label, l) == Singularity::SingularAtOrigin;
    if ((sing && n_sing >= 25) || (!sing && n_reg >= 25)) continue;
    (sing ? n_sing : n_reg)++;
    const auto s = make_state({l[0], l[1], l[2]}, {1.0, 1.0, 1.0});
    const UnitField f = triple_field(s, canonical_triple(label), false);
    const double hi = growth(f, 1e-3), lo = growth(f, 1e-2);
    const double ratio = lo > 0.0 ? hi / lo : 0.0;
    const bool measured = ratio > 5.0 && ratio < 20.0;
    if (measured == sing)
      ++agree;
    else if (first_bad.empty())
      first_bad = fmt("; first disagreement %s at (%d,%d,%d) ratio %.3g", label.c_str(), l[0], l[1], l[2], ratio);
  }
  return {agree == 50, fmt("%d/50 agree (%d singular, %d regular)%s", agree, n_sing, n_reg, first_bad.c_str())};
}

// 8. Accidental invariants.
Outcome c8() {
  std::string detail;
  bool ok = true;
  for (const auto& l : {std::vector<int>{1, 2, 2}, std::vector<int>{1, 4, 2}, std::vector<int>{1, 4, 6}}) {
    const auto sp = compute_spectrum(make_state(l, {1.0, 1.0, 1.0}, true), SpectrumMode::Full);
    const double v = entry(sp, "135").glued;
    ok = ok && std::abs(v + 1.0) <= 0.05;
    detail += fmt("%s(%d,%d,%d): %.4f", detail.empty() ? "" : "; ", l[0], l[1], l[2], v);
  }
  return {ok, "triple 1-3-5 " + detail};
}

// 9. Amplitude independence.
Outcome c9() {
  const auto sp_max = compute_spectrum(make_state({-3, 0, 3}, {1.0, 1.0, 1.0}), SpectrumMode::Canonical18);
  const auto sp_non =
      compute_spectrum(make_state({-3, 0, 3}, {0.3333, 0.2857, 0.3810}), SpectrumMode::Canonical18);
  const double cn = similarity(values_of(sp_max), values_of(sp_non)).cosine;
  const double ca = similarity(sp_max.analytic_or_glued(), sp_non.analytic_or_glued()).cosine;
  return {std::abs(cn - 1.0) <= 1e-6,
          fmt("numeric cosine %.6f (12* %.3f vs %.3f, 453 %.3f vs %.3f); closed-form cosine %.6f", cn,
              entry(sp_max, "12*").glued, entry(sp_non, "12*").glued, entry(sp_max, "453").glued,
              entry(sp_non, "453").glued, ca)};
}

// 10. Emergence of topology under subspace injection.
Outcome c10() {
  const auto s = make_state({-3, 0, 3}, {0.3333, 0.2857, 0.3810});
  const auto base = compute_spectrum(s, SpectrumMode::Canonical18);
  const auto pert = random_perturbation(3, 0.025, 0.051, 7);
  const auto moved = compute_spectrum(inject_subspace(s, pert), SpectrumMode::Canonical18);
  int emerged = 0, changed = 0, nonzero = 0;
  double drift = 0.0;
  for (const auto& b : base.entries) nonzero += b.analytic && *b.analytic != 0.0 ? 1 : 0;
  std::string names;
  for (size_t k = 0; k < base.entries.size(); ++k) {
    const auto& b = base.entries[k];
    const auto& m = moved.entries[k];
    if (b.trivial && std::abs(m.glued) > 0.1) {
      ++emerged;
      names += " " + m.label + fmt("=%.3f", m.glued);
    }
    if (b.analytic && *b.analytic != 0.0) {
      const double change = std::abs(m.glued - b.glued);
      drift = std::max(drift, change);
      changed += change > 0.1 ? 1 : 0;
    }
  }
  const double cos = similarity(values_of(base), values_of(moved)).cosine;
  return {emerged >= 1 && drift <= 0.1 && cos < 1.0,
          fmt("%d emergent entries%s; %d of %d nonzero entries moved by > 0.1 (max %.4f); cosine %.4f", emerged,
              names.c_str(), changed, nonzero, drift, cos)};
}

// 11. Two discretized monopole charge forms.
Outcome c11() {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> n(5, 40);
  std::uniform_real_distribution<double> h(0.01, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    PlanarField f;
    f.nx = n(rng);
    f.ny = n(rng);
    f.dx = h(rng);
    f.dy = h(rng);
    for (int k = 0; k < f.nx * f.ny; ++k) f.s.push_back(Vec3(g(rng), g(rng), g(rng)).normalized());
    const double a = charge_area_element_form(f), b = charge_planar_form(f);
    worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
  }
  return {worst <= 1e-12, fmt("20 random fields, max relative difference %.2e", worst)};
}

// 12. Tomography round trip.
Outcome c12() {
  bool sizes = true;
  for (int d : {2, 3}) {
    std::vector<int> l;
    for (int k = 0; k < d; ++k) l.push_back(k - 1);
    const auto set = projection_set(d, l);
    const int k = 4 * d * (d - 1) / 2 + d;
    sizes = sizes && set.size() == k && set.size() * set.size() == k * k;
  }
  const auto q2 = make_state({-1, 1}, {1.0, 1.0});
  const auto q3 = make_state({-1, 0, 1}, {1.0, 1.0, 1.0});
  double f_ideal = 1.0;
  for (const auto* s : {&q2, &q3}) {
    const CMatrix rho = density_from_state(*s);
    const auto set = projection_set(s->d, s->l);
    const auto c = simulate_coincidences(rho, set, 1e4, parse_noise("none"), 0);
    f_ideal = std::min(f_ideal, fidelity(rho, reconstruct(c, set).rho));
  }
  std::vector<double> fs;
  const CMatrix rho = density_from_state(q3);
  const auto set = projection_set(3, q3.l);
  for (int seed = 1; seed <= 20; ++seed) {
    const auto c = simulate_coincidences(rho, set, 1e4, parse_noise("poisson"), seed);
    fs.push_back(fidelity(rho, reconstruct(c, set).rho));
  }
  std::sort(fs.begin(), fs.end());
  const double median = 0.5 * (fs[9] + fs[10]);
  return {sizes && f_ideal > 0.999 && median > 0.9,
          fmt("settings 36 (d=2) and 225 (d=3) %s; noiseless F %.6f; Poisson 1e4 median F %.5f (min %.5f)",
              sizes ? "match" : "differ", f_ideal, median, fs.front())};
}

// 13. Similarity scores against measured spectra.
Outcome c13() {
  const std::filesystem::path dir = TOPOSPEC_FIXTURE_DIR;
  const auto cfg = nlohmann::json::parse(read_text((dir / "similarity_scores.json").string()));
  const double tol = cfg.at("tolerance").get<double>();
  bool ok = true;
  std::string detail;
  for (const auto& cs : cfg.at("cases")) {
    const auto l = cs.at("l").get<std::vector<int>>();
    const std::string tag = fmt("(%d,%d,%d)", l[0], l[1], l[2]);
    const auto path = dir / cs.at("measured").get<std::string>();
    if (!std::filesystem::exists(path)) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + tag + " missing fixture " + path.filename().string();
      continue;
    }
    const auto measured = spectrum_values(read_spectrum_csv(path.string()));
    const auto ref = analytic_spectrum_d3({l[0], l[1], l[2]});
    const auto sc = similarity(measured, ref);
    const bool here = std::abs(sc.residual - cs.at("residual").get<double>()) <= tol &&
                      std::abs(sc.cosine - cs.at("cosine").get<double>()) <= tol;
    ok = ok && here;
    detail += (detail.empty() ? "" : "; ") + tag + fmt(" residual %.3f cosine %.3f", sc.residual, sc.cosine);
  }
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  int criterion = 0;
  bool known_failure = false;
  app.add_option("--criterion", criterion, "criterion number, 0 for all")->check(CLI::Range(0, 13));
  app.add_flag("--known-failure", known_failure, "exit with 77 (skip) instead of 1 on FAIL");
  CLI11_PARSE(app, argc, argv);

  const std::map<int, std::function<Outcome()>> checks = {
      {1, c1}, {2, c2}, {3, c3},   {4, c4},   {5, c5},   {6, c6},   {7, c7},
      {8, c8}, {9, c9}, {10, c10}, {11, c11}, {12, c12}, {13, c13}};
  bool all = true;
  for (const auto& [n, fn] : checks) {
    if (criterion != 0 && n != criterion) continue;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("criterion %2d %s  %s\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  if (all) return 0;
  return known_failure ? 77 : 1;
}
