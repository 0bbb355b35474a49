#include <cmath>
#include <random>

#include "doctest.h"
#include "topospec/invariants.hpp"

using namespace topospec;

namespace {

double step(double x) { return x > 0 ? 1.0 : x < 0 ? 0.0 : 0.5; }

// Qubit-type wrapping number written directly from the two charges.
double ladder(int l0, int l1) {
  return (l0 - l1) * (step(std::abs(l0) - std::abs(l1)) - step(std::abs(l1) - std::abs(l0)));
}

double numeric_glued(const QuditState& s, const TripleSpec& t) {
  int slot = 2;
  const double sheet = sheet_sign(s.d, t, slot);
  const Grid g = resolve_grid(Grid{}, s.l);
  UnitField f = triple_field(mode_source(s), t, false, g, sheet, slot);
  const MapClass mc = classify_map(f);
  f.origin_fixed = mc.kind == MapKind::DiskToDisk && mc.wedge;
  return glue(wrapping_numeric(f), mc.kind, is_exotic_pair_triple(s.d, t)).glued;
}

TripleSpec pure(int a, int b, int c) {
  return {std::to_string(a) + "-" + std::to_string(b) + "-" + std::to_string(c),
          {Axis::single(a), Axis::single(b), Axis::single(c)}};
}

}  // namespace

TEST_CASE("step conventions") {
  CHECK(heaviside(0.0) == 0.5);
  CHECK(heaviside(2.0) == 1.0);
  CHECK(heaviside(-2.0) == 0.0);
  CHECK(sgn(0.0) == 0.0);
  CHECK(sgn(-3.0) == -1.0);
}

TEST_CASE("qubit wrapping numbers follow the ladder formula") {
  const int pairs[][2] = {{0, 1}, {1, -2}, {-3, 5}, {4, -4}, {2, 7}};
  for (const auto& p : pairs) {
    const auto s = make_state({p[0], p[1]}, {1.0, 1.0});
    const double want = ladder(p[0], p[1]);
    if (std::abs(p[0]) == std::abs(p[1])) continue;  // tie, covered by the analytic check only
    CHECK(std::abs(numeric_glued(s, pure(1, 2, 3)) - want) < 0.02);
    const auto cw = cartan_weyl(2);
    CHECK(wrapping_analytic_usual(2, cw.roots[0], s.l) == want);
  }
}

TEST_CASE("qutrit exemplar closed forms") {
  const std::array<int, 3> l{-1, 0, 1};
  CHECK(wrapping_analytic_d3("123", l) == -1.0);
  CHECK(wrapping_analytic_d3("45*", l) == 0.0);
  CHECK(wrapping_analytic_d3("67*", l) == 1.0);
  CHECK(std::abs(wrapping_analytic_d3("124", l)) == 1.0);
  CHECK_THROWS_AS(wrapping_analytic_d3("999", l), UnknownLabel);
}

TEST_CASE("numeric and analytic agree away from ties") {
  // distinct |l| with no three in arithmetic progression, so no step argument is zero
  const std::array<std::array<int, 3>, 4> ls{{{-1, 0, 3}, {3, -1, 0}, {2, -4, 1}, {4, -1, 3}}};
  for (const auto& l : ls) {
    const auto s = make_state({l[0], l[1], l[2]}, {1.0, 1.0, 1.0});
    for (const auto& label : canonical_labels()) {
      INFO(label, " at (", l[0], ",", l[1], ",", l[2], ")");
      CHECK(std::abs(numeric_glued(s, canonical_triple(label)) - wrapping_analytic_d3(label, l)) < 0.05);
    }
  }
}

TEST_CASE("numeric values change sign under photon exchange") {
  const auto s = make_state({-2, 0, 1}, {1.0, 1.0, 1.0});
  const auto t = canonical_triple("124");
  CHECK(std::abs(numeric_glued(swap_photons(s), t) + numeric_glued(s, t)) < 1e-6);
}

TEST_CASE("the three printed relations vanish on random charges") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> u(-12, 12);
  for (int k = 0; k < 300; ++k) {
    const std::array<int, 3> l{u(rng), u(rng), u(rng)};
    if (l[0] == l[1] || l[1] == l[2] || l[0] == l[2]) continue;
    auto N = [&](const char* s) { return wrapping_analytic_d3(s, l); };
    CHECK(N("123") - N("456") + N("674") == 0.0);
    CHECK(N("671") - N("45*") - N("126") == 0.0);
    CHECK(N("67*") + N("451") - N("124") == 0.0);
  }
}

TEST_CASE("general-d pattern agrees with quadrature") {
  const auto s = make_state({-2, -1, 1, 3}, {1.0, 1.0, 1.0, 1.0});
  int checked = 0;
  for (int a = 1; a <= 15; ++a)
    for (int b = a + 1; b <= 15; ++b)
      for (int c = b + 1; c <= 15; ++c) {
        const auto t = pure(a, b, c);
        const auto an = wrapping_analytic_pattern(s, t);
        if (!an || (a + b + c) % 3 != 0) continue;  // sample
        INFO(t.label);
        CHECK(std::abs(numeric_glued(s, t) - *an) < 0.05);
        ++checked;
      }
  CHECK(checked > 10);
}

TEST_CASE("singularity classes match the printed conditions") {
  CHECK(singularity_class("123", {0, 1, 2}) == Singularity::Regular);
  CHECK(singularity_class("124", {0, 1, 2}) == Singularity::SingularAtOrigin);
  CHECK(singularity_class("124", {0, 1, 3}) == Singularity::Regular);
  CHECK(singularity_class("674", {2, 1, 0}) == Singularity::SingularAtOrigin);
  CHECK(std::string(singularity_name(Singularity::Regular)) == "regular");
  CHECK_THROWS_AS(singularity_class("321", {0, 1, 2}), UnknownLabel);
}

TEST_CASE("accidental invariants on degenerate charges") {
  const TripleSpec t = pure(1, 3, 5);
  for (const auto& l : {std::vector<int>{1, 2, 2}, std::vector<int>{1, 4, 2}, std::vector<int>{1, 4, 6}}) {
    const auto s = make_state(l, {1.0, 1.0, 1.0}, true);
    const auto p = accidental_predict(s, t);
    REQUIRE(p.mixed);
    REQUIRE(p.value);
    CHECK(*p.value == -1.0);
    CHECK(std::abs(numeric_glued(s, t) + 1.0) < 0.05);
  }
  CHECK_FALSE(accidental_predict(make_state({0, 1, 2}, {1.0, 1.0, 1.0}), pure(1, 2, 3)).mixed);
}

TEST_CASE("non-convergence is reported") {
  const auto s = make_state({-1, 0, 1}, {1.0, 1.0, 1.0});
  Grid g;
  g.n_r = 9;
  g.n_phi = 4;
  const UnitField f = triple_field(s, canonical_triple("124"), false, g);
  QuadOptions q;
  q.max_doublings = 0;
  q.tol = 1e-12;
  CHECK_THROWS_AS(wrapping_numeric(f, q), NonConvergent);
}

TEST_CASE("gluing doubles disk maps and exotic pairs") {
  WrappingResult r;
  r.raw = -0.5;
  CHECK(glue(r, MapKind::DiskToDisk).glued == -1.0);
  CHECK(glue(r, MapKind::SphereToSphere).glued == -0.5);
  CHECK(glue(r, MapKind::SphereToSphere, true).glued == -1.0);
  CHECK(is_exotic_pair_triple(3, canonical_triple("453")));
  CHECK_FALSE(is_exotic_pair_triple(3, canonical_triple("45*")));
  CHECK(is_trivial(0.05));
  CHECK_FALSE(is_trivial(-0.5));
}

TEST_CASE("the two monopole charge forms agree on random fields") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 5; ++trial) {
    PlanarField f;
    f.nx = 17;
    f.ny = 13;
    f.dx = 0.1;
    f.dy = 0.07;
    for (int k = 0; k < f.nx * f.ny; ++k) {
      Vec3 v(g(rng), g(rng), g(rng));
      f.s.push_back(v.normalized());
    }
    const double a = charge_area_element_form(f), b = charge_planar_form(f);
    CHECK(std::abs(a - b) < 1e-12 * std::max(1.0, std::abs(b)));
  }
  PlanarField bad;
  CHECK_THROWS_AS(charge_planar_form(bad), std::invalid_argument);
}
