#include <cmath>

#include "doctest.h"
#include "topospec/spectrum.hpp"

using namespace topospec;

TEST_CASE("triple counts") {
  CHECK(enumerate_triples(3, SpectrumMode::Full).size() == 56);
  CHECK(enumerate_triples(3, SpectrumMode::Canonical18).size() == 18);
  CHECK(enumerate_triples(5, SpectrumMode::Full).size() == 2024);
  CHECK(enumerate_triples(7, SpectrumMode::Full).size() == 17296);
  CHECK(enumerate_triples(2, SpectrumMode::Full).size() == 1);
  CHECK_THROWS_AS(enumerate_triples(4, SpectrumMode::Canonical18), std::invalid_argument);
  CHECK(enumerate_triples(4, SpectrumMode::Full)[0].label == "1-2-3");
  CHECK(enumerate_triples(3, SpectrumMode::Full)[0].label == "123");
}

TEST_CASE("binomial and independent counts") {
  CHECK(binomial(8, 3) == 56);
  CHECK(binomial(48, 3) == 17296);
  CHECK(binomial(3, 5) == 0);
  CHECK(independent_count(2) == 1);
  CHECK(independent_count(3) == 9);
  CHECK(independent_count(4) == 42);
  CHECK(independent_count(5) == 120);
}

TEST_CASE("capacity counts one signal per candidate map") {
  const Capacity c = capacity(3);
  CHECK(c.topo_levels == 56);
  CHECK(c.oam_levels == 3);
  CHECK(c.topo_bits == doctest::Approx(std::log2(56.0)));
  CHECK(c.oam_bits == doctest::Approx(std::log2(3.0)));
  CHECK(c.independent == 9);
}

TEST_CASE("similarity scores") {
  const std::vector<double> a{-1, 0, 1, 2, -2};
  const auto same = similarity(a, a);
  CHECK(same.residual == 1.0);
  CHECK(same.cosine == doctest::Approx(1.0).epsilon(1e-15));
  std::vector<double> scaled;
  for (double x : a) scaled.push_back(3 * x);
  const auto s3 = similarity(a, scaled);
  CHECK(s3.cosine == doctest::Approx(1.0).epsilon(1e-15));
  // residual: 1 - sum (|a|-|3a|)^2 / sum |a| = 1 - 4*10/6
  CHECK(s3.residual == doctest::Approx(1.0 - 40.0 / 6.0));
  const std::vector<double> flip{1, 0, -1, -2, 2};
  CHECK(similarity(a, flip).cosine == doctest::Approx(-1.0));
  CHECK_THROWS_AS(similarity(a, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(similarity(a, {0, 0, 0, 0, 0}), std::invalid_argument);
}

TEST_CASE("exact rank") {
  CHECK(exact_rank({{1, 2, 3}, {2, 4, 6}, {0, 1, 1}}) == 2);
  CHECK(exact_rank({{4, 0}, {0, 3}}) == 2);
  CHECK(exact_rank({{0, 0, 0}}) == 0);
  CHECK(exact_rank({{1000000007, 3}, {3, 1000000007}}) == 2);
  CHECK_THROWS_AS(exact_rank({{1, 2}, {1}}), std::invalid_argument);
}

TEST_CASE("dependency scan on a small range") {
  const auto rep = dependency_scan(3);
  CHECK(rep.rank == 9);
  CHECK(rep.samples == 7 * 6 * 5);
  REQUIRE(rep.relations.size() == 3);
  REQUIRE(rep.pairwise.size() == 6);
  for (const auto& r : rep.relations) CHECK(r.holds);
  for (const auto& r : rep.pairwise) CHECK(r.holds);
}

TEST_CASE("canonical spectrum of the qutrit exemplar") {
  const auto sp = compute_spectrum(make_state({-1, 0, 1}, {1.0, 1.0, 1.0}), SpectrumMode::Canonical18);
  REQUIRE(sp.entries.size() == 18);
  CHECK(sp.entries[0].label == "123");
  CHECK(sp.entries[0].map_class.kind == MapKind::SphereToSphere);
  CHECK(std::abs(sp.entries[0].glued + 1.0) < 0.05);
  const auto& e124 = sp.entries[3];
  CHECK(e124.label == "124");
  CHECK(e124.map_class.kind == MapKind::DiskToDisk);
  CHECK(std::abs(std::abs(e124.raw) - 0.5) < 0.025);
  CHECK(std::abs(std::abs(e124.glued) - 1.0) < 0.05);
  CHECK(sp.nonconverged() == 0);
  const auto an = analytic_spectrum_d3({-1, 0, 1});
  for (size_t i = 0; i < 18; ++i) CHECK(*sp.entries[i].analytic == an[i]);
}

TEST_CASE("separable state has an all-trivial spectrum") {
  const auto sp = compute_spectrum(make_state({-1, 0, 1}, {0.0, 1.0, 0.0}), SpectrumMode::Canonical18);
  for (const auto& e : sp.entries) CHECK(e.trivial);
}

TEST_CASE("photon exchange flips the spectrum") {
  SpectrumOptions opt;
  const auto s = make_state({-2, 0, 1}, {1.0, 1.0, 1.0});
  const auto a = compute_spectrum(s, SpectrumMode::Canonical18, opt);
  opt.swap_photons = true;
  const auto b = compute_spectrum(s, SpectrumMode::Canonical18, opt);
  for (size_t i = 0; i < 18; ++i) CHECK(b.entries[i].glued == doctest::Approx(-a.entries[i].glued).scale(1e-9));
}

TEST_CASE("full d = 3 spectrum reuses canonical closed forms") {
  const auto sp = compute_spectrum(make_state({-1, 0, 3}, {1.0, 1.0, 1.0}), SpectrumMode::Full);
  REQUIRE(sp.entries.size() == 56);
  for (const auto& e : sp.entries) {
    if (!e.analytic) continue;
    INFO(e.label);
    CHECK(std::abs(e.glued - *e.analytic) < 0.05);
  }
}

TEST_CASE("mode names") {
  CHECK(parse_mode("full") == SpectrumMode::Full);
  CHECK(parse_mode("canonical18") == SpectrumMode::Canonical18);
  CHECK_THROWS(parse_mode("partial"));
}
