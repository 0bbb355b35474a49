#pragma once

#include <optional>
#include <string>
#include <vector>

#include "topospec/invariants.hpp"

namespace topospec {

enum class SpectrumMode { Full, Canonical18 };

const char* mode_name(SpectrumMode m);
SpectrumMode parse_mode(const std::string& s);

struct SpectrumEntry {
  std::string label;
  TripleSpec spec;
  MapClass map_class;
  double raw = 0.0;
  double glued = 0.0;
  std::optional<double> analytic;
  bool singular = false;
  bool trivial = true;
  bool converged = true;
  bool origin_fixed = false;
  double quadrature_error = 0.0;
};

struct TopologicalSpectrum {
  int d = 0;
  SpectrumMode mode = SpectrumMode::Full;
  std::vector<SpectrumEntry> entries;

  std::vector<double> glued() const;
  std::vector<double> analytic_or_glued() const;
  int nonconverged() const;
};

struct SpectrumOptions {
  Grid grid;
  QuadOptions quad;
  bool swap_photons = false;
  bool analytic = true;
};

long long binomial(int n, int k);

std::vector<TripleSpec> enumerate_triples(int d, SpectrumMode mode);

TopologicalSpectrum compute_spectrum(const QuditState& state, SpectrumMode mode, const SpectrumOptions& opt = {});

// Spectrum of an arbitrary field source (perturbed or mixed); no analytic column.
TopologicalSpectrum compute_spectrum(const ModeSource& src, SpectrumMode mode, const SpectrumOptions& opt = {});

// Analytic spectrum of a d = 3 state over the canonical labels.
std::vector<double> analytic_spectrum_d3(const std::array<int, 3>& l);

long long independent_count(int d);

struct RelationCheck {
  std::string name;
  double max_residual = 0.0;
  bool holds = true;
};

struct DependencyReport {
  int rank = 0;
  long samples = 0;
  std::vector<RelationCheck> relations;  // the three nontrivial relations
  std::vector<RelationCheck> pairwise;   // the six equalities
};

DependencyReport dependency_scan(int l_range);

// Exact rank of an integer matrix (rows of equal length).
int exact_rank(const std::vector<std::vector<long long>>& rows);

struct SimilarityScores {
  double residual = 0.0;
  double cosine = 0.0;
};

SimilarityScores similarity(const std::vector<double>& a, const std::vector<double>& e);

struct Capacity {
  long long topo_levels = 0;
  int oam_levels = 0;
  double topo_bits = 0.0;
  double oam_bits = 0.0;
  long long independent = 0;
};

Capacity capacity(int d);

}  // namespace topospec
