#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "topospec/spectrum.hpp"

namespace topospec {

// Per-photon measurement states: d basis kets, then four superpositions per pair (n < m).
struct ProjectionSet {
  int d = 0;
  std::vector<int> subspace_l;
  std::vector<CVector> projectors;
  std::vector<std::string> labels;

  int size() const { return static_cast<int>(projectors.size()); }
};

ProjectionSet projection_set(int d, const std::vector<int>& subspace_l);

enum class NoiseKind { None, Poisson, PoissonCrosstalk };

struct NoiseModel {
  NoiseKind kind = NoiseKind::None;
  double sigma = 1.0;       // crosstalk envelope width in units of OAM charge
  double strength = 0.02;   // crosstalk admixture relative to the neighbouring diagonal rates
};

// "none", "poisson", "poisson+crosstalk" or "poisson+crosstalk:<sigma>".
NoiseModel parse_noise(const std::string& s);
std::string noise_name(const NoiseModel& n);

struct CoincidenceMatrix {
  Eigen::MatrixXd counts;  // K x K, row = photon A projector, column = photon B projector
  double total_counts = 0.0;
  std::string noise;
};

// Biphoton density with index a*d + b (photon A ket a, photon B partner of ket b).
CMatrix density_from_source(const ModeSource& src);
CMatrix density_from_state(const QuditState& s);

// Inverse of density_from_source: eigen-decomposition into field-source terms.
ModeSource source_from_density(const CMatrix& rho, const std::vector<int>& l);

// Expected counts scale so that the d x d basis block sums to total_counts.
CoincidenceMatrix simulate_coincidences(const CMatrix& rho, const ProjectionSet& set, double total_counts,
                                        const NoiseModel& noise, std::uint64_t seed);

// Largest off-diagonal basis-block rate as a fraction of the basis-block total.
double epsilon_from_crosstalk(const CoincidenceMatrix& c, const ProjectionSet& set);

struct ReconstructOptions {
  double epsilon = 0.0;
  int max_iterations = 10000;
  double grad_tol = 1e-8;
};

struct Reconstruction {
  CMatrix rho;
  double chi2 = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> chi2_trace;  // accepted iterations only
};

Reconstruction reconstruct(const CoincidenceMatrix& c, const ProjectionSet& set, const ReconstructOptions& opt = {});

// Zero entries with modulus <= epsilon, then restore positivity and unit trace.
CMatrix threshold_density(const CMatrix& rho, double epsilon);

// Nearest PSD unit-trace matrix by eigenvalue clipping.
CMatrix project_physical(const CMatrix& rho);

double fidelity(const CMatrix& rho_t, const CMatrix& rho_m);
double purity(const CMatrix& rho);
double concurrence(const CMatrix& rho);  // two-qubit only

// Haar-random normalized amplitudes.
std::vector<cplx> haar_amplitudes(int d, std::uint64_t seed);
CVector haar_vector(int n, std::uint64_t seed);

TopologicalSpectrum spectrum_from_density(const CMatrix& rho, const std::vector<int>& l, SpectrumMode mode,
                                          const SpectrumOptions& opt = {});

}  // namespace topospec
