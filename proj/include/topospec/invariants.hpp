#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "topospec/field_builder.hpp"
#include "topospec/quadrature.hpp"

namespace topospec {

class NonConvergent : public std::runtime_error {
 public:
  NonConvergent(const std::string& msg, double err) : std::runtime_error(msg), error(err) {}
  double error;
};

class UnknownLabel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct WrappingResult {
  double raw = 0.0;
  double glued = 0.0;
  std::optional<double> analytic;
  double quadrature_error = 0.0;
  bool singular = false;
  bool converged = true;
  int n_r = 0;
  int n_phi = 0;
};

enum class Singularity { Regular, SingularAtOrigin };

// Heaviside with theta(0) = 1/2, and sgn(x) = theta(x) - theta(-x).
double heaviside(double x);
double sgn(double x);

// Raw wrapping number of a unit field. Throws NonConvergent when the error
// estimate stays above opt.tol after the allowed doublings.
WrappingResult wrapping_numeric(const UnitField& field, const QuadOptions& opt = {});

// Closed forms for the 18 canonical d = 3 triples.
double wrapping_analytic_d3(const std::string& label, const std::array<int, 3>& l);
const std::vector<std::string>& canonical_labels();
// Axes of a canonical d = 3 label; '*' is the Cartan combination of the pair's
// root for 45* and 67*, of root (1,3) for 12*.
TripleSpec canonical_triple(const std::string& label);

// (l_i - l_j) sgn(|l_i| - |l_j|) for the usual map of root (i, j).
double wrapping_analytic_usual(int d, const RootPair& root, const std::vector<int>& l);

// Boundary-limit evaluation for a nice pair plus an arbitrary third axis on a
// pure state: raw = (l_i - l_j)/2 * <S3(inf) - S3(0)>_phi with the origin fix
// applied where the third component flips sign, then glued. Empty when the
// leading radial exponents tie at either end.
std::optional<double> wrapping_analytic_pattern(const QuditState& s, const TripleSpec& spec);

// True for a nice pair whose third axis is not the pair's own Cartan element.
// Such maps are always reported through the doubled (extended) construction.
bool is_exotic_pair_triple(int d, const TripleSpec& spec);

Singularity singularity_class(const std::string& label, const std::array<int, 3>& l);
const char* singularity_name(Singularity s);

// Prediction for a triple mixing one cos-type and one sin-type off-diagonal
// component: +-p when both azimuthal frequencies are p times odd integers, 0
// otherwise. The sign follows from the winding of the (cos, sin) curve and the
// radial limits of the remaining component.
struct AccidentalPrediction {
  bool mixed = false;  // triple has the required sin/cos structure
  int p = 0;
  std::optional<double> value;
};
AccidentalPrediction accidental_predict(const QuditState& s, const TripleSpec& spec);

WrappingResult glue(WrappingResult r, MapKind kind);
// Doubling applied in the spectrum pipeline: disk maps and exotic pair triples.
WrappingResult glue(WrappingResult r, MapKind kind, bool exotic_pair);

constexpr double kTrivialThreshold = 0.1;
inline bool is_trivial(double glued) { return glued < kTrivialThreshold && glued > -kTrivialThreshold; }

// Charge of a unit field sampled on a uniform planar lattice, using central
// differences. The first form contracts eps_ijk eps_abc over area elements
// dOmega^i with a planar normal; the second is S.(dS/dx x dS/dy) dx dy.
struct PlanarField {
  int nx = 0;
  int ny = 0;
  double dx = 1.0;
  double dy = 1.0;
  std::vector<Vec3> s;  // row-major, s[j * nx + i]
};
double charge_area_element_form(const PlanarField& f);
double charge_planar_form(const PlanarField& f);

}  // namespace topospec
