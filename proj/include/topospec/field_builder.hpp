#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "topospec/qudit_state.hpp"

namespace topospec {

struct Axis {
  std::vector<std::pair<int, double>> weights;  // (1-based basis index, weight)

  static Axis single(int index) { return Axis{{{index, 1.0}}}; }
  bool is_single() const { return weights.size() == 1 && weights[0].second == 1.0; }
  RVector dense(int d) const;
};

struct TripleSpec {
  std::string label;
  std::array<Axis, 3> axes;
};

class DegenerateField : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// r^e (a cos(n phi) + b sin(n phi)), n >= 0, Gaussian factor exp(-2 r^2) kept separate.
struct FieldTerm {
  double e;
  int n;
  double a;
  double b;
};

struct ComponentField {
  std::vector<FieldTerm> terms;

  bool zero() const { return terms.empty(); }
  // True field value with the Gaussian envelope, plus analytic partials.
  void eval(double r, double phi, double& m, double& m_r, double& m_phi) const;
  double value(double r, double phi) const;
};

struct Grid {
  double r_min = 1e-4;
  double r_max = 1e4;
  int n_r = 0;    // 0: chosen from the exponent spread of the state
  int n_phi = 0;  // 0: 64 * max(1, max |l_i - l_j|)
};

using Vec3 = Eigen::Vector3d;

struct UnitField {
  std::array<ComponentField, 3> comp;
  bool origin_fixed = false;
  int fixed_component = 2;  // slot replaced by sheet * |m|
  double sheet = 1.0;
  Grid grid;

  // S and its partials at r > 0.
  void eval(double r, double phi, Vec3& s, Vec3& s_r, Vec3& s_phi) const;
  Vec3 unit(double r, double phi) const;
  // Planar density S.(dS/dr x dS/dphi) (polar form, no Jacobian).
  double density(double r, double phi) const;
};

enum class MapKind { SphereToSphere, DiskToDisk, Degenerate };

struct MapClass {
  MapKind kind = MapKind::SphereToSphere;
  double var_r_min = 0.0;
  double var_r_max = 0.0;
  bool wedge = false;        // third slot changes sign along phi at a boundary
  int wedge_component = -1;  // slot that flips sign
};

const char* map_kind_name(MapKind k);
MapKind parse_map_kind(const std::string& s);

ComponentField component_field(const ModeSource& src, const Axis& axis);
ComponentField component_field(const QuditState& s, const Axis& axis);

// Fills default grid values from the charges involved.
Grid resolve_grid(const Grid& g, const std::vector<int>& l);

UnitField triple_field(const ModeSource& src, const TripleSpec& spec, bool fix_origin, const Grid& grid = {},
                       double sheet = 1.0, int fixed_component = 2);
UnitField triple_field(const QuditState& s, const TripleSpec& spec, bool fix_origin, const Grid& grid = {});

// Boundary diagnostics use the unfixed field values.
MapClass classify_map(const UnitField& field, const QuditState& s);
MapClass classify_map(const UnitField& field);

// Sign of the sheet used by the origin fix for a nice-pair triple: +1 for
// simple roots (col = row + 1), -1 otherwise. Non-pair triples use +1.
double sheet_sign(int d, const TripleSpec& spec, int& fixed_component);

void dump_field_csv(const UnitField& f, const std::string& path, int n_r, int n_phi);

}  // namespace topospec
