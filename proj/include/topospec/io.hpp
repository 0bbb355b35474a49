#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "topospec/tomography.hpp"

namespace topospec {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StateFile {
  QuditState state;
  std::optional<SubspacePerturbation> perturbation;
};

StateFile parse_state_json(const std::string& text);
StateFile read_state_json(const std::string& path);
std::string state_to_json(const StateFile& s);
void write_state_json(const StateFile& s, const std::string& path);

// Field source of a state file (perturbation applied when present).
ModeSource source_of(const StateFile& s);

struct SpectrumRow {
  std::string label;
  std::string map_class;
  double raw = 0.0;
  double glued = 0.0;
  std::optional<double> analytic;
  bool singular = false;
  bool trivial = true;
};

extern const std::vector<std::string> kSpectrumColumns;

std::vector<SpectrumRow> spectrum_rows(const TopologicalSpectrum& s);
std::string spectrum_to_csv(const TopologicalSpectrum& s);
std::string spectrum_to_json(const TopologicalSpectrum& s, const std::string& meta_json = "{}");
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

// Reads a spectrum CSV; the value column is "glued" when present, else "value".
std::vector<SpectrumRow> read_spectrum_csv(const std::string& path);
std::vector<double> spectrum_values(const std::vector<SpectrumRow>& rows);

std::string coincidences_to_csv(const CoincidenceMatrix& c, const ProjectionSet& set);
CoincidenceMatrix read_coincidences_csv(const std::string& path, const ProjectionSet& set);

std::string density_to_json(const CMatrix& rho);
CMatrix parse_density_json(const std::string& text);

// Bar chart of glued values in table order; trivial entries drawn gray.
std::string spectrum_svg(const TopologicalSpectrum& s, const std::string& title);

}  // namespace topospec
