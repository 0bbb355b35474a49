#include "topospec/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace topospec {

using nlohmann::json;

namespace {

std::string num(double x) {
  if (x == 0.0) x = 0.0;  // drop negative zero
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

json parse_or_throw(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(what + ": malformed JSON (" + std::string(e.what()) + ")");
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError(what + ": cannot parse number '" + s + "'");
  }
}

bool to_bool(const std::string& s, const std::string& what) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw InputError(what + ": cannot parse boolean '" + s + "'");
}

}  // namespace

StateFile parse_state_json(const std::string& text) {
  const json j = parse_or_throw(text, "state file");
  if (!j.is_object()) throw InputError("state file: top level must be an object");
  for (const auto& [key, _] : j.items())
    if (key != "d" && key != "l" && key != "c" && key != "perturbation")
      throw InputError("state file: unknown key '" + key + "'");
  for (const char* key : {"d", "l", "c"})
    if (!j.contains(key)) throw InputError(std::string("state file: missing key '") + key + "'");
  StateFile s;
  try {
    const int d = j.at("d").get<int>();
    const auto l = j.at("l").get<std::vector<int>>();
    std::vector<cplx> c;
    for (const auto& e : j.at("c")) {
      if (!e.is_array() || e.size() != 2) throw InputError("state file: each amplitude must be [re, im]");
      c.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    if (static_cast<int>(l.size()) != d || static_cast<int>(c.size()) != d)
      throw InputError("state file: l and c must have d entries");
    s.state = make_state(l, c);
    if (j.contains("perturbation")) {
      const auto rows = j.at("perturbation").get<std::vector<std::vector<double>>>();
      if (static_cast<int>(rows.size()) != d) throw InputError("state file: perturbation must be d x d");
      SubspacePerturbation p;
      p.delta.resize(d, d);
      for (int a = 0; a < d; ++a) {
        if (static_cast<int>(rows[a].size()) != d) throw InputError("state file: perturbation must be d x d");
        for (int b = 0; b < d; ++b) p.delta(a, b) = rows[a][b];
      }
      inject_subspace(s.state, p);  // validates entries
      s.perturbation = p;
    }
  } catch (const json::exception& e) {
    throw InputError("state file: " + std::string(e.what()));
  } catch (const std::invalid_argument& e) {
    throw InputError("state file: " + std::string(e.what()));
  }
  return s;
}

StateFile read_state_json(const std::string& path) { return parse_state_json(read_text(path)); }

std::string state_to_json(const StateFile& s) {
  json j;
  j["d"] = s.state.d;
  j["l"] = s.state.l;
  json c = json::array();
  for (const auto& x : s.state.c) c.push_back({x.real(), x.imag()});
  j["c"] = c;
  if (s.perturbation) {
    json p = json::array();
    for (int a = 0; a < s.perturbation->delta.rows(); ++a) {
      json row = json::array();
      for (int b = 0; b < s.perturbation->delta.cols(); ++b) row.push_back(s.perturbation->delta(a, b));
      p.push_back(row);
    }
    j["perturbation"] = p;
  }
  return j.dump(2) + "\n";
}

void write_state_json(const StateFile& s, const std::string& path) { write_text(path, state_to_json(s)); }

ModeSource source_of(const StateFile& s) {
  return s.perturbation ? inject_subspace(s.state, *s.perturbation) : mode_source(s.state);
}

const std::vector<std::string> kSpectrumColumns = {"triple_label", "map_class", "raw", "glued",
                                                   "analytic", "singular", "trivial"};

std::vector<SpectrumRow> spectrum_rows(const TopologicalSpectrum& s) {
  std::vector<SpectrumRow> rows;
  for (const auto& e : s.entries)
    rows.push_back({e.label, map_kind_name(e.map_class.kind), e.raw, e.glued, e.analytic, e.singular, e.trivial});
  return rows;
}

std::string spectrum_to_csv(const TopologicalSpectrum& s) {
  std::ostringstream os;
  for (size_t i = 0; i < kSpectrumColumns.size(); ++i) os << (i ? "," : "") << kSpectrumColumns[i];
  os << "\n";
  for (const auto& r : spectrum_rows(s)) {
    os << r.label << "," << r.map_class << "," << num(r.raw) << "," << num(r.glued) << ","
       << (r.analytic ? num(*r.analytic) : "") << "," << (r.singular ? "true" : "false") << ","
       << (r.trivial ? "true" : "false") << "\n";
  }
  return os.str();
}

std::string spectrum_to_json(const TopologicalSpectrum& s, const std::string& meta_json) {
  json j;
  j["d"] = s.d;
  j["mode"] = mode_name(s.mode);
  j["meta"] = parse_or_throw(meta_json, "spectrum metadata");
  json rows = json::array();
  json nonconv = json::array();
  for (size_t i = 0; i < s.entries.size(); ++i) {
    const auto& e = s.entries[i];
    json r;
    r["triple_label"] = e.label;
    r["map_class"] = map_kind_name(e.map_class.kind);
    r["raw"] = e.raw;
    r["glued"] = e.glued;
    r["analytic"] = e.analytic ? json(*e.analytic) : json(nullptr);
    r["singular"] = e.singular;
    r["trivial"] = e.trivial;
    rows.push_back(r);
    if (!e.converged) nonconv.push_back(e.label);
  }
  j["entries"] = rows;
  j["nonconverged"] = nonconv;
  return j.dump(2) + "\n";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw InputError("write to '" + path + "' failed");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<SpectrumRow> read_spectrum_csv(const std::string& path) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty spectrum file");
  const auto header = split_csv_line(line);
  auto col = [&](const std::string& name) -> int {
    for (size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    return -1;
  };
  const int c_label = col("triple_label");
  int c_value = col("glued");
  if (c_value < 0) c_value = col("value");
  if (c_label < 0 || c_value < 0) throw InputError(path + ": needs triple_label and glued (or value) columns");
  const int c_class = col("map_class"), c_raw = col("raw"), c_an = col("analytic"), c_sing = col("singular"),
            c_triv = col("trivial");
  std::vector<SpectrumRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) throw InputError(path + ":" + std::to_string(lineno) + ": wrong field count");
    const std::string where = path + ":" + std::to_string(lineno);
    SpectrumRow r;
    r.label = f[c_label];
    r.glued = to_double(f[c_value], where);
    if (c_class >= 0) r.map_class = f[c_class];
    if (c_raw >= 0) r.raw = to_double(f[c_raw], where);
    if (c_an >= 0 && !f[c_an].empty()) r.analytic = to_double(f[c_an], where);
    if (c_sing >= 0) r.singular = to_bool(f[c_sing], where);
    r.trivial = c_triv >= 0 ? to_bool(f[c_triv], where) : is_trivial(r.glued);
    rows.push_back(r);
  }
  if (rows.empty()) throw InputError(path + ": no spectrum rows");
  return rows;
}

std::vector<double> spectrum_values(const std::vector<SpectrumRow>& rows) {
  std::vector<double> v;
  for (const auto& r : rows) v.push_back(r.glued);
  return v;
}

std::string coincidences_to_csv(const CoincidenceMatrix& c, const ProjectionSet& set) {
  std::ostringstream os;
  os << "\"A\\B\"";
  for (const auto& l : set.labels) os << ",\"" << l << "\"";
  os << "\n";
  for (int m = 0; m < set.size(); ++m) {
    os << "\"" << set.labels[m] << "\"";
    for (int n = 0; n < set.size(); ++n) os << "," << num(c.counts(m, n));
    os << "\n";
  }
  return os.str();
}

CoincidenceMatrix read_coincidences_csv(const std::string& path, const ProjectionSet& set) {
  std::istringstream in(read_text(path));
  std::string line;
  const int K = set.size();
  if (!std::getline(in, line)) throw InputError(path + ": empty coincidence file");
  const auto header = split_csv_line(line);
  if (static_cast<int>(header.size()) != K + 1) throw InputError(path + ": expected " + std::to_string(K) + " columns");
  for (int n = 0; n < K; ++n)
    if (header[n + 1] != set.labels[n]) throw InputError(path + ": column label mismatch '" + header[n + 1] + "'");
  CoincidenceMatrix c;
  c.counts.resize(K, K);
  for (int m = 0; m < K; ++m) {
    if (!std::getline(in, line)) throw InputError(path + ": expected " + std::to_string(K) + " rows");
    const auto f = split_csv_line(line);
    if (static_cast<int>(f.size()) != K + 1 || f[0] != set.labels[m])
      throw InputError(path + ": malformed row " + std::to_string(m + 1));
    for (int n = 0; n < K; ++n) {
      c.counts(m, n) = to_double(f[n + 1], path);
      if (c.counts(m, n) < 0.0) throw InputError(path + ": negative count");
    }
  }
  c.total_counts = c.counts.topLeftCorner(set.d, set.d).sum();
  c.noise = "file";
  return c;
}

std::string density_to_json(const CMatrix& rho) {
  json j = json::array();
  for (Eigen::Index a = 0; a < rho.rows(); ++a) {
    json row = json::array();
    for (Eigen::Index b = 0; b < rho.cols(); ++b) row.push_back({rho(a, b).real(), rho(a, b).imag()});
    j.push_back(row);
  }
  return j.dump() + "\n";
}

CMatrix parse_density_json(const std::string& text) {
  const json j = parse_or_throw(text, "density file");
  try {
    const size_t n = j.size();
    CMatrix rho(n, n);
    for (size_t a = 0; a < n; ++a) {
      if (j[a].size() != n) throw InputError("density file: matrix must be square");
      for (size_t b = 0; b < n; ++b) rho(a, b) = cplx(j[a][b].at(0).get<double>(), j[a][b].at(1).get<double>());
    }
    return rho;
  } catch (const json::exception& e) {
    throw InputError("density file: " + std::string(e.what()));
  }
}

std::string spectrum_svg(const TopologicalSpectrum& s, const std::string& title) {
  const auto v = s.glued();
  const int n = static_cast<int>(v.size());
  const double bar = n > 200 ? 2.0 : n > 60 ? 6.0 : 24.0;
  const double left = 60.0, top = 40.0, h = 300.0;
  const double width = left + 20.0 + bar * n, height = top + h + (n <= 60 ? 70.0 : 30.0);
  double vmax = 1.0;
  for (double x : v) vmax = std::max(vmax, std::abs(x));
  const double mid = top + h / 2.0, scale = (h / 2.0) / vmax;
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << left << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << mid << "\" x2=\"" << width - 10.0 << "\" y2=\"" << mid
     << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << left - 8.0 << "\" y=\"" << top + 4.0 << "\" text-anchor=\"end\" font-size=\"10\">"
     << vmax << "</text>\n";
  os << "<text x=\"" << left - 8.0 << "\" y=\"" << top + h + 4.0 << "\" text-anchor=\"end\" font-size=\"10\">"
     << -vmax << "</text>\n";
  for (int i = 0; i < n; ++i) {
    const auto& e = s.entries[i];
    const double x = left + bar * i + bar * 0.1;
    const double len = std::abs(v[i]) * scale;
    const double y = v[i] >= 0.0 ? mid - len : mid;
    const char* fill = e.trivial ? "#bbbbbb" : (e.map_class.kind == MapKind::SphereToSphere ? "#3b6fb6" : "#d9822b");
    os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << bar * 0.8 << "\" height=\"" << std::max(len, 0.5)
       << "\" fill=\"" << fill << "\"><title>" << e.label << ": " << num(v[i]) << "</title></rect>\n";
    if (n <= 60)
      os << "<text x=\"" << x + bar * 0.4 << "\" y=\"" << top + h + 16.0
         << "\" text-anchor=\"middle\" font-size=\"9\" font-family=\"monospace\">" << e.label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace topospec
