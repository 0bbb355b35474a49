#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "topospec/io.hpp"

using namespace topospec;
using nlohmann::json;

namespace {

constexpr int kInputError = 1;
constexpr int kNonConvergent = 2;

struct GridFlags {
  int n_r = 0;
  int n_phi = 0;
  double r_max = 1e4;

  void add(CLI::App* app) {
    app->add_option("--grid-nr", n_r, "radial nodes (0 = automatic)")->check(CLI::NonNegativeNumber);
    app->add_option("--grid-nphi", n_phi, "azimuthal nodes (0 = automatic)")->check(CLI::NonNegativeNumber);
    app->add_option("--rmax", r_max, "outer radius in beam-waist units")->check(CLI::PositiveNumber);
  }
  Grid grid() const {
    Grid g;
    g.n_r = n_r;
    g.n_phi = n_phi;
    g.r_max = r_max;
    return g;
  }
};

TripleSpec parse_triple(int d, const std::string& s) {
  if (d == 3) {
    const auto& labels = canonical_labels();
    if (std::find(labels.begin(), labels.end(), s) != labels.end()) return canonical_triple(s);
  }
  std::vector<int> idx;
  if (d <= 3 && s.size() == 3 && std::all_of(s.begin(), s.end(), ::isdigit)) {
    for (char ch : s) idx.push_back(ch - '0');
  } else {
    std::string tok;
    std::istringstream in(s);
    while (std::getline(in, tok, s.find(',') != std::string::npos ? ',' : '-')) {
      try {
        idx.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        throw InputError("cannot parse triple '" + s + "'");
      }
    }
  }
  if (idx.size() != 3) throw InputError("triple '" + s + "' must name three basis indices");
  for (int i : idx)
    if (i < 1 || i > basis_size(d)) throw InputError("basis index " + std::to_string(i) + " out of range");
  if (idx[0] == idx[1] || idx[1] == idx[2] || idx[0] == idx[2]) throw InputError("triple indices must differ");
  TripleSpec t;
  t.label = s;
  t.axes = {Axis::single(idx[0]), Axis::single(idx[1]), Axis::single(idx[2])};
  return t;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << (x == 0.0 ? 0.0 : x);
  return os.str();
}

int cmd_state_make(const std::vector<int>& l, const std::vector<double>& re, const std::vector<double>& im,
                   const std::vector<double>& perturb, unsigned seed, const std::string& out) {
  if (re.size() != l.size()) throw InputError("--c must list one amplitude per charge");
  if (!im.empty() && im.size() != l.size()) throw InputError("--c-imag must match --l");
  std::vector<cplx> c;
  for (size_t i = 0; i < l.size(); ++i) c.emplace_back(re[i], im.empty() ? 0.0 : im[i]);
  StateFile s;
  s.state = make_state(l, c);
  if (!perturb.empty()) {
    if (perturb.size() != 2) throw InputError("--perturb takes LO HI");
    s.perturbation = random_perturbation(s.state.d, perturb[0], perturb[1], seed);
  }
  if (out.empty())
    std::cout << state_to_json(s);
  else
    write_state_json(s, out);
  return 0;
}

int cmd_spectrum(const std::string& state_path, const std::string& mode_s, const GridFlags& gf, bool swap,
                 const std::string& csv, const std::string& json_path, const std::string& svg, unsigned seed) {
  const StateFile sf = read_state_json(state_path);
  const SpectrumMode mode = parse_mode(mode_s);
  if (mode == SpectrumMode::Canonical18 && sf.state.d != 3) throw InputError("canonical18 mode requires d = 3");
  SpectrumOptions opt;
  opt.grid = gf.grid();
  opt.swap_photons = swap;
  const TopologicalSpectrum sp =
      sf.perturbation ? compute_spectrum(source_of(sf), mode, opt) : compute_spectrum(sf.state, mode, opt);
  json meta;
  meta["state"] = json::parse(state_to_json(sf));
  meta["seed"] = seed;
  meta["swap_photons"] = swap;
  meta["grid"] = {{"n_r", gf.n_r}, {"n_phi", gf.n_phi}, {"r_max", gf.r_max}};
  const std::string text = spectrum_to_csv(sp);
  if (csv.empty())
    std::cout << text;
  else
    write_text(csv, text);
  if (!json_path.empty()) write_text(json_path, spectrum_to_json(sp, meta.dump()));
  if (!svg.empty()) write_text(svg, spectrum_svg(sp, "topological spectrum, " + std::string(mode_name(mode))));
  int nontrivial = 0;
  for (const auto& e : sp.entries) nontrivial += e.trivial ? 0 : 1;
  std::cerr << sp.entries.size() << " triples, " << nontrivial << " nontrivial\n";
  if (sp.nonconverged() > 0) {
    std::cerr << "warning: " << sp.nonconverged() << " entries did not meet the quadrature tolerance:";
    int shown = 0;
    for (const auto& e : sp.entries)
      if (!e.converged && shown++ < 10) std::cerr << " " << e.label;
    std::cerr << (sp.nonconverged() > 10 ? " ..." : "") << "\n";
    return kNonConvergent;
  }
  return 0;
}

int cmd_compare(const std::string& a, const std::string& b, const std::string& json_path) {
  const auto ra = read_spectrum_csv(a), rb = read_spectrum_csv(b);
  if (ra.size() != rb.size())
    throw InputError("spectrum length mismatch (" + std::to_string(ra.size()) + " vs " + std::to_string(rb.size()) +
                     ")");
  for (size_t i = 0; i < ra.size(); ++i)
    if (ra[i].label != rb[i].label) throw InputError("triple order differs at row " + std::to_string(i + 1));
  SimilarityScores s;
  try {
    s = similarity(spectrum_values(ra), spectrum_values(rb));
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  std::printf("residual %.6f\ncosine %.6f\n", s.residual, s.cosine);
  if (!json_path.empty()) write_text(json_path, json({{"residual", s.residual}, {"cosine", s.cosine}}).dump(2) + "\n");
  return 0;
}

int cmd_invariant(const std::string& state_path, const std::string& triple, const GridFlags& gf, bool swap) {
  StateFile sf = read_state_json(state_path);
  if (swap) sf.state = swap_photons(sf.state);
  const TripleSpec spec = parse_triple(sf.state.d, triple);
  const ModeSource src = source_of(sf);
  const Grid grid = resolve_grid(gf.grid(), src.l);
  int slot = 2;
  const double sheet = sheet_sign(sf.state.d, spec, slot);
  UnitField f;
  try {
    f = triple_field(src, spec, false, grid, sheet, slot);
  } catch (const DegenerateField& e) {
    throw InputError(e.what());
  }
  const MapClass mc = classify_map(f);
  f.origin_fixed = mc.kind == MapKind::DiskToDisk && mc.wedge;
  std::optional<double> analytic;
  bool singular = false;
  if (!sf.perturbation) {
    if (sf.state.d == 3 && spec.label.size() == 3) {
      const std::array<int, 3> l{sf.state.l[0], sf.state.l[1], sf.state.l[2]};
      const auto& labels = canonical_labels();
      if (std::find(labels.begin(), labels.end(), spec.label) != labels.end()) {
        analytic = wrapping_analytic_d3(spec.label, l);
        singular = singularity_class(spec.label, l) == Singularity::SingularAtOrigin;
      }
    }
    if (!analytic) analytic = wrapping_analytic_pattern(sf.state, spec);
  }
  if (singular) f.grid.n_phi *= 4;
  std::printf("triple %s\nmap_class %s\norigin_fixed %s\n", spec.label.c_str(), map_kind_name(mc.kind),
              f.origin_fixed ? "true" : "false");
  WrappingResult r;
  try {
    r = wrapping_numeric(f);
  } catch (const NonConvergent& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNonConvergent;
  }
  r = glue(r, mc.kind, is_exotic_pair_triple(sf.state.d, spec));
  std::printf("raw %s\nglued %s\nanalytic %s\nsingular %s\nquadrature_error %.3g\n", fmt(r.raw).c_str(),
              fmt(r.glued).c_str(), analytic ? fmt(*analytic).c_str() : "n/a", singular ? "true" : "false",
              r.quadrature_error);
  return 0;
}

int cmd_scan(int l_range) {
  if (l_range < 3) throw InputError("--l-range must be at least 3");
  const DependencyReport rep = dependency_scan(l_range);
  std::printf("samples %ld\nrank %d\n", rep.samples, rep.rank);
  bool ok = true;
  for (const auto& r : rep.relations) {
    std::printf("relation %-26s max_residual %g %s\n", r.name.c_str(), r.max_residual, r.holds ? "holds" : "FAILS");
    ok = ok && r.holds;
  }
  for (const auto& r : rep.pairwise) {
    std::printf("identity %-26s max_residual %g %s\n", r.name.c_str(), r.max_residual, r.holds ? "holds" : "FAILS");
    ok = ok && r.holds;
  }
  return ok ? 0 : kInputError;
}

int cmd_tomo(const std::string& state_path, double counts, const std::string& noise_s, unsigned seed,
             const std::string& epsilon_s, const std::string& out_dir, const std::string& mode_s, const GridFlags& gf) {
  const StateFile sf = read_state_json(state_path);
  const int d = sf.state.d;
  const NoiseModel noise = parse_noise(noise_s);
  const ProjectionSet set = projection_set(d, sf.state.l);
  const CMatrix truth = density_from_source(source_of(sf));
  const CoincidenceMatrix cm = simulate_coincidences(truth, set, counts, noise, seed);
  ReconstructOptions ro;
  if (epsilon_s == "auto") {
    ro.epsilon = epsilon_from_crosstalk(cm, set);
  } else {
    try {
      ro.epsilon = std::stod(epsilon_s);
    } catch (const std::exception&) {
      throw InputError("--epsilon must be a number or 'auto'");
    }
    if (ro.epsilon < 0.0) throw InputError("--epsilon must be nonnegative");
  }
  const Reconstruction rec = reconstruct(cm, set, ro);
  const double F = fidelity(truth, rec.rho);
  std::printf("projectors %d\nsettings %d\nepsilon %.6g\nchi2 %.6g\niterations %d\nconverged %s\n", set.size(),
              set.size() * set.size(), ro.epsilon, rec.chi2, rec.iterations, rec.converged ? "true" : "false");
  std::printf("fidelity %.6f\npurity %.6f\n", F, purity(rec.rho));
  if (d == 2) std::printf("concurrence %.6f\n", concurrence(rec.rho));
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    const std::string base = out_dir + "/";
    write_text(base + "coincidences.csv", coincidences_to_csv(cm, set));
    write_text(base + "density.json", density_to_json(rec.rho));
    SpectrumOptions so;
    so.grid = gf.grid();
    const SpectrumMode mode = parse_mode(mode_s);
    if (mode == SpectrumMode::Canonical18 && d != 3) throw InputError("canonical18 mode requires d = 3");
    const TopologicalSpectrum ideal = compute_spectrum(sf.state, mode, so);
    const TopologicalSpectrum recon = spectrum_from_density(rec.rho, sf.state.l, mode, so);
    write_text(base + "spectrum.csv", spectrum_to_csv(recon));
    json meta = {{"seed", seed}, {"noise", noise_name(noise)}, {"counts", counts}, {"epsilon", ro.epsilon},
                 {"fidelity", F}};
    write_text(base + "spectrum.json", spectrum_to_json(recon, meta.dump()));
    write_text(base + "spectrum.svg", spectrum_svg(recon, "reconstructed spectrum"));
    try {
      const SimilarityScores s = similarity(ideal.glued(), recon.glued());
      std::printf("spectrum_residual %.6f\nspectrum_cosine %.6f\n", s.residual, s.cosine);
    } catch (const std::invalid_argument&) {
      std::printf("spectrum_cosine n/a (zero spectrum)\n");
    }
  }
  if (!rec.converged) {
    std::fprintf(stderr, "warning: reconstruction stopped before the gradient tolerance (chi2 %.6g)\n", rec.chi2);
    return kNonConvergent;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topological spectra of OAM-entangled biphoton states"};
  app.require_subcommand(1);

  auto* state = app.add_subcommand("state", "state files");
  state->require_subcommand(1);
  auto* make = state->add_subcommand("make", "write a state JSON file");
  std::vector<int> l;
  std::vector<double> c_re, c_im, perturb;
  unsigned seed = 1;
  std::string out;
  make->add_option("--l", l, "OAM charges")->required()->delimiter(',');
  make->add_option("--c", c_re, "real amplitudes")->required()->delimiter(',');
  make->add_option("--c-imag", c_im, "imaginary amplitudes")->delimiter(',');
  make->add_option("--perturb", perturb, "uniform off-subspace weight range LO,HI")->delimiter(',');
  make->add_option("--seed", seed, "random seed");
  make->add_option("-o,--out", out, "output path (stdout when omitted)");

  auto* spectrum = app.add_subcommand("spectrum", "topological spectra");
  spectrum->require_subcommand(1);
  auto* compute = spectrum->add_subcommand("compute", "compute the spectrum of a state file");
  std::string state_path, mode = "full", csv, json_out, svg;
  bool swap = false;
  GridFlags grid;
  compute->add_option("state", state_path, "state JSON")->required();
  compute->add_option("--mode", mode, "full or canonical18");
  compute->add_option("--csv", csv, "CSV output (stdout when omitted)");
  compute->add_option("--json", json_out, "JSON output");
  compute->add_option("--svg", svg, "SVG bar chart");
  compute->add_option("--seed", seed, "recorded in metadata");
  compute->add_flag("--swap-photons", swap, "exchange photon roles");
  grid.add(compute);

  auto* compare = spectrum->add_subcommand("compare", "similarity scores of two spectrum CSVs");
  std::string file_a, file_b;
  compare->add_option("a", file_a, "reference spectrum")->required();
  compare->add_option("b", file_b, "compared spectrum")->required();
  compare->add_option("--json", json_out, "JSON output");

  auto* invariant = app.add_subcommand("invariant", "single invariants");
  invariant->require_subcommand(1);
  auto* eval = invariant->add_subcommand("eval", "evaluate one triple");
  std::string triple;
  eval->add_option("state", state_path, "state JSON")->required();
  eval->add_option("--triple", triple, "label such as 124, 45* or 1-6-15")->required();
  eval->add_flag("--swap-photons", swap, "exchange photon roles");
  grid.add(eval);

  auto* deps = app.add_subcommand("deps", "dependency analysis");
  deps->require_subcommand(1);
  auto* scan = deps->add_subcommand("scan", "rank and relations of the d = 3 invariants");
  int l_range = 10;
  scan->add_option("--l-range", l_range, "charges run over [-L, L]");

  auto* tomo = app.add_subcommand("tomo", "tomography");
  tomo->require_subcommand(1);
  auto* run = tomo->add_subcommand("run", "simulate, reconstruct and analyse");
  double counts = 1e4;
  std::string noise = "poisson", epsilon = "0", out_dir;
  std::string tomo_mode = "canonical18";
  run->add_option("state", state_path, "state JSON")->required();
  run->add_option("--counts", counts, "expected counts in the basis block")->check(CLI::PositiveNumber);
  run->add_option("--noise", noise, "none, poisson, poisson+crosstalk[:sigma]");
  run->add_option("--seed", seed, "noise seed");
  run->add_option("--epsilon", epsilon, "threshold on density entries, or 'auto'");
  run->add_option("--out-dir", out_dir, "directory for artifacts");
  run->add_option("--mode", tomo_mode, "spectrum mode for the artifacts");
  grid.add(run);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (make->parsed()) return cmd_state_make(l, c_re, c_im, perturb, seed, out);
    if (compute->parsed()) return cmd_spectrum(state_path, mode, grid, swap, csv, json_out, svg, seed);
    if (compare->parsed()) return cmd_compare(file_a, file_b, json_out);
    if (eval->parsed()) return cmd_invariant(state_path, triple, grid, swap);
    if (scan->parsed()) return cmd_scan(l_range);
    if (run->parsed()) return cmd_tomo(state_path, counts, noise, seed, epsilon, out_dir, tomo_mode, grid);
  } catch (const NonConvergent& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNonConvergent;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInputError;
  }
  return kInputError;
}
