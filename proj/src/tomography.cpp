#include "topospec/tomography.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace topospec {

namespace {

std::string ket(int l) { return "|" + std::to_string(l) + ">"; }

CMatrix hermitian_function(const CMatrix& h, double (*fn)(double)) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const auto& v = es.eigenvectors();
  Eigen::VectorXd lam = es.eigenvalues().unaryExpr(fn);
  return v * lam.cast<cplx>().asDiagonal() * v.adjoint();
}

double clip_sqrt(double x) { return std::sqrt(std::max(x, 0.0)); }

// Row i holds w_i = u_m (x) u_n for setting i = m*K + n.
CMatrix setting_vectors(const ProjectionSet& set) {
  const int K = set.size(), d = set.d;
  CMatrix w(K * K, d * d);
  for (int m = 0; m < K; ++m)
    for (int n = 0; n < K; ++n) {
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) w(m * K + n, a * d + b) = set.projectors[m](a) * set.projectors[n](b);
    }
  return w;
}

Eigen::VectorXd probabilities(const CMatrix& w, const CMatrix& rho) {
  // p_i = w_i^dagger rho w_i, with w_i stored as the i-th row
  const CMatrix wr = w.conjugate() * rho;
  Eigen::VectorXd p(w.rows());
  for (Eigen::Index i = 0; i < w.rows(); ++i) p(i) = std::max((wr.row(i).cwiseProduct(w.row(i))).sum().real(), 0.0);
  return p;
}

struct Chi2 {
  double value = 0.0;
  double scale = 0.0;
  Eigen::VectorXd dp;  // derivative with respect to each probability at fixed scale
};

Chi2 chi2_of(const Eigen::VectorXd& meas, const Eigen::VectorXd& p, double floor) {
  Chi2 c;
  double num = 0.0, den = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p(i) > 0.0) {
      num += meas(i) * meas(i) / p(i);
      den += p(i);
    }
  c.scale = den > 0.0 ? std::sqrt(num / den) : 0.0;
  c.dp.resize(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double pred = c.scale * p(i);
    if (pred < floor) {
      c.value += (meas(i) - floor) * (meas(i) - floor) / floor;
      c.dp(i) = 0.0;
    } else {
      c.value += (meas(i) - pred) * (meas(i) - pred) / pred;
      c.dp(i) = c.scale * (1.0 - meas(i) * meas(i) / (pred * pred));
    }
  }
  return c;
}

CMatrix linear_inversion(const CMatrix& w, const Eigen::VectorXd& meas, int n) {
  // Hermitian parameterization: diagonal, symmetric and antisymmetric off-diagonal units
  const Eigen::Index rows = w.rows();
  Eigen::MatrixXd a(rows, n * n);
  int col = 0;
  std::vector<std::tuple<int, int, int>> params;
  for (int j = 0; j < n; ++j) params.emplace_back(0, j, j);
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      params.emplace_back(1, j, k);
      params.emplace_back(2, j, k);
    }
  for (const auto& [kind, j, k] : params) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const cplx x = std::conj(w(i, j)) * w(i, k);
      a(i, col) = kind == 0 ? std::norm(w(i, j)) : kind == 1 ? 2.0 * x.real() : -2.0 * x.imag();
    }
    ++col;
  }
  const Eigen::VectorXd x = a.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(meas);
  CMatrix rho = CMatrix::Zero(n, n);
  col = 0;
  for (const auto& [kind, j, k] : params) {
    if (kind == 0)
      rho(j, j) = x(col);
    else if (kind == 1) {
      rho(j, k) += x(col);
      rho(k, j) += x(col);
    } else {
      rho(j, k) += cplx(0.0, x(col));
      rho(k, j) -= cplx(0.0, x(col));
    }
    ++col;
  }
  return rho;
}

}  // namespace

ProjectionSet projection_set(int d, const std::vector<int>& subspace_l) {
  if (d < 2) throw std::invalid_argument("projection set requires d >= 2");
  if (static_cast<int>(subspace_l.size()) != d) throw std::invalid_argument("subspace_l must list d charges");
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (subspace_l[i] == subspace_l[j]) throw std::invalid_argument("duplicate OAM charge in subspace");
  ProjectionSet set;
  set.d = d;
  set.subspace_l = subspace_l;
  for (int k = 0; k < d; ++k) {
    CVector u = CVector::Zero(d);
    u(k) = 1.0;
    set.projectors.push_back(u);
    set.labels.push_back(ket(subspace_l[k]));
  }
  const cplx phases[4] = {1.0, cplx(0.0, 1.0), -1.0, cplx(0.0, -1.0)};
  const char* signs[4] = {"+", "+i", "-", "-i"};
  for (int n = 0; n < d; ++n)
    for (int m = n + 1; m < d; ++m)
      for (int t = 0; t < 4; ++t) {
        CVector u = CVector::Zero(d);
        u(n) = 1.0 / std::sqrt(2.0);
        u(m) = phases[t] / std::sqrt(2.0);
        set.projectors.push_back(u);
        set.labels.push_back(ket(subspace_l[n]) + signs[t] + ket(subspace_l[m]));
      }
  return set;
}

NoiseModel parse_noise(const std::string& s) {
  NoiseModel n;
  if (s == "none") return n;
  if (s == "poisson") {
    n.kind = NoiseKind::Poisson;
    return n;
  }
  const std::string key = "poisson+crosstalk";
  if (s.rfind(key, 0) == 0) {
    n.kind = NoiseKind::PoissonCrosstalk;
    if (s.size() > key.size()) {
      if (s[key.size()] != ':') throw std::invalid_argument("bad noise model '" + s + "'");
      try {
        n.sigma = std::stod(s.substr(key.size() + 1));
      } catch (const std::exception&) {
        throw std::invalid_argument("bad crosstalk width in '" + s + "'");
      }
      if (!(n.sigma > 0.0)) throw std::invalid_argument("crosstalk width must be positive");
    }
    return n;
  }
  throw std::invalid_argument("unknown noise model '" + s + "' (none, poisson, poisson+crosstalk[:sigma])");
}

std::string noise_name(const NoiseModel& n) {
  switch (n.kind) {
    case NoiseKind::None: return "none";
    case NoiseKind::Poisson: return "poisson";
    case NoiseKind::PoissonCrosstalk: return "poisson+crosstalk:" + std::to_string(n.sigma);
  }
  return "none";
}

CMatrix density_from_source(const ModeSource& src) {
  const int d = src.d;
  if (static_cast<int>(src.l.size()) != d) throw std::invalid_argument("density requires one profile per ket");
  CMatrix rho = CMatrix::Zero(d * d, d * d);
  for (const auto& A : src.terms) {
    CVector v(d * d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) v(a * d + b) = A(a, b);
    rho += v * v.adjoint();
  }
  const double tr = rho.trace().real();
  if (!(tr > 0.0)) throw std::invalid_argument("density of an empty source");
  return rho / tr;
}

CMatrix density_from_state(const QuditState& s) { return density_from_source(mode_source(s)); }

ModeSource source_from_density(const CMatrix& rho, const std::vector<int>& l) {
  const int d = static_cast<int>(l.size());
  if (rho.rows() != d * d || rho.cols() != d * d) throw std::invalid_argument("density size does not match l");
  if ((rho - rho.adjoint()).norm() > 1e-8 * std::max(1.0, rho.norm()))
    throw std::invalid_argument("density matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  const double top = es.eigenvalues().maxCoeff();
  if (!(top > 0.0)) throw std::invalid_argument("density matrix has no positive weight");
  ModeSource src;
  src.d = d;
  src.l = l;
  for (int k = d * d - 1; k >= 0; --k) {
    const double lam = es.eigenvalues()(k);
    if (lam <= 1e-12 * top) continue;
    CMatrix A(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) A(a, b) = std::sqrt(lam) * es.eigenvectors()(a * d + b, k);
    src.terms.push_back(A);
  }
  return src;
}

CoincidenceMatrix simulate_coincidences(const CMatrix& rho, const ProjectionSet& set, double total_counts,
                                        const NoiseModel& noise, std::uint64_t seed) {
  const int d = set.d, K = set.size();
  if (rho.rows() != d * d || rho.cols() != d * d) throw std::invalid_argument("density size does not match set");
  if (!(total_counts > 0.0)) throw std::invalid_argument("total counts must be positive");
  const Eigen::VectorXd p = probabilities(setting_vectors(set), rho);
  CoincidenceMatrix c;
  c.counts.resize(K, K);
  for (int m = 0; m < K; ++m)
    for (int n = 0; n < K; ++n) c.counts(m, n) = total_counts * p(m * K + n);
  if (noise.kind == NoiseKind::PoissonCrosstalk) {
    const Eigen::MatrixXd ideal = c.counts;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        if (a == b) continue;
        const double dl = set.subspace_l[a] - set.subspace_l[b];
        const double env = std::exp(-dl * dl / (2.0 * noise.sigma * noise.sigma));
        c.counts(a, b) += noise.strength * env * 0.5 * (ideal(a, a) + ideal(b, b));
      }
  }
  if (noise.kind != NoiseKind::None) {
    std::mt19937_64 rng(seed);
    for (int m = 0; m < K; ++m)
      for (int n = 0; n < K; ++n) {
        const double mean = c.counts(m, n);
        c.counts(m, n) = mean > 0.0 ? static_cast<double>(std::poisson_distribution<long long>(mean)(rng)) : 0.0;
      }
  }
  c.total_counts = total_counts;
  c.noise = noise_name(noise);
  return c;
}

double epsilon_from_crosstalk(const CoincidenceMatrix& c, const ProjectionSet& set) {
  const int d = set.d;
  double total = 0.0, worst = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      total += c.counts(a, b);
      if (a != b) worst = std::max(worst, c.counts(a, b));
    }
  if (!(total > 0.0)) throw std::invalid_argument("basis block holds no counts");
  return worst / total;
}

CMatrix project_physical(const CMatrix& rho) {
  const CMatrix h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  if (!(lam.sum() > 0.0)) throw std::runtime_error("density has no positive part");
  lam /= lam.sum();
  return es.eigenvectors() * lam.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix threshold_density(const CMatrix& rho, double epsilon) {
  if (epsilon < 0.0) throw std::invalid_argument("epsilon must be nonnegative");
  if (epsilon == 0.0) return rho;
  CMatrix out = rho;
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    for (Eigen::Index j = 0; j < out.cols(); ++j)
      if (std::abs(out(i, j)) <= epsilon) out(i, j) = 0.0;
  return project_physical(out);
}

Reconstruction reconstruct(const CoincidenceMatrix& c, const ProjectionSet& set, const ReconstructOptions& opt) {
  const int d = set.d, K = set.size(), n = d * d;
  if (c.counts.rows() != K || c.counts.cols() != K)
    throw std::invalid_argument("coincidence matrix does not match the projection set");
  if ((c.counts.array() < 0.0).any()) throw std::invalid_argument("negative coincidence counts");
  const double total = c.counts.sum();
  if (!(total > 0.0)) throw std::invalid_argument("coincidence matrix is all zero");
  const CMatrix w = setting_vectors(set);
  Eigen::VectorXd meas(K * K);
  for (int m = 0; m < K; ++m)
    for (int q = 0; q < K; ++q) meas(m * K + q) = c.counts(m, q);
  const double floor = 1e-9 * total;

  CMatrix start = linear_inversion(w, meas, n);
  start = project_physical(start);
  start = (1.0 - 1e-7) * start + 1e-7 * CMatrix::Identity(n, n) / n;
  CMatrix G = hermitian_function(start, clip_sqrt);

  auto evaluate = [&](const CMatrix& g, CMatrix& rho) {
    const CMatrix gg = g.adjoint() * g;
    rho = gg / gg.trace().real();
    return chi2_of(meas, probabilities(w, rho), floor);
  };

  Reconstruction out;
  CMatrix rho;
  Chi2 cur = evaluate(G, rho);
  out.chi2_trace.push_back(cur.value);
  double step = 0.1;
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    // objective normalized by total counts so the gradient tolerance is scale-free
    const CMatrix W = w.transpose() * (cur.dp / total).cast<cplx>().asDiagonal() * w.conjugate();
    const double t = (G.adjoint() * G).trace().real();
    const cplx mean = (W * rho).trace();
    const CMatrix grad = 2.0 * G * (W - mean * CMatrix::Identity(n, n)) / t;
    if (grad.norm() < opt.grad_tol) {
      out.converged = true;
      break;
    }
    bool accepted = false;
    while (step > 1e-30) {
      CMatrix trial_rho;
      const CMatrix trial = G - step * grad;
      const Chi2 next = evaluate(trial, trial_rho);
      if (next.value <= cur.value) {
        G = trial / std::sqrt((trial.adjoint() * trial).trace().real());
        rho = trial_rho;
        cur = next;
        out.chi2_trace.push_back(cur.value);
        step *= 1.5;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // no descent direction left at machine precision
      out.converged = grad.norm() < 1e-6;
      break;
    }
  }
  out.iterations = it;
  out.chi2 = cur.value;
  out.rho = threshold_density(rho, opt.epsilon);
  return out;
}

double fidelity(const CMatrix& rho_t, const CMatrix& rho_m) {
  if (rho_t.rows() != rho_m.rows() || rho_t.cols() != rho_m.cols())
    throw std::invalid_argument("fidelity requires matching dimensions");
  const CMatrix s = hermitian_function(0.5 * (rho_t + rho_t.adjoint()), clip_sqrt);
  const CMatrix inner = s * rho_m * s;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (inner + inner.adjoint()));
  // drop roundoff eigenvalues
  const double floor = 1e-12 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  double tr = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > floor) tr += std::sqrt(es.eigenvalues()(i));
  return tr * tr;
}

double purity(const CMatrix& rho) { return (rho * rho).trace().real(); }

double concurrence(const CMatrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4)
    throw std::invalid_argument("concurrence is supported only for a two-qubit (4x4) density");
  CMatrix yy = CMatrix::Zero(4, 4);
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const CMatrix R = rho * yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<CMatrix> es(R);
  std::vector<double> lam;
  for (int i = 0; i < 4; ++i) lam.push_back(clip_sqrt(es.eigenvalues()(i).real()));
  std::sort(lam.begin(), lam.end(), std::greater<>());
  return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

CVector haar_vector(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("haar vector size must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = cplx(g(rng), g(rng));
  return v / v.norm();
}

std::vector<cplx> haar_amplitudes(int d, std::uint64_t seed) {
  const CVector v = haar_vector(d, seed);
  return {v.data(), v.data() + d};
}

TopologicalSpectrum spectrum_from_density(const CMatrix& rho, const std::vector<int>& l, SpectrumMode mode,
                                          const SpectrumOptions& opt) {
  return compute_spectrum(source_from_density(rho, l), mode, opt);
}

}  // namespace topospec
