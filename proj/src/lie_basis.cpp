#include "topospec/lie_basis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace topospec {

namespace {

void check_dimension(int d) {
  if (d < 2) throw std::invalid_argument("dimension must be at least 2, got " + std::to_string(d));
}

CMatrix diagonal_element(int d, int k) {
  CMatrix h = CMatrix::Zero(d, d);
  const double s = std::sqrt(2.0 / (k * (k + 1.0)));
  for (int i = 0; i < k; ++i) h(i, i) = s;
  h(k, k) = -k * s;
  return h;
}

}  // namespace

int sym_index(int row, int col) {
  const int k = col - 1;
  return k * k + 2 * (row - 1);
}

int antisym_index(int row, int col) { return sym_index(row, col) + 1; }

int diag_index(int k) { return k * k + 2 * k; }

int basis_size(int d) { return d * d - 1; }

std::vector<BasisElement> build_basis(int d) {
  check_dimension(d);
  std::vector<BasisElement> basis(basis_size(d));
  const std::complex<double> I(0.0, 1.0);
  for (int col = 2; col <= d; ++col) {
    for (int row = 1; row < col; ++row) {
      CMatrix s = CMatrix::Zero(d, d);
      s(row - 1, col - 1) = 1.0;
      s(col - 1, row - 1) = 1.0;
      CMatrix a = CMatrix::Zero(d, d);
      a(row - 1, col - 1) = -I;
      a(col - 1, row - 1) = I;
      basis[sym_index(row, col) - 1] = {sym_index(row, col), s};
      basis[antisym_index(row, col) - 1] = {antisym_index(row, col), a};
    }
    const int k = col - 1;
    basis[diag_index(k) - 1] = {diag_index(k), diagonal_element(d, k)};
  }
  return basis;
}

std::vector<int> cartan_indices(int d) {
  check_dimension(d);
  std::vector<int> out;
  for (int k = 1; k < d; ++k) out.push_back(diag_index(k));
  return out;
}

CartanWeyl cartan_weyl(int d) {
  check_dimension(d);
  CartanWeyl cw;
  for (int k = 1; k < d; ++k) cw.cartan.push_back({diag_index(k), diagonal_element(d, k)});
  for (int i = 1; i <= d; ++i) {
    for (int j = i + 1; j <= d; ++j) {
      RootPair r;
      r.row = i;
      r.col = j;
      r.raising = CMatrix::Zero(d, d);
      r.raising(i - 1, j - 1) = 1.0;
      r.nice_pair = {sym_index(i, j), antisym_index(i, j)};
      CMatrix comm = r.raising * r.raising.adjoint() - r.raising.adjoint() * r.raising;
      r.cartan_combo = RVector::Zero(d - 1);
      for (int k = 0; k < d - 1; ++k)
        r.cartan_combo(k) = 0.5 * (cw.cartan[k].matrix * comm).trace().real();
      cw.roots.push_back(std::move(r));
    }
  }
  return cw;
}

std::vector<std::pair<std::pair<int, int>, RootPair>> nice_pairs(int d) {
  std::vector<std::pair<std::pair<int, int>, RootPair>> out;
  for (auto& r : cartan_weyl(d).roots) out.emplace_back(r.nice_pair, r);
  return out;
}

bool root_of_pair(int d, int a, int b, int& row, int& col) {
  for (int j = 2; j <= d; ++j)
    for (int i = 1; i < j; ++i)
      if (sym_index(i, j) == a && antisym_index(i, j) == b) {
        row = i;
        col = j;
        return true;
      }
  return false;
}

}  // namespace topospec
