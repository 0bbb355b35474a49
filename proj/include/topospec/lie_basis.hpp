#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace topospec {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

struct BasisElement {
  int index;  // 1-based
  CMatrix matrix;
};

struct RootPair {
  int row;  // 1-based, row < col
  int col;
  CMatrix raising;
  std::pair<int, int> nice_pair;  // basis indices of E+E^dagger and (E-E^dagger)/i
  RVector cartan_combo;           // coefficients over the d-1 Cartan elements
};

struct CartanWeyl {
  std::vector<RootPair> roots;
  std::vector<BasisElement> cartan;
};

// Nested generalized Gell-Mann ordering: for each column k = 2..d the
// symmetric/antisymmetric pairs (j,k), j<k, followed by the k-th diagonal.
int sym_index(int row, int col);
int antisym_index(int row, int col);
int diag_index(int k);  // k = 1..d-1
int basis_size(int d);

std::vector<BasisElement> build_basis(int d);
CartanWeyl cartan_weyl(int d);
std::vector<std::pair<std::pair<int, int>, RootPair>> nice_pairs(int d);

// Cartan basis indices in ascending order.
std::vector<int> cartan_indices(int d);

// Root whose nice pair is (a, a+1), or nullptr-equivalent false.
bool root_of_pair(int d, int a, int b, int& row, int& col);

}  // namespace topospec
