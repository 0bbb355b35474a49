#include "topospec/invariants.hpp"

#include <cmath>
#include <numbers>

namespace topospec {

WrappingResult wrapping_numeric(const UnitField& field, const QuadOptions& opt) {
  std::vector<ComponentField> comps(field.comp.begin(), field.comp.end());
  BatchTriple t{{0, 1, 2}, field.origin_fixed, field.fixed_component, field.sheet};
  const auto q = integrate_batch(comps, {t}, field.grid, opt).front();
  WrappingResult r;
  r.raw = q.raw;
  r.glued = q.raw;
  r.quadrature_error = q.error;
  r.converged = q.converged;
  r.n_r = q.n_r;
  r.n_phi = q.n_phi;
  if (!q.converged)
    throw NonConvergent("wrapping integral did not converge (error estimate " + std::to_string(q.error) + ")",
                        q.error);
  return r;
}

namespace {

int levi_civita(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

// Central differences in the interior, one-sided at the lattice edge.
void lattice_derivatives(const PlanarField& f, int i, int j, Vec3& dx, Vec3& dy) {
  auto at = [&](int a, int b) -> const Vec3& { return f.s[static_cast<size_t>(b) * f.nx + a]; };
  if (i == 0)
    dx = (at(1, j) - at(0, j)) / f.dx;
  else if (i == f.nx - 1)
    dx = (at(i, j) - at(i - 1, j)) / f.dx;
  else
    dx = (at(i + 1, j) - at(i - 1, j)) / (2.0 * f.dx);
  if (j == 0)
    dy = (at(i, 1) - at(i, 0)) / f.dy;
  else if (j == f.ny - 1)
    dy = (at(i, j) - at(i, j - 1)) / f.dy;
  else
    dy = (at(i, j + 1) - at(i, j - 1)) / (2.0 * f.dy);
}

void check_lattice(const PlanarField& f) {
  if (f.nx < 2 || f.ny < 2 || f.s.size() != static_cast<size_t>(f.nx) * f.ny)
    throw std::invalid_argument("planar field lattice is malformed");
}

}  // namespace

double charge_area_element_form(const PlanarField& f) {
  check_lattice(f);
  const double area[3] = {0.0, 0.0, f.dx * f.dy};  // plane normal along x^3
  double total = 0.0;
  for (int j = 0; j < f.ny; ++j)
    for (int i = 0; i < f.nx; ++i) {
      Vec3 d[3];
      lattice_derivatives(f, i, j, d[0], d[1]);
      d[2].setZero();
      const Vec3& phi = f.s[static_cast<size_t>(j) * f.nx + i];
      double cell = 0.0;
      for (int ii = 0; ii < 3; ++ii) {
        if (area[ii] == 0.0) continue;
        double acc = 0.0;
        for (int jj = 0; jj < 3; ++jj)
          for (int kk = 0; kk < 3; ++kk) {
            const int e1 = levi_civita(ii, jj, kk);
            if (!e1) continue;
            for (int a = 0; a < 3; ++a)
              for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 3; ++c) {
                  const int e2 = levi_civita(a, b, c);
                  if (e2) acc += e1 * e2 * phi[a] * d[jj][b] * d[kk][c];
                }
          }
        cell += acc * area[ii];
      }
      total += cell;
    }
  return total / (8.0 * std::numbers::pi);
}

double charge_planar_form(const PlanarField& f) {
  check_lattice(f);
  double total = 0.0;
  for (int j = 0; j < f.ny; ++j)
    for (int i = 0; i < f.nx; ++i) {
      Vec3 dx, dy;
      lattice_derivatives(f, i, j, dx, dy);
      total += f.s[static_cast<size_t>(j) * f.nx + i].dot(dx.cross(dy)) * f.dx * f.dy;
    }
  return total / (4.0 * std::numbers::pi);
}

}  // namespace topospec
