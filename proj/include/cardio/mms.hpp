#pragma once

#include <vector>

namespace cardio {

struct ConvergenceRow {
  int n = 0;  ///< cells per side of the structured mesh
  double h = 0.0;
  double error = 0.0;
  double order = 0.0;  ///< log2(previous error / error); 0 on the first row
};

/// Pure-Neumann P1 problem -lap u = 2 pi^2 u on the unit square with
/// u = cos(pi x) cos(pi y), solved on the mean-zero subspace. L^2 errors.
std::vector<ConvergenceRow> poisson_mms(const std::vector<int>& ns);

struct StokesRow {
  int n = 0;
  double h = 0.0;
  ConvergenceRow velocity;
  ConvergenceRow pressure;
};

/// Taylor-Hood Stokes-like problem with constant anisotropic sigma and Robin
/// data manufactured from the divergence-free field u = curl(sin(pi x) sin(pi y))
/// and p = cos(pi x) cos(pi y) + x. L^2 errors.
std::vector<StokesRow> taylor_hood_mms(const std::vector<int>& ns);

}  // namespace cardio
