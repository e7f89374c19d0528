#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hgeo/lie_core.hpp"
#include "hgeo/minkowski.hpp"
#include "hgeo/solvers.hpp"

namespace hgeo {

/// [algebra] section. family is one of so3, sl2, heisenberg, custom.
struct AlgebraSpec {
  std::string family = "so3";
  double a = 1.0;
  double b = 1.0;
  double c = 1.0;
  double scale = 1.0;  // heisenberg bracket scale
  int dim = 0;         // custom only
  /// custom only: (i, j, k, value), 1-based, meaning [E_i,E_j] has value on E_k.
  std::vector<std::array<double, 4>> brackets;
  std::string label;
};

struct PlotSettings {
  std::string plane = "x3=0";
  std::optional<Mat> axes;  // two columns; overrides plane when present
  int resolution = 720;
  double extent = 2.0;
};

/// Parsed problem definition. Matrices are given as lists of rows; bases as
/// lists of vectors.
struct ProblemConfig {
  AlgebraSpec algebra;
  std::optional<Mat> alpha;   // default identity on m
  std::optional<Vec> drift;   // default zero
  std::optional<Mat> h_basis; // columns; default empty (trivial isotropy)
  std::optional<Mat> m_basis; // columns; default Euclidean complement of h
  SolveConfig solve;
  std::optional<Mat> case1_hyperplane;  // columns in m-coordinates
  PlotSettings plot;
};

/// Validated, ready-to-use problem data.
struct Problem {
  LieAlgebra algebra;
  ReductiveDecomposition decomposition;
  RandersStructure randers;
  KillingData killing;
};

/// Parses the sectioned key = value format:
///
///   [algebra]  family, a, b, c, scale, dim, brackets, label, h_basis, m_basis
///   [metric]   alpha, V
///   [solver]   seeds, newton_tol, max_iter, dedup_angle, continuum_fraction,
///              rng_seed, threads, case1_hyperplane
///   [plot]     plane, axes, resolution, extent
///
/// Values are JSON scalars or arrays; bare words are strings. '#' and ';'
/// start comments. All problems are collected and reported together in one
/// Error(input) whose message lists "line N: ..." entries.
ProblemConfig parse_config(const std::string& text);
ProblemConfig load_config(const std::string& path);

/// Builds and validates the algebra, decomposition and Randers data.
Problem build_problem(const ProblemConfig& config);

LieAlgebra build_algebra(const AlgebraSpec& spec);

}  // namespace hgeo
