#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "perplex/multivar.hpp"
#include "perplex/structure.hpp"

namespace perplex {

/// Points of the discriminant Delta_f = f(critical set in B_eps) inside the
/// disk of radius eta.
///
/// One variable: the critical set is read off exactly in model coordinates.
/// Over C it is the root set of F'(z); over R+R, f splits into real
/// polynomials F+(y+), F-(y-) and the critical set is the union of the lines
/// y+ = r, y- = s at the critical points of F+ and F-. Each line is sampled
/// until consecutive image points are at most half a target cell apart,
/// target cell = 2 eta / grid_res.
///
/// Several variables: Newton projection from min(grid_res^2, 4096) fixed-seed
/// random starts onto grad f = 0 (field) or onto the vanishing of one
/// idempotent component of every partial (hyperbolic).
///
/// Throws DegenerateAlgebra when the discriminant of the algebra lies in the
/// degenerate band.
std::vector<Perplex> critical_values(const PerplexPolyN& f, const PerplexAlgebra& alg,
                                     double epsilon, double eta, int grid_res = 256);

/// Solutions of f(x) = c with ||x|| <= epsilon (n = 1), from Newton on a
/// grid_res x grid_res seed grid. Every returned point has
/// ||f(x) - c|| <= 1e-10; points closer than 1e-6 are merged. Sorted by
/// (x1, x2).
std::vector<Perplex> fiber_solve(const PerplexPolyN& f, const PerplexAlgebra& alg,
                                 const Perplex& c, double epsilon, int grid_res = 64);

struct ComponentReport {
  int cells = 0;
  std::vector<Perplex> targets;
  std::vector<int> counts;
  int majority = 0;
  bool constant = false;
  /// Share of the component's boundary cells that touch the mask.
  double mask_boundary_fraction = 0.0;
  bool low_confidence = false;
};

struct FibrationReport {
  AlgebraKind kind = AlgebraKind::Field;
  double epsilon = 0.0;
  double eta = 0.0;
  int halvings = 0;
  std::vector<Perplex> discriminant;
  std::vector<ComponentReport> components;
  /// Every probe off its component's majority lies within 3 cells of a
  /// discriminant sample.
  bool consistent = false;
  /// Consistent and every component constant.
  bool verified = false;
  double max_residual = 0.0;
};

struct TrivialityOptions {
  double epsilon = 1.0;
  double eta = 0.05;
  int probes_per_component = 8;
  int target_grid = 256;
  int mask_radius = 2;
  int seed_grid = 64;
  int max_halvings = 6;
};

/// Fiber counts over the components of D_eta minus the discriminant mask.
///
/// Components come from an 8-connected flood fill of the target grid cells
/// inside the disk that are farther than mask_radius cells from every
/// discriminant sample. Each component is probed at randomly chosen cell
/// centres. An unverified attempt is retried with epsilon and eta halved,
/// up to max_halvings times. Throws DegenerateAlgebra, InvalidArgument
/// (n != 1 or eta > epsilon / 10) and MaskTooCoarse when the mask leaves no
/// free cell or a component has fewer cells than probes on the final attempt.
FibrationReport local_triviality_check(const PerplexPolyN& f, const PerplexAlgebra& alg,
                                       const TrivialityOptions& opts, std::uint64_t seed);

struct FiberCloud {
  std::vector<std::vector<double>> points;
  int seeds = 0;
  double max_residual = 0.0;
  double link_radius = 0.0;
  /// Single-linkage components at link_radius; a diagnostic only.
  int connectivity = 0;
  bool on_discriminant = false;
  std::vector<std::string> warnings;
};

struct CloudOptions {
  double epsilon = 1.0;
  /// Disk radius used for the on-discriminant mask.
  double eta = 0.05;
  int cloud_size = 4096;
  int target_grid = 256;
  int mask_radius = 2;
};

/// Points of f^-1(c) inside B_eps (n = 2) by minimum-norm Newton projection
/// from uniform seeds in the ball. Throws EmptyFiber if nothing converges.
FiberCloud fiber_cloud(const PerplexPolyN& f, const PerplexAlgebra& alg, const Perplex& c,
                       const CloudOptions& opts, std::uint64_t seed);

}  // namespace perplex
