#pragma once

#include <vector>

#include "bfa/cube_function.hpp"
#include "bfa/wht.hpp"

namespace bfa {

struct SpectralStats {
  double mean = 0.0;
  double variance = 0.0;
  std::vector<double> influences;
  double total_influence = 0.0;
  double sum_sq_influences = 0.0;
  bool monotone = false;
};

// Influence of coordinate i is E(d_i f)^2 = E|d_i f|; requires a boolean f.
SpectralStats spectral_stats(const CubeFunction& f);

struct SensitivityProfile {
  std::vector<int> sensitivity;  // per vertex: # disagreeing neighbours
  double boundary_mass = 0.0;        // mu{ y : sensitivity > 0 }
  double inner_boundary_mass = 0.0;  // restricted to f(y) = +1
  double outer_boundary_mass = 0.0;  // restricted to f(y) = -1
  double mean_sqrt = 0.0;            // E sqrt(h)

  // E[h^p] with the convention 0^p = 0. Requires p > 0.
  double moment(double p) const;
};

SensitivityProfile sensitivity_profile(const CubeFunction& f);

// Covariance of f at a point and its eps-noisy copy, computed spectrally.
double noise_stability(const CubeFunction& f, double eps);

// Variance of the coefficient process at time t: sum_{S != 0} fhat(S)^2 t^{2|S|}.
double time_variance(const CubeFunction& f, double t);

// Expected squared gradient norm along the process at time t, summed over
// coordinates; equals sum_i Inf_i^2 at t = 0 for monotone f.
double r_value(const CubeFunction& f, double t);

// Second moment of the extension of |d_i f| along the process at time t.
double psi_value(const CubeFunction& f, int coord, double t);

}  // namespace bfa
