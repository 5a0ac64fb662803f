#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "rbm/model.hpp"

namespace rbm {

struct SimConfig {
  double step_h = 1e-3;
  double horizon_T = 51.0;
  double burn_in = 50.0;
  std::size_t n_paths = 10000;
  std::uint64_t master_seed = 0x5eed2024ULL;
  unsigned threads = 0;  // 0 = automatic (see worker_count)
};

struct PathSample {
  Eigen::Vector2d z;           // position at the horizon
  Eigen::Vector2d local_time;  // pushing accumulated over [burn_in, horizon_T]
  double window = 1.0;         // horizon_T - burn_in
};

// Seed of path i, derived from the master seed by a splitmix64 mix.
std::uint64_t path_seed(std::uint64_t master_seed, std::uint64_t index);

// Euler scheme with a per-step Skorokhod correction. Each step draws the
// Gaussian increment, then the minimum of each coordinate along the Brownian
// bridge joining the two endpoints; the pushes dL >= 0 solve the 2x2
// complementarity problem  m + R dL >= 0,  dL_i (m + R dL)_i = 0  where m are
// the bridge minima, and the new position is the free endpoint plus R dL.
std::vector<PathSample> simulate(const ModelParams& params, const SimConfig& config);

struct PhiEstimate {
  std::complex<double> mean;
  double std_error = 0.0;
};

// Sample mean of exp(theta . Z). Throws DomainError for a positive real part.
PhiEstimate estimate_phi(const std::vector<PathSample>& samples, std::complex<double> theta1,
                         std::complex<double> theta2);

struct MassEstimate {
  double nu1 = 0.0;
  double nu2 = 0.0;
  double std_error1 = 0.0;
  double std_error2 = 0.0;
};

// Mean local time per unit time over the measurement window.
MassEstimate estimate_boundary_masses(const std::vector<PathSample>& samples);

}  // namespace rbm
