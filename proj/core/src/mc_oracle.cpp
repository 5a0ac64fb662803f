#include "rbm/mc_oracle.hpp"

#include <cmath>
#include <random>
#include <string>

#include "rbm/errors.hpp"
#include "rbm/lcp.hpp"
#include "rbm/parallel.hpp"

namespace rbm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_config(const SimConfig& c) {
  if (!(c.step_h > 0.0) || !(c.burn_in >= c.step_h) || !(c.horizon_T > c.burn_in) ||
      c.n_paths < 1) {
    throw DomainError("simulation config must satisfy 0 < step_h <= burn_in < horizon_T and n_paths >= 1");
  }
}

}  // namespace

std::uint64_t path_seed(std::uint64_t master_seed, std::uint64_t index) {
  return splitmix64(master_seed ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

std::vector<PathSample> simulate(const ModelParams& params, const SimConfig& config) {
  require_valid(params);
  check_config(config);

  const double h = config.step_h;
  const double sqh = std::sqrt(h);
  const long long n_steps = std::llround(config.horizon_T / h);
  const long long n_burn = std::llround(config.burn_in / h);
  const double window = static_cast<double>(n_steps - n_burn) * h;

  // Cholesky factor of Sigma.
  const double l11 = std::sqrt(params.sigma11);
  const double l21 = params.sigma12 / l11;
  const double l22 = std::sqrt(params.sigma22 - l21 * l21);
  const Eigen::Matrix2d R = params.reflection();
  const double var1 = params.sigma11 * h;
  const double var2 = params.sigma22 * h;
  const double drift1 = params.mu1 * h;
  const double drift2 = params.mu2 * h;

  std::vector<PathSample> out(config.n_paths);
  parallel_for(
      config.n_paths,
      [&](std::size_t i) {
        std::mt19937_64 rng(path_seed(config.master_seed, i));
        std::normal_distribution<double> normal(0.0, 1.0);
        std::uniform_real_distribution<double> uniform(0.0, 1.0);

        // Minimum of a Brownian bridge from a to b with variance v over the step.
        auto bridge_min = [&](double a, double b, double v) {
          if (a > 0.0 && b > 0.0 && 2.0 * a * b / v > 40.0) return std::min(a, b);
          const double u = 1.0 - uniform(rng);  // in (0, 1]
          return 0.5 * (a + b - std::sqrt((b - a) * (b - a) - 2.0 * v * std::log(u)));
        };

        double z1 = 0.0, z2 = 0.0;
        double lt1 = 0.0, lt2 = 0.0;
        for (long long k = 0; k < n_steps; ++k) {
          const double g1 = normal(rng);
          const double g2 = normal(rng);
          const double x1 = z1 + drift1 + sqh * l11 * g1;
          const double x2 = z2 + drift2 + sqh * (l21 * g1 + l22 * g2);
          const double m1 = bridge_min(z1, x1, var1);
          const double m2 = bridge_min(z2, x2, var2);
          if (m1 >= 0.0 && m2 >= 0.0) {
            z1 = x1;
            z2 = x2;
            continue;
          }
          const auto sol = solve_lcp2(R, Eigen::Vector2d(m1, m2));
          if (!sol) throw NumericalError("complementarity problem without solution in the reflection step");
          const Eigen::Vector2d push = R * sol->z;
          double n1 = x1 + push(0);
          double n2 = x2 + push(1);
          const double floor_tol = -1e-12 * std::max(1.0, std::abs(x1) + std::abs(x2));
          if (n1 < floor_tol || n2 < floor_tol) {
            throw NumericalError("reflection step left the quadrant beyond tolerance");
          }
          z1 = std::max(n1, 0.0);
          z2 = std::max(n2, 0.0);
          if (k >= n_burn) {
            lt1 += sol->z(0);
            lt2 += sol->z(1);
          }
        }
        out[i].z = Eigen::Vector2d(z1, z2);
        out[i].local_time = Eigen::Vector2d(lt1, lt2);
        out[i].window = window;
      },
      config.threads);
  return out;
}

PhiEstimate estimate_phi(const std::vector<PathSample>& samples, std::complex<double> theta1,
                         std::complex<double> theta2) {
  if (theta1.real() > 0.0 || theta2.real() > 0.0) {
    throw DomainError("estimate_phi requires Re theta1 <= 0 and Re theta2 <= 0");
  }
  if (samples.empty()) throw DomainError("no samples");
  const double n = static_cast<double>(samples.size());
  std::complex<double> sum = 0.0;
  for (const auto& s : samples) sum += std::exp(theta1 * s.z(0) + theta2 * s.z(1));
  const std::complex<double> mean = sum / n;
  double ss = 0.0;
  for (const auto& s : samples) ss += std::norm(std::exp(theta1 * s.z(0) + theta2 * s.z(1)) - mean);
  PhiEstimate out;
  out.mean = mean;
  out.std_error = samples.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return out;
}

MassEstimate estimate_boundary_masses(const std::vector<PathSample>& samples) {
  if (samples.empty()) throw DomainError("no samples");
  const double n = static_cast<double>(samples.size());
  double s1 = 0.0, s2 = 0.0;
  for (const auto& s : samples) {
    s1 += s.local_time(0) / s.window;
    s2 += s.local_time(1) / s.window;
  }
  MassEstimate out;
  out.nu1 = s1 / n;
  out.nu2 = s2 / n;
  double v1 = 0.0, v2 = 0.0;
  for (const auto& s : samples) {
    v1 += std::pow(s.local_time(0) / s.window - out.nu1, 2);
    v2 += std::pow(s.local_time(1) / s.window - out.nu2, 2);
  }
  if (samples.size() > 1) {
    out.std_error1 = std::sqrt(v1 / (n - 1.0) / n);
    out.std_error2 = std::sqrt(v2 / (n - 1.0) / n);
  }
  return out;
}

}  // namespace rbm
