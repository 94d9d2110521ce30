#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bfa/cube_function.hpp"
#include "bfa/rng.hpp"

namespace bfa {

// Next sign-flip time of the rate-1/2t clock after time t, from one uniform
// draw u in (0,1]: survival past s is sqrt(t/s), so T = t/u^2. A return
// value above 1 means no further flip before time 1.
double next_jump_time(double t, double u);

// One coordinate realized on (truncation, 1]: the sign at the truncation
// time and the strictly increasing flip times after it.
struct CoordinatePath {
  double truncation = 0.0;
  int sign_at_truncation = 1;
  std::vector<double> jump_times;

  // Sign at time t >= truncation; flips at jump times count as already done
  // (right-continuous).
  int sign_at(double t) const;
};

struct SamplePath {
  int n = 0;
  double truncation = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t path_index = 0;
  int collision_resamples = 0;
  std::vector<CoordinatePath> coords;
};

inline constexpr int max_path_dim = 32;
inline constexpr double min_truncation = 1e-9;
inline constexpr double max_truncation = 1e-2;

// Signs at the truncation time are independent uniform, so the law at every
// later time is the exact process law restricted to [truncation, 1].
// Coordinates never share a flip time: exact ties trigger a full resample,
// counted in collision_resamples.
SamplePath sample_path(int n, double eps, Rng& rng);

// Convenience wrapper deriving the path's own stream from (seed, index).
SamplePath sample_path_indexed(int n, double eps, std::uint64_t seed,
                               std::uint64_t path_index);

// Coordinate i of the process at time t is t * sign_i(t).
void point_at(const SamplePath& path, double t, std::span<double> out);
std::vector<double> point_at(const SamplePath& path, double t);

// Vertex reached at time 1, as a mask (bit set <=> coordinate +1).
std::uint32_t endpoint_mask(const SamplePath& path);

// Extra flip times, independent of the base path, same clock. The union of
// base and extra times per coordinate is where the hesitant process sits
// at zero.
struct HesitantOverlay {
  std::vector<std::vector<double>> extra_jump_times;
};

HesitantOverlay hesitant_sample(const SamplePath& path, Rng& rng);

// Hesitant state: zero exactly at the union jump times, base state elsewhere.
std::vector<double> hesitant_point_at(const SamplePath& path,
                                      const HesitantOverlay& overlay, double t);

}  // namespace bfa
