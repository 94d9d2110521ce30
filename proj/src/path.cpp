#include "bfa/path.hpp"

#include <algorithm>
#include <cmath>

namespace bfa {

double next_jump_time(double t, double u) {
  if (!(t > 0.0 && t <= 1.0)) throw std::domain_error("jump clock needs 0 < t <= 1");
  if (!(u > 0.0 && u <= 1.0))
    throw std::domain_error("inversion draw must lie in (0,1]");
  return t / (u * u);
}

int CoordinatePath::sign_at(double t) const {
  const auto flips =
      std::upper_bound(jump_times.begin(), jump_times.end(), t) -
      jump_times.begin();
  return (flips & 1) ? -sign_at_truncation : sign_at_truncation;
}

namespace {

void check_path_args(int n, double eps) {
  if (n < 1 || n > max_path_dim)
    throw capacity_error("path dimension outside [1, 32]");
  if (!(eps >= min_truncation && eps <= max_truncation))
    throw std::domain_error("truncation time outside [1e-9, 1e-2]");
}

// Flip times on (eps, 1] by repeated inversion. Draws with T <= t (possible
// only when u rounds to 1) are redrawn to keep the times strictly increasing.
void fill_jumps(std::vector<double>& out, double eps, Rng& rng) {
  out.clear();
  double t = eps;
  while (true) {
    const double next = next_jump_time(t, rng.next_unit_positive());
    if (next > 1.0) break;
    if (next <= t) continue;
    out.push_back(next);
    t = next;
  }
}

bool has_duplicate(std::vector<double>& scratch) {
  std::sort(scratch.begin(), scratch.end());
  return std::adjacent_find(scratch.begin(), scratch.end()) != scratch.end();
}

}  // namespace

SamplePath sample_path(int n, double eps, Rng& rng) {
  check_path_args(n, eps);
  SamplePath path;
  path.n = n;
  path.truncation = eps;
  path.coords.resize(n);
  std::vector<double> all_times;
  while (true) {
    all_times.clear();
    for (auto& coord : path.coords) {
      coord.truncation = eps;
      coord.sign_at_truncation = rng.next_sign();
      fill_jumps(coord.jump_times, eps, rng);
      all_times.insert(all_times.end(), coord.jump_times.begin(),
                       coord.jump_times.end());
    }
    if (!has_duplicate(all_times)) break;
    ++path.collision_resamples;
  }
  return path;
}

SamplePath sample_path_indexed(int n, double eps, std::uint64_t seed,
                               std::uint64_t path_index) {
  Rng rng(derive_stream(seed, path_index));
  SamplePath path = sample_path(n, eps, rng);
  path.seed = seed;
  path.path_index = path_index;
  return path;
}

void point_at(const SamplePath& path, double t, std::span<double> out) {
  if (!(t >= path.truncation && t <= 1.0))
    throw std::domain_error(
        "query time below the path truncation or above 1; the sub-truncation "
        "segment is handled analytically by the functionals");
  for (int i = 0; i < path.n; ++i)
    out[i] = t * static_cast<double>(path.coords[i].sign_at(t));
}

std::vector<double> point_at(const SamplePath& path, double t) {
  std::vector<double> out(path.n);
  point_at(path, t, out);
  return out;
}

std::uint32_t endpoint_mask(const SamplePath& path) {
  std::uint32_t mask = 0;
  for (int i = 0; i < path.n; ++i)
    if (path.coords[i].sign_at(1.0) > 0) mask |= std::uint32_t{1} << i;
  return mask;
}

HesitantOverlay hesitant_sample(const SamplePath& path, Rng& rng) {
  HesitantOverlay overlay;
  overlay.extra_jump_times.resize(path.n);
  for (int i = 0; i < path.n; ++i) {
    const auto& base = path.coords[i].jump_times;
    auto& extra = overlay.extra_jump_times[i];
    extra.clear();
    double t = path.truncation;
    while (true) {
      const double next = next_jump_time(t, rng.next_unit_positive());
      if (next > 1.0) break;
      if (next <= t) continue;
      // exact tie with a base flip time: redraw (measure-zero event)
      if (std::binary_search(base.begin(), base.end(), next)) continue;
      extra.push_back(next);
      t = next;
    }
  }
  return overlay;
}

std::vector<double> hesitant_point_at(const SamplePath& path,
                                      const HesitantOverlay& overlay,
                                      double t) {
  std::vector<double> out = point_at(path, t);
  for (int i = 0; i < path.n; ++i) {
    const auto& base = path.coords[i].jump_times;
    const auto& extra = overlay.extra_jump_times[i];
    if (std::binary_search(base.begin(), base.end(), t) ||
        std::binary_search(extra.begin(), extra.end(), t))
      out[i] = 0.0;
  }
  return out;
}

}  // namespace bfa
