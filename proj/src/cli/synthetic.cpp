#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "msr/cli.hpp"

namespace msr::cli {

namespace {
constexpr double kHorizonMargin = 1.1;
}

Instance gen_synthetic(int n, std::uint64_t seed, double area) {
  if (n < 1 || n > kMaxPoints) throw Error(ErrorKind::invalid_argument, "n must be in [1, 64], got " + std::to_string(n));
  if (!(area > 0.0) || !std::isfinite(area)) throw Error(ErrorKind::invalid_argument, "area must be positive");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> where(0.0, area);
  std::uniform_real_distribution<double> chance(0.0, 1.0);
  std::vector<Coord> coords(n);
  std::vector<double> probs(n);
  for (int i = 0; i < n; ++i) {
    coords[i].x = where(rng);
    coords[i].y = where(rng);
    probs[i] = chance(rng);
  }
  // The diagonal of the square bounds every cost, including from an origin
  // anywhere inside it.
  const double reach = area * std::sqrt(2.0);
  const double horizon = reach * (n + 1) * kHorizonMargin;
  return Instance::from_coordinates(std::move(probs), std::move(coords), horizon);
}

}  // namespace msr::cli
