#include "qhd/sweep.hpp"

#include <cmath>

namespace qhd {

std::vector<SweepCell> run_sweep(const BimatrixGame2x2<double>& game, const SweepSection& sweep) {
  if (sweep.resolution < 2) throw ValidationError("resolution", "must be at least 2");
  if (sweep.x_axis == sweep.y_axis) throw ValidationError("y", "must differ from x");
  if (!(sweep.split >= 0 && sweep.split <= 1)) throw ValidationError("split", "must lie in [0, 1]");

  const int xi = static_cast<int>(sweep.x_axis);
  const int yi = static_cast<int>(sweep.y_axis);
  std::array<int, 2> rest{};
  for (int k = 0, n = 0; k < 4; ++k) {
    if (k != xi && k != yi) rest[n++] = k;
  }

  const std::size_t n = sweep.resolution;
  const double denom = static_cast<double>(n - 1);
  std::vector<SweepCell> cells;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i + j > n - 1) continue;
      const double x = static_cast<double>(i) / denom;
      const double y = static_cast<double>(j) / denom;
      const double r = std::max(0.0, 1.0 - x - y);

      SweepCell cell;
      cell.moduli[xi] = x;
      cell.moduli[yi] = y;
      cell.moduli[rest[0]] = sweep.split * r;
      cell.moduli[rest[1]] = r - sweep.split * r;

      StateAmplitudes<double> amps;
      amps.hh = std::sqrt(cell.moduli[0]);
      amps.dd = std::sqrt(cell.moduli[1]);
      amps.hd = std::sqrt(cell.moduli[2]);
      amps.dh = std::sqrt(cell.moduli[3]);
      const auto state = make_initial_state(amps, NormalizationPolicy::Renormalize);
      cell.report = analyze(payoff_surface(state, game));
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

}  // namespace qhd
