#pragma once

#include <array>
#include <vector>

#include "qhd/config.hpp"
#include "qhd/ess_analyzer.hpp"

namespace qhd {

/// One grid point of a state sweep.
struct SweepCell {
  std::array<double, 4> moduli{};  // |a|^2, |b|^2, |c|^2, |d|^2
  EquilibriumReport<double> report;

  bool symmetric() const { return report.game_kind == GameKind::Symmetric; }
};

/// Grids the two squared moduli named by `sweep.x_axis` and `sweep.y_axis`
/// over {0, 1/(n-1), ..., 1}, skipping points with x + y > 1. The remaining
/// mass r = 1 - x - y goes split * r to the first of the other two moduli (in
/// a, b, c, d order) and the rest to the second. Rows come out in (x, y)
/// lexicographic grid order.
std::vector<SweepCell> run_sweep(const BimatrixGame2x2<double>& game, const SweepSection& sweep);

}  // namespace qhd
