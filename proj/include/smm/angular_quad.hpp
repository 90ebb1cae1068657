#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "smm/mesh.hpp"

namespace smm {

using Direction = std::array<double, 3>;

class QuadratureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Discrete-ordinates set folded onto the upper hemisphere (Omega_z > 0) for
/// 2D problems. Weights sum to 4 pi.
class SnQuadrature {
 public:
  SnQuadrature() = default;
  SnQuadrature(int order, std::vector<Direction> dirs, std::vector<double> weights);

  int order() const { return order_; }
  int size() const { return static_cast<int>(dirs_.size()); }
  const Direction& direction(int d) const { return dirs_[d]; }
  double weight(int d) const { return weights_[d]; }
  const std::vector<Direction>& directions() const { return dirs_; }
  const std::vector<double>& weights() const { return weights_; }

  /// In-plane projection (Omega_x, Omega_y).
  Point planar(int d) const { return {dirs_[d][0], dirs_[d][1]}; }

  /// Normalized half-range factor sum_d w_d |Omega_d . n| / sum_d w_d.
  double alpha(Point n) const;

  /// Index of the direction mirrored through a plane with normal n, or -1.
  int mirror(int d, Point n) const;

 private:
  int order_ = 0;
  std::vector<Direction> dirs_;
  std::vector<double> weights_;
  std::array<double, 2> axis_alpha_{};  // for n = (+-1,0) and (0,+-1)
};

/// Level-symmetric S_N set, N in {2,4,6,8,10,12,16}, folded for 2D.
SnQuadrature level_symmetric(int order);

inline double alpha(const SnQuadrature& q, Point n) { return q.alpha(n); }

}  // namespace smm
