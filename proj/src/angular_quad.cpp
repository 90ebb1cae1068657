#include "smm/angular_quad.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

namespace smm {

namespace {

struct LevelSymmetricTable {
  double mu1;
  // Per-octant point weights keyed by the descending-sorted level triple.
  std::map<std::array<int, 3>, double> class_weights;
};

// Octant weights for N <= 12 solve the even-moment conditions
// sum w mu^{2k} = 1/(2k+1) in double precision; N = 16 uses the classical
// Lewis-Miller values. Weights are renormalized to an exact octant sum below.
const std::map<int, LevelSymmetricTable>& tables() {
  static const std::map<int, LevelSymmetricTable> t = {
      {2, {0.5773502691896257, {{{1, 1, 1}, 1.0}}}},
      {4, {0.3500212, {{{2, 1, 1}, 1.0 / 3.0}}}},
      {6, {0.2666355, {{{3, 1, 1}, 0.17612624591274795}, {{2, 2, 1}, 0.15720708742058537}}}},
      {8,
       {0.2182179,
        {{{4, 1, 1}, 0.12098765973449621},
         {{3, 2, 1}, 0.09074074074074075},
         {{2, 2, 2}, 0.09259257635206682}}}},
      {10,
       {0.1893213,
        {{{5, 1, 1}, 0.08930312559193576},
         {{4, 2, 1}, 0.07252917362500326},
         {{3, 2, 2}, 0.05392812891887256},
         {{3, 3, 1}, 0.04504373157251851}}}},
      {12,
       {0.1672126,
        {{{6, 1, 1}, 0.07076256206247881},
         {{5, 2, 1}, 0.055881107169369205},
         {{4, 2, 2}, 0.050281980827219734},
         {{4, 3, 1}, 0.0373376601309807},
         {{3, 3, 2}, 0.025851255842934986}}}},
      {16,
       {0.1389568,
        {{{8, 1, 1}, 0.0489872},
         {{7, 2, 1}, 0.0413296},
         {{6, 3, 1}, 0.0212326},
         {{5, 4, 1}, 0.0256207},
         {{6, 2, 2}, 0.0360486},
         {{5, 3, 2}, 0.0144589},
         {{4, 4, 2}, 0.0344958},
         {{4, 3, 3}, 0.0085179}}}},
  };
  return t;
}

std::string supported_orders() {
  std::string s;
  for (const auto& [n, _] : tables()) s += (s.empty() ? "" : ", ") + std::to_string(n);
  return s;
}

}  // namespace

SnQuadrature::SnQuadrature(int order, std::vector<Direction> dirs, std::vector<double> weights)
    : order_(order), dirs_(std::move(dirs)), weights_(std::move(weights)) {
  double total = 0.0, sx = 0.0, sy = 0.0;
  for (int d = 0; d < size(); ++d) {
    total += weights_[d];
    sx += weights_[d] * std::abs(dirs_[d][0]);
    sy += weights_[d] * std::abs(dirs_[d][1]);
  }
  axis_alpha_ = {sx / total, sy / total};
}

double SnQuadrature::alpha(Point n) const {
  if (n.y == 0.0 && std::abs(n.x) == 1.0) return axis_alpha_[0];
  if (n.x == 0.0 && std::abs(n.y) == 1.0) return axis_alpha_[1];
  double num = 0.0, den = 0.0;
  for (int d = 0; d < size(); ++d) {
    num += weights_[d] * std::abs(dirs_[d][0] * n.x + dirs_[d][1] * n.y);
    den += weights_[d];
  }
  return num / den;
}

int SnQuadrature::mirror(int d, Point n) const {
  const double on = dirs_[d][0] * n.x + dirs_[d][1] * n.y;
  const Direction target = {dirs_[d][0] - 2 * on * n.x, dirs_[d][1] - 2 * on * n.y, dirs_[d][2]};
  for (int k = 0; k < size(); ++k) {
    if (std::abs(dirs_[k][0] - target[0]) < 1e-12 && std::abs(dirs_[k][1] - target[1]) < 1e-12 &&
        std::abs(dirs_[k][2] - target[2]) < 1e-12 && std::abs(weights_[k] - weights_[d]) < 1e-14)
      return k;
  }
  return -1;
}

SnQuadrature level_symmetric(int order) {
  const auto it = tables().find(order);
  if (it == tables().end())
    throw QuadratureError("level_symmetric: unsupported order S" + std::to_string(order) +
                          " (supported: " + supported_orders() + ")");
  const auto& table = it->second;
  const int n = order / 2;

  std::vector<double> mu(n);
  if (order == 2) {
    mu[0] = 1.0 / std::sqrt(3.0);
  } else {
    const double delta = 2.0 * (1.0 - 3.0 * table.mu1 * table.mu1) / (order - 2);
    for (int i = 0; i < n; ++i) mu[i] = std::sqrt(table.mu1 * table.mu1 + i * delta);
  }

  // One octant: level triples (i,j,k) with i+j+k = n+2.
  std::vector<std::array<int, 3>> points;
  std::vector<double> octant_w;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      const int k = n + 2 - i - j;
      if (k < 1 || k > n) continue;
      std::array<int, 3> key = {i, j, k};
      std::sort(key.begin(), key.end(), std::greater<>());
      points.push_back({i, j, k});
      octant_w.push_back(table.class_weights.at(key));
    }
  double octant_sum = 0.0;
  for (double w : octant_w) octant_sum += w;

  // Folded set: four (x,y) quadrants with Omega_z > 0 and doubled weight.
  const double scale = 4.0 * std::numbers::pi / 4.0 / octant_sum;
  std::vector<Direction> dirs;
  std::vector<double> weights;
  for (const auto [sx, sy] : {std::pair{1, 1}, {-1, 1}, {-1, -1}, {1, -1}})
    for (std::size_t p = 0; p < points.size(); ++p) {
      dirs.push_back({sx * mu[points[p][0] - 1], sy * mu[points[p][1] - 1], mu[points[p][2] - 1]});
      weights.push_back(scale * octant_w[p]);
    }
  return SnQuadrature(order, std::move(dirs), std::move(weights));
}

}  // namespace smm
