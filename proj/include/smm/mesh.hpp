#pragma once

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace smm {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }

/// Axis-aligned rectangle [x0,x1] x [y0,y1].
struct Box {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  bool contains(Point p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
};

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Material lookup by element centroid; the first box containing the point wins.
struct RegionMap {
  struct Region {
    Box box;
    int material = 0;
  };
  std::vector<Region> regions;
  int default_material = 0;

  int lookup(Point p) const;
};

enum class BoundaryTag { Inflow, Reflecting };

/// Element sides in local order. Each side's two vertices are listed in order
/// of increasing coordinate along the side.
enum class Side : int { Left = 0, Right = 1, Bottom = 2, Top = 3 };

/// Local vertex ids (0:(x0,y0) 1:(x1,y0) 2:(x0,y1) 3:(x1,y1)) on each side.
constexpr std::array<std::array<int, 2>, 4> kSideNodes = {{{0, 2}, {1, 3}, {0, 1}, {2, 3}}};

struct EdgeTags {
  BoundaryTag left = BoundaryTag::Inflow;
  BoundaryTag right = BoundaryTag::Inflow;
  BoundaryTag bottom = BoundaryTag::Inflow;
  BoundaryTag top = BoundaryTag::Inflow;

  BoundaryTag on(Side s) const;
};

struct Element {
  Box box;
  int material = 0;

  Point centroid() const { return {0.5 * (box.x0 + box.x1), 0.5 * (box.y0 + box.y1)}; }
  std::array<Point, 4> vertices() const {
    return {{{box.x0, box.y0}, {box.x1, box.y0}, {box.x0, box.y1}, {box.x1, box.y1}}};
  }
};

/// Interior face shared by elem1 and elem2; the normal points from elem1 to elem2.
/// elem1 sees the face on its Right/Top side, elem2 on its Left/Bottom side.
struct InteriorFace {
  int elem1 = -1;
  int elem2 = -1;
  Point normal;
  double length = 0.0;
  Point a, b;
  Side side1 = Side::Right;
  Side side2 = Side::Left;

  Point at(double t) const { return a + t * (b - a); }
};

struct BoundaryFace {
  int elem = -1;
  Point normal;  // outward
  double length = 0.0;
  Point a, b;
  Side side = Side::Left;
  BoundaryTag tag = BoundaryTag::Inflow;

  Point at(double t) const { return a + t * (b - a); }
};

/// Face reference from an element's point of view.
struct FaceRef {
  bool boundary = false;
  int index = -1;
};

class Mesh {
 public:
  Mesh() = default;

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  const Box& bbox() const { return bbox_; }
  int num_elements() const { return static_cast<int>(elements_.size()); }
  const std::vector<Element>& elements() const { return elements_; }
  const Element& element(int e) const { return elements_[e]; }
  const std::vector<InteriorFace>& interior_faces() const { return interior_faces_; }
  const std::vector<BoundaryFace>& boundary_faces() const { return boundary_faces_; }
  const RegionMap& regions() const { return regions_; }
  const EdgeTags& edge_tags() const { return tags_; }

  int index(int i, int j) const { return j * nx_ + i; }
  FaceRef face(int e, Side s) const { return element_faces_[e][static_cast<int>(s)]; }

  double hx() const { return bbox_.width() / nx_; }
  double hy() const { return bbox_.height() / ny_; }
  /// Characteristic mesh size (largest element extent).
  double h() const { return std::max(hx(), hy()); }

  /// Element containing p, with points on shared edges assigned to the upper/right element.
  int locate(Point p) const;

  friend Mesh build_cartesian(int nx, int ny, const Box& bbox, const RegionMap& regions,
                              const EdgeTags& tags);

 private:
  int nx_ = 0, ny_ = 0;
  Box bbox_;
  RegionMap regions_;
  EdgeTags tags_;
  std::vector<Element> elements_;
  std::vector<InteriorFace> interior_faces_;
  std::vector<BoundaryFace> boundary_faces_;
  std::vector<std::array<FaceRef, 4>> element_faces_;
};

Mesh build_cartesian(int nx, int ny, const Box& bbox, const RegionMap& regions = {},
                     const EdgeTags& tags = {});

/// Doubles the element count per axis; materials are re-evaluated by centroid.
Mesh uniform_refine(const Mesh& m);

}  // namespace smm
