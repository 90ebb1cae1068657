#include "smm/mesh.hpp"

#include <cmath>

namespace smm {

int RegionMap::lookup(Point p) const {
  for (const auto& r : regions)
    if (r.box.contains(p)) return r.material;
  return default_material;
}

BoundaryTag EdgeTags::on(Side s) const {
  switch (s) {
    case Side::Left: return left;
    case Side::Right: return right;
    case Side::Bottom: return bottom;
    case Side::Top: return top;
  }
  return left;
}

int Mesh::locate(Point p) const {
  int i = static_cast<int>(std::floor((p.x - bbox_.x0) / hx()));
  int j = static_cast<int>(std::floor((p.y - bbox_.y0) / hy()));
  i = std::clamp(i, 0, nx_ - 1);
  j = std::clamp(j, 0, ny_ - 1);
  return index(i, j);
}

Mesh build_cartesian(int nx, int ny, const Box& bbox, const RegionMap& regions,
                     const EdgeTags& tags) {
  if (nx < 1 || ny < 1)
    throw MeshError("build_cartesian: element counts must be positive (got " +
                    std::to_string(nx) + "x" + std::to_string(ny) + ")");
  if (!(bbox.x1 > bbox.x0) || !(bbox.y1 > bbox.y0))
    throw MeshError("build_cartesian: bounding box is degenerate or inverted");
  for (const auto& r : regions.regions)
    if (r.box.x0 < bbox.x0 || r.box.x1 > bbox.x1 || r.box.y0 < bbox.y0 || r.box.y1 > bbox.y1)
      throw MeshError("build_cartesian: region box lies outside the domain");

  Mesh m;
  m.nx_ = nx;
  m.ny_ = ny;
  m.bbox_ = bbox;
  m.regions_ = regions;
  m.tags_ = tags;

  const double hx = bbox.width() / nx;
  const double hy = bbox.height() / ny;
  auto xc = [&](int i) { return i == nx ? bbox.x1 : bbox.x0 + i * hx; };
  auto yc = [&](int j) { return j == ny ? bbox.y1 : bbox.y0 + j * hy; };

  m.elements_.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      Element el;
      el.box = {xc(i), yc(j), xc(i + 1), yc(j + 1)};
      el.material = regions.lookup(el.centroid());
      m.elements_.push_back(el);
    }
  m.element_faces_.assign(m.elements_.size(), {});

  auto add_interior = [&](int e1, int e2, Point n, Point a, Point b, Side s1, Side s2) {
    InteriorFace f;
    f.elem1 = e1;
    f.elem2 = e2;
    f.normal = n;
    f.a = a;
    f.b = b;
    f.length = std::hypot(b.x - a.x, b.y - a.y);
    f.side1 = s1;
    f.side2 = s2;
    const int id = static_cast<int>(m.interior_faces_.size());
    m.interior_faces_.push_back(f);
    m.element_faces_[e1][static_cast<int>(s1)] = {false, id};
    m.element_faces_[e2][static_cast<int>(s2)] = {false, id};
  };
  auto add_boundary = [&](int e, Side s, Point n, Point a, Point b) {
    BoundaryFace f;
    f.elem = e;
    f.side = s;
    f.normal = n;
    f.a = a;
    f.b = b;
    f.length = std::hypot(b.x - a.x, b.y - a.y);
    f.tag = tags.on(s);
    const int id = static_cast<int>(m.boundary_faces_.size());
    m.boundary_faces_.push_back(f);
    m.element_faces_[e][static_cast<int>(s)] = {true, id};
  };

  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int e = m.index(i, j);
      const Box& b = m.elements_[e].box;
      if (i + 1 < nx)
        add_interior(e, m.index(i + 1, j), {1.0, 0.0}, {b.x1, b.y0}, {b.x1, b.y1}, Side::Right,
                     Side::Left);
      if (j + 1 < ny)
        add_interior(e, m.index(i, j + 1), {0.0, 1.0}, {b.x0, b.y1}, {b.x1, b.y1}, Side::Top,
                     Side::Bottom);
      if (i == 0) add_boundary(e, Side::Left, {-1.0, 0.0}, {b.x0, b.y0}, {b.x0, b.y1});
      if (i == nx - 1) add_boundary(e, Side::Right, {1.0, 0.0}, {b.x1, b.y0}, {b.x1, b.y1});
      if (j == 0) add_boundary(e, Side::Bottom, {0.0, -1.0}, {b.x0, b.y0}, {b.x1, b.y0});
      if (j == ny - 1) add_boundary(e, Side::Top, {0.0, 1.0}, {b.x0, b.y1}, {b.x1, b.y1});
    }
  return m;
}

Mesh uniform_refine(const Mesh& m) {
  return build_cartesian(2 * m.nx(), 2 * m.ny(), m.bbox(), m.regions(), m.edge_tags());
}

}  // namespace smm
