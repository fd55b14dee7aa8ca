#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "binn/errors.hpp"
#include "binn/geometry.hpp"

namespace binn {

// Quadratic geometric shape functions on [-1,1], nodes at xi = -1, 0, 1.
inline std::array<double, 3> shape_geom(double xi) {
    return {0.5 * xi * (xi - 1.0), 1.0 - xi * xi, 0.5 * xi * (xi + 1.0)};
}

inline std::array<double, 3> shape_geom_deriv(double xi) {
    return {xi - 0.5, -2.0 * xi, xi + 0.5};
}

// Discontinuous quadratic shape functions with interpolation nodes at
// xi = alpha1, 0, alpha3 strictly inside the element. Kronecker at the nodes,
// partition of unity everywhere.
std::array<double, 3> shape_phys(double xi, double alpha1, double alpha3);
std::array<double, 3> shape_phys_deriv(double xi, double alpha1, double alpha3);

struct GeometrySegment {
    enum class Kind { LineSegment, CircularArc };

    Kind kind = Kind::LineSegment;
    std::string id;
    int n_elements = 1;

    // LineSegment
    Vec2 from, to;

    // CircularArc: angles in radians; the arc runs from angle_start to
    // angle_end (decreasing range = clockwise traversal).
    Vec2 center;
    double radius = 0.0;
    double angle_start = 0.0;
    double angle_end = 0.0;

    static GeometrySegment line(std::string id, Vec2 from, Vec2 to, int n_elements);
    static GeometrySegment arc(std::string id, Vec2 center, double radius,
                               double angle_start, double angle_end, int n_elements);

    Vec2 start_point() const;
    Vec2 end_point() const;
};

struct BoundaryElement {
    std::array<Vec2, 3> geom_nodes; // positions at xi = -1, 0, 1
    int loop = 0;
    int segment = 0;    // index into the segment list this element came from
    double length = 0.0; // arc length, filled by build_mesh
};

struct ElementFrame {
    Vec2 position;
    Vec2 tangent;  // d(position)/dxi
    Vec2 normal;   // unit outward normal (tangent rotated -90 deg, normalized)
    double jacobian = 0.0;
};

// Evaluate position/tangent/normal/Jacobian of an element at local xi.
ElementFrame geometry_at(const BoundaryElement& element, double xi);

// Arc length of the quadratic element (Gauss-8 on the Jacobian).
double element_arc_length(const BoundaryElement& element);

struct CollocationNode {
    int element = 0;
    int local = 0;   // 0, 1, 2  <->  xi = alpha1, 0, alpha3
    double xi = 0.0;
    Vec2 position;
    Vec2 normal;
    double jacobian = 0.0;
    int global = 0;
};

struct Loop {
    std::vector<int> elements; // cyclic order
    double signed_area = 0.0;  // positive = outer, negative = hole
};

struct BoundaryMesh {
    std::vector<BoundaryElement> elements;
    std::vector<CollocationNode> nodes; // element-major, local order; global == index
    std::vector<Loop> loops;
    std::map<std::string, std::vector<int>> segment_elements; // segment id -> element indices
    double alpha1 = -0.8;
    double alpha3 = 0.8;

    int element_count() const { return static_cast<int>(elements.size()); }
    int node_count() const { return static_cast<int>(nodes.size()); }

    // Node indices of an element, in local order.
    std::array<int, 3> element_nodes(int e) const { return {3 * e, 3 * e + 1, 3 * e + 2}; }

    Vec2 bbox_min() const;
    Vec2 bbox_max() const;
    double diameter() const;
};

// Subdivide each segment into quadratic elements and lay out the
// discontinuous collocation nodes. Consecutive segments must chain into
// closed loops (endpoints matched within 1e-12 of the loop diameter). The
// largest-area loop must be CCW (outer); all others CW (holes).
BoundaryMesh build_mesh(const std::vector<GeometrySegment>& segments,
                        double alpha1 = -0.8, double alpha3 = 0.8);

// Index of the collocation node on segment `segment_id` closest to `p`.
int nearest_node_on_segment(const BoundaryMesh& mesh, const std::string& segment_id, Vec2 p);

// Point-in-domain test against the discretized boundary (elements sampled as
// polylines). Points on the boundary are unreliable; callers should also
// enforce a clearance.
bool point_inside(const BoundaryMesh& mesh, Vec2 p);

// Distance from p to the discretized boundary (sampled polyline).
double distance_to_boundary(const BoundaryMesh& mesh, Vec2 p);

} // namespace binn
