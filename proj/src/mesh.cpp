#include "binn/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace binn {

std::array<double, 3> shape_phys(double xi, double alpha1, double alpha3) {
    if (!(alpha1 > -1.0 && alpha1 < 0.0) || !(alpha3 > 0.0 && alpha3 < 1.0))
        throw ConfigError("shape_phys: require -1 < alpha1 < 0 < alpha3 < 1");
    return {xi * (xi - alpha3) / (alpha1 * (alpha1 - alpha3)),
            (xi - alpha1) * (xi - alpha3) / (alpha1 * alpha3),
            xi * (xi - alpha1) / (alpha3 * (alpha3 - alpha1))};
}

std::array<double, 3> shape_phys_deriv(double xi, double alpha1, double alpha3) {
    if (!(alpha1 > -1.0 && alpha1 < 0.0) || !(alpha3 > 0.0 && alpha3 < 1.0))
        throw ConfigError("shape_phys_deriv: require -1 < alpha1 < 0 < alpha3 < 1");
    return {(2.0 * xi - alpha3) / (alpha1 * (alpha1 - alpha3)),
            (2.0 * xi - alpha1 - alpha3) / (alpha1 * alpha3),
            (2.0 * xi - alpha1) / (alpha3 * (alpha3 - alpha1))};
}

GeometrySegment GeometrySegment::line(std::string id, Vec2 from, Vec2 to, int n_elements) {
    GeometrySegment s;
    s.kind = Kind::LineSegment;
    s.id = std::move(id);
    s.from = from;
    s.to = to;
    s.n_elements = n_elements;
    return s;
}

GeometrySegment GeometrySegment::arc(std::string id, Vec2 center, double radius,
                                     double angle_start, double angle_end, int n_elements) {
    GeometrySegment s;
    s.kind = Kind::CircularArc;
    s.id = std::move(id);
    s.center = center;
    s.radius = radius;
    s.angle_start = angle_start;
    s.angle_end = angle_end;
    s.n_elements = n_elements;
    return s;
}

Vec2 GeometrySegment::start_point() const {
    if (kind == Kind::LineSegment) return from;
    return center + radius * Vec2{std::cos(angle_start), std::sin(angle_start)};
}

Vec2 GeometrySegment::end_point() const {
    if (kind == Kind::LineSegment) return to;
    return center + radius * Vec2{std::cos(angle_end), std::sin(angle_end)};
}

ElementFrame geometry_at(const BoundaryElement& element, double xi) {
    auto n = shape_geom(xi);
    auto dn = shape_geom_deriv(xi);
    ElementFrame f;
    for (int k = 0; k < 3; ++k) {
        f.position += n[k] * element.geom_nodes[k];
        f.tangent += dn[k] * element.geom_nodes[k];
    }
    f.jacobian = f.tangent.norm();
    double chord = (element.geom_nodes[2] - element.geom_nodes[0]).norm();
    if (f.jacobian <= 1e-14 * std::max(chord, 1.0))
        throw GeometryError("geometry_at: degenerate element (vanishing Jacobian)");
    f.normal = f.tangent.rotated_minus90() / f.jacobian;
    return f;
}

double element_arc_length(const BoundaryElement& e) {
    // Gauss-8 on |x'(xi)|; plenty for a quadratic parametrization.
    static const double xs[8] = {-0.9602898564975363, -0.7966664774136267,
                                 -0.5255324099163290, -0.1834346424956498,
                                 0.1834346424956498,  0.5255324099163290,
                                 0.7966664774136267,  0.9602898564975363};
    static const double ws[8] = {0.1012285362903763, 0.2223810344533745,
                                 0.3137066458778873, 0.3626837833783620,
                                 0.3626837833783620, 0.3137066458778873,
                                 0.2223810344533745, 0.1012285362903763};
    double len = 0.0;
    for (int g = 0; g < 8; ++g) len += ws[g] * geometry_at(e, xs[g]).jacobian;
    return len;
}

namespace {

// Position at the fractional parameter t in [0,1] along a segment.
Vec2 segment_point(const GeometrySegment& s, double t) {
    if (s.kind == GeometrySegment::Kind::LineSegment)
        return s.from + t * (s.to - s.from);
    double a = s.angle_start + t * (s.angle_end - s.angle_start);
    return s.center + s.radius * Vec2{std::cos(a), std::sin(a)};
}

double loop_signed_area(const std::vector<BoundaryElement>& elements, const std::vector<int>& ids) {
    // (1/2) closed-integral of (x dy - y dx); integrand is quartic in xi, Gauss-3 is exact.
    static const double xs[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
    static const double ws[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    double area = 0.0;
    for (int id : ids) {
        for (int g = 0; g < 3; ++g) {
            ElementFrame f = geometry_at(elements[id], xs[g]);
            area += 0.5 * ws[g] * f.position.cross(f.tangent);
        }
    }
    return area;
}

} // namespace

BoundaryMesh build_mesh(const std::vector<GeometrySegment>& segments, double alpha1, double alpha3) {
    if (!(alpha1 > -1.0 && alpha1 < 0.0) || !(alpha3 > 0.0 && alpha3 < 1.0))
        throw ConfigError("build_mesh: require -1 < alpha1 < 0 < alpha3 < 1");
    if (segments.empty()) throw GeometryError("build_mesh: no segments");

    BoundaryMesh mesh;
    mesh.alpha1 = alpha1;
    mesh.alpha3 = alpha3;

    // Scale for endpoint-coincidence checks; arcs contribute their circle's
    // extremes so a lone full circle still has a finite diameter.
    Vec2 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
    Vec2 hi{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
    for (const auto& s : segments) {
        std::vector<Vec2> probes{s.start_point(), s.end_point()};
        if (s.kind == GeometrySegment::Kind::CircularArc) {
            probes.push_back(s.center + Vec2{s.radius, 0.0});
            probes.push_back(s.center - Vec2{s.radius, 0.0});
            probes.push_back(s.center + Vec2{0.0, s.radius});
            probes.push_back(s.center - Vec2{0.0, s.radius});
        }
        for (Vec2 p : probes) {
            lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y);
            hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y);
        }
    }
    double diam = std::max((hi - lo).norm(), 1e-300);
    double tol = 1e-12 * diam;

    // Chain consecutive segments into loops.
    std::vector<std::vector<int>> loop_segments;
    {
        std::vector<int> chain;
        Vec2 chain_start, cursor;
        for (int i = 0; i < static_cast<int>(segments.size()); ++i) {
            const auto& s = segments[i];
            if (s.n_elements < 1)
                throw GeometryError("build_mesh: segment '" + s.id + "' needs n_elements >= 1");
            if (s.kind == GeometrySegment::Kind::CircularArc && s.angle_start == s.angle_end)
                throw GeometryError("build_mesh: arc segment '" + s.id + "' has zero angle range");
            if (chain.empty()) {
                chain_start = s.start_point();
            } else if ((s.start_point() - cursor).norm() > tol) {
                throw GeometryError("build_mesh: segment '" + s.id +
                                    "' does not continue the current loop (gap in boundary)");
            }
            chain.push_back(i);
            cursor = s.end_point();
            if ((cursor - chain_start).norm() <= tol) {
                loop_segments.push_back(chain);
                chain.clear();
            }
        }
        if (!chain.empty())
            throw GeometryError("build_mesh: boundary ends with an open loop starting at segment '" +
                                segments[chain.front()].id + "'");
    }

    for (int li = 0; li < static_cast<int>(loop_segments.size()); ++li) {
        Loop loop;
        for (int si : loop_segments[li]) {
            const auto& s = segments[si];
            for (int j = 0; j < s.n_elements; ++j) {
                double t0 = static_cast<double>(j) / s.n_elements;
                double t1 = (j + 0.5) / s.n_elements;
                double t2 = (j + 1.0) / s.n_elements;
                BoundaryElement e;
                e.geom_nodes = {segment_point(s, t0), segment_point(s, t1), segment_point(s, t2)};
                e.loop = li;
                e.segment = si;
                if ((e.geom_nodes[0] - e.geom_nodes[1]).norm() <= tol ||
                    (e.geom_nodes[1] - e.geom_nodes[2]).norm() <= tol ||
                    (e.geom_nodes[0] - e.geom_nodes[2]).norm() <= tol)
                    throw GeometryError("build_mesh: zero-length element on segment '" + s.id + "'");
                e.length = element_arc_length(e);
                int eid = static_cast<int>(mesh.elements.size());
                mesh.elements.push_back(e);
                loop.elements.push_back(eid);
                mesh.segment_elements[s.id].push_back(eid);
            }
        }
        loop.signed_area = loop_signed_area(mesh.elements, loop.elements);
        mesh.loops.push_back(loop);
    }

    // Orientation convention: the largest loop is the outer boundary and must
    // run CCW; every other loop is a hole and must run CW.
    int outer = 0;
    for (int li = 1; li < static_cast<int>(mesh.loops.size()); ++li)
        if (std::abs(mesh.loops[li].signed_area) > std::abs(mesh.loops[outer].signed_area))
            outer = li;
    for (int li = 0; li < static_cast<int>(mesh.loops.size()); ++li) {
        double a = mesh.loops[li].signed_area;
        if (li == outer && a <= 0.0)
            throw GeometryError("build_mesh: outer loop must be counter-clockwise (signed area > 0)");
        if (li != outer && a >= 0.0)
            throw GeometryError("build_mesh: hole loops must be clockwise (signed area < 0)");
    }

    const double xis[3] = {alpha1, 0.0, alpha3};
    for (int e = 0; e < mesh.element_count(); ++e) {
        for (int k = 0; k < 3; ++k) {
            ElementFrame f = geometry_at(mesh.elements[e], xis[k]);
            CollocationNode node;
            node.element = e;
            node.local = k;
            node.xi = xis[k];
            node.position = f.position;
            node.normal = f.normal;
            node.jacobian = f.jacobian;
            node.global = static_cast<int>(mesh.nodes.size());
            mesh.nodes.push_back(node);
        }
    }
    return mesh;
}

Vec2 BoundaryMesh::bbox_min() const {
    Vec2 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
    for (const auto& e : elements)
        for (const auto& p : e.geom_nodes) {
            lo.x = std::min(lo.x, p.x);
            lo.y = std::min(lo.y, p.y);
        }
    return lo;
}

Vec2 BoundaryMesh::bbox_max() const {
    Vec2 hi{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
    for (const auto& e : elements)
        for (const auto& p : e.geom_nodes) {
            hi.x = std::max(hi.x, p.x);
            hi.y = std::max(hi.y, p.y);
        }
    return hi;
}

double BoundaryMesh::diameter() const { return (bbox_max() - bbox_min()).norm(); }

int nearest_node_on_segment(const BoundaryMesh& mesh, const std::string& segment_id, Vec2 p) {
    auto it = mesh.segment_elements.find(segment_id);
    if (it == mesh.segment_elements.end())
        throw SpecError("nearest_node_on_segment: unknown segment '" + segment_id + "'");
    int best = -1;
    double best_d = std::numeric_limits<double>::max();
    for (int e : it->second) {
        for (int n : mesh.element_nodes(e)) {
            double d = (mesh.nodes[n].position - p).norm();
            if (d < best_d) {
                best_d = d;
                best = n;
            }
        }
    }
    return best;
}

namespace {
constexpr int kBoundarySamples = 8; // polyline pieces per element for point queries
}

bool point_inside(const BoundaryMesh& mesh, Vec2 p) {
    // Even-odd ray crossing, ray towards +x, over all loops.
    int crossings = 0;
    for (const auto& e : mesh.elements) {
        Vec2 prev = geometry_at(e, -1.0).position;
        for (int s = 1; s <= kBoundarySamples; ++s) {
            Vec2 cur = geometry_at(e, -1.0 + 2.0 * s / kBoundarySamples).position;
            if ((prev.y > p.y) != (cur.y > p.y)) {
                double t = (p.y - prev.y) / (cur.y - prev.y);
                if (prev.x + t * (cur.x - prev.x) > p.x) ++crossings;
            }
            prev = cur;
        }
    }
    return (crossings % 2) == 1;
}

double distance_to_boundary(const BoundaryMesh& mesh, Vec2 p) {
    double best = std::numeric_limits<double>::max();
    for (const auto& e : mesh.elements) {
        Vec2 prev = geometry_at(e, -1.0).position;
        for (int s = 1; s <= kBoundarySamples; ++s) {
            Vec2 cur = geometry_at(e, -1.0 + 2.0 * s / kBoundarySamples).position;
            Vec2 d = cur - prev;
            double len2 = d.squared_norm();
            double t = len2 > 0.0 ? std::clamp((p - prev).dot(d) / len2, 0.0, 1.0) : 0.0;
            best = std::min(best, (p - (prev + t * d)).norm());
            prev = cur;
        }
    }
    return best;
}

} // namespace binn
