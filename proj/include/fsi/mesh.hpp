#pragma once

#include <array>
#include <iosfwd>
#include <vector>

namespace fsi {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

enum class MeshPattern { RightDiagonal, UnionJack };

/// Side of the unit square a boundary edge lies on. `Other` is used for
/// meshes of domains that are not the unit square (test fixtures).
enum class BoundarySide { Left, Right, Bottom, Top, Other };

struct MeshEdge {
    int v0 = -1;            // v0 < v1
    int v1 = -1;
    int tri[2] = {-1, -1};  // adjacent triangles; tri[1] == -1 on the boundary
    bool on_boundary() const { return tri[1] < 0; }
};

/// Conforming triangulation. Triangles are counterclockwise; the edge
/// opposite local vertex k of a triangle is triangle_edges[t][k].
struct Mesh {
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<MeshEdge> edges;
    std::vector<std::array<int, 3>> triangle_edges;
    std::vector<int> boundary_edges;            // edge ids with one adjacent triangle
    std::vector<BoundarySide> boundary_tags;    // parallel to boundary_edges
    double cell_size = 0.0;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int triangle_count() const { return static_cast<int>(triangles.size()); }
    int edge_count() const { return static_cast<int>(edges.size()); }

    double signed_area(int t) const;
    Vec2 edge_midpoint(int e) const;
};

/// Structured triangulation of the unit square with n_per_side cells per side.
/// UnionJack splits every cell into 4 triangles through its centroid,
/// RightDiagonal into 2 along the (0,0)-(1,1) diagonal direction.
Mesh build_uniform(int n_per_side, MeshPattern pattern);

/// Mesh from raw geometry; builds edge connectivity and boundary tags and
/// validates orientation and the edge-manifold property.
Mesh build_from(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
                double cell_size = 0.0);

/// Indices of vertices on the domain boundary, sorted ascending.
std::vector<int> boundary_vertices(const Mesh& mesh);

/// VTK legacy ASCII export (unstructured grid, cell type 5).
void write_vtk_mesh(const Mesh& mesh, std::ostream& out);

}  // namespace fsi
