#include "fsi/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

namespace fsi {

double Mesh::signed_area(int t) const {
    const auto& tri = triangles[t];
    const Vec2 a = vertices[tri[0]];
    const Vec2 b = vertices[tri[1]];
    const Vec2 c = vertices[tri[2]];
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

Vec2 Mesh::edge_midpoint(int e) const {
    const MeshEdge& ed = edges[e];
    return 0.5 * (vertices[ed.v0] + vertices[ed.v1]);
}

namespace {

BoundarySide classify_boundary_edge(const Mesh& mesh, const MeshEdge& e) {
    const Vec2 a = mesh.vertices[e.v0];
    const Vec2 b = mesh.vertices[e.v1];
    const double tol = 1e-12;
    if (std::abs(a.x) < tol && std::abs(b.x) < tol) return BoundarySide::Left;
    if (std::abs(a.x - 1.0) < tol && std::abs(b.x - 1.0) < tol) return BoundarySide::Right;
    if (std::abs(a.y) < tol && std::abs(b.y) < tol) return BoundarySide::Bottom;
    if (std::abs(a.y - 1.0) < tol && std::abs(b.y - 1.0) < tol) return BoundarySide::Top;
    return BoundarySide::Other;
}

void build_connectivity(Mesh& mesh) {
    std::map<std::pair<int, int>, int> edge_ids;
    mesh.triangle_edges.assign(mesh.triangles.size(), {-1, -1, -1});

    for (int t = 0; t < mesh.triangle_count(); ++t) {
        if (mesh.signed_area(t) <= 0.0)
            throw std::logic_error("mesh: triangle " + std::to_string(t) +
                                   " is not counterclockwise");
        const auto& tri = mesh.triangles[t];
        for (int k = 0; k < 3; ++k) {
            // edge opposite local vertex k
            int a = tri[(k + 1) % 3];
            int b = tri[(k + 2) % 3];
            if (a > b) std::swap(a, b);
            auto [it, inserted] = edge_ids.try_emplace({a, b}, mesh.edge_count());
            if (inserted) {
                MeshEdge e;
                e.v0 = a;
                e.v1 = b;
                e.tri[0] = t;
                mesh.edges.push_back(e);
            } else {
                MeshEdge& e = mesh.edges[it->second];
                if (e.tri[1] >= 0)
                    throw std::logic_error("mesh: edge shared by more than two triangles");
                e.tri[1] = t;
            }
            mesh.triangle_edges[t][k] = it->second;
        }
    }

    for (int e = 0; e < mesh.edge_count(); ++e) {
        if (!mesh.edges[e].on_boundary()) continue;
        mesh.boundary_edges.push_back(e);
        mesh.boundary_tags.push_back(classify_boundary_edge(mesh, mesh.edges[e]));
    }
}

}  // namespace

Mesh build_uniform(int n_per_side, MeshPattern pattern) {
    if (n_per_side < 1) throw std::invalid_argument("build_uniform: n_per_side must be >= 1");
    const int n = n_per_side;

    Mesh mesh;
    mesh.cell_size = 1.0 / n;
    mesh.vertices.reserve((n + 1) * (n + 1) + (pattern == MeshPattern::UnionJack ? n * n : 0));

    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            mesh.vertices.push_back({double(i) / n, double(j) / n});

    auto vid = [n](int i, int j) { return j * (n + 1) + i; };

    if (pattern == MeshPattern::RightDiagonal) {
        mesh.triangles.reserve(2 * n * n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const int v00 = vid(i, j), v10 = vid(i + 1, j);
                const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
                mesh.triangles.push_back({v00, v10, v11});
                mesh.triangles.push_back({v00, v11, v01});
            }
    } else {
        mesh.triangles.reserve(4 * n * n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const int v00 = vid(i, j), v10 = vid(i + 1, j);
                const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
                const int c = mesh.vertex_count();
                mesh.vertices.push_back({(i + 0.5) / n, (j + 0.5) / n});
                mesh.triangles.push_back({v00, v10, c});
                mesh.triangles.push_back({v10, v11, c});
                mesh.triangles.push_back({v11, v01, c});
                mesh.triangles.push_back({v01, v00, c});
            }
    }

    build_connectivity(mesh);
    return mesh;
}

Mesh build_from(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
                double cell_size) {
    Mesh mesh;
    mesh.vertices = std::move(vertices);
    mesh.triangles = std::move(triangles);
    mesh.cell_size = cell_size;
    for (const auto& tri : mesh.triangles)
        for (int v : tri)
            if (v < 0 || v >= mesh.vertex_count())
                throw std::invalid_argument("build_from: vertex index out of range");
    build_connectivity(mesh);
    return mesh;
}

std::vector<int> boundary_vertices(const Mesh& mesh) {
    std::vector<char> on_boundary(mesh.vertex_count(), 0);
    for (int e : mesh.boundary_edges) {
        on_boundary[mesh.edges[e].v0] = 1;
        on_boundary[mesh.edges[e].v1] = 1;
    }
    std::vector<int> out;
    for (int v = 0; v < mesh.vertex_count(); ++v)
        if (on_boundary[v]) out.push_back(v);
    return out;
}

void write_vtk_mesh(const Mesh& mesh, std::ostream& out) {
    out << "# vtk DataFile Version 3.0\n";
    out << "mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.vertex_count() << " double\n";
    for (const Vec2& v : mesh.vertices) out << v.x << " " << v.y << " 0\n";
    out << "CELLS " << mesh.triangle_count() << " " << 4 * mesh.triangle_count() << "\n";
    for (const auto& tri : mesh.triangles)
        out << "3 " << tri[0] << " " << tri[1] << " " << tri[2] << "\n";
    out << "CELL_TYPES " << mesh.triangle_count() << "\n";
    for (int t = 0; t < mesh.triangle_count(); ++t) out << "5\n";
}

}  // namespace fsi
