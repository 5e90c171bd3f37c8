#include "fsi/vtk.hpp"

#include <ostream>
#include <stdexcept>

namespace fsi {

namespace {

// Value of scalar component c at a vertex or edge-midpoint output point.
double point_value(const FEFunction& f, int c, int point, int vertex_count, const Mesh& mesh) {
    const FESpace& s = *f.space;
    const int offset = c * s.scalar_dofs;
    if (point < vertex_count) return f.coeffs[offset + point];
    const int edge = point - vertex_count;
    if (s.degree == 2) return f.coeffs[offset + vertex_count + edge];
    // linear interpolation is exact for P1
    const MeshEdge& e = mesh.edges[edge];
    return 0.5 * (f.coeffs[offset + e.v0] + f.coeffs[offset + e.v1]);
}

}  // namespace

void write_vtk_snapshot(std::ostream& out, const Mesh& mesh,
                        const std::vector<std::pair<std::string, const FEFunction*>>& fields,
                        bool refined) {
    const int nv = mesh.vertex_count();
    const int npoints = refined ? nv + mesh.edge_count() : nv;

    out << "# vtk DataFile Version 3.0\n";
    out << "fields\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << npoints << " double\n";
    for (const Vec2& v : mesh.vertices) out << v.x << " " << v.y << " 0\n";
    if (refined)
        for (int e = 0; e < mesh.edge_count(); ++e) {
            const Vec2 p = mesh.edge_midpoint(e);
            out << p.x << " " << p.y << " 0\n";
        }

    if (!refined) {
        out << "CELLS " << mesh.triangle_count() << " " << 4 * mesh.triangle_count() << "\n";
        for (const auto& tri : mesh.triangles)
            out << "3 " << tri[0] << " " << tri[1] << " " << tri[2] << "\n";
        out << "CELL_TYPES " << mesh.triangle_count() << "\n";
        for (int t = 0; t < mesh.triangle_count(); ++t) out << "5\n";
    } else {
        const int ncells = 4 * mesh.triangle_count();
        out << "CELLS " << ncells << " " << 4 * ncells << "\n";
        for (int t = 0; t < mesh.triangle_count(); ++t) {
            const auto& tri = mesh.triangles[t];
            // midpoint of the edge opposite local vertex k
            const int m0 = nv + mesh.triangle_edges[t][0];
            const int m1 = nv + mesh.triangle_edges[t][1];
            const int m2 = nv + mesh.triangle_edges[t][2];
            out << "3 " << tri[0] << " " << m2 << " " << m1 << "\n";
            out << "3 " << tri[1] << " " << m0 << " " << m2 << "\n";
            out << "3 " << tri[2] << " " << m1 << " " << m0 << "\n";
            out << "3 " << m0 << " " << m1 << " " << m2 << "\n";
        }
        out << "CELL_TYPES " << ncells << "\n";
        for (int c = 0; c < ncells; ++c) out << "5\n";
    }

    out << "POINT_DATA " << npoints << "\n";
    for (const auto& [name, f] : fields) {
        switch (f->space->kind) {
            case ValueKind::Scalar:
                out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
                for (int p = 0; p < npoints; ++p) out << point_value(*f, 0, p, nv, mesh) << "\n";
                break;
            case ValueKind::Vector2:
                out << "VECTORS " << name << " double\n";
                for (int p = 0; p < npoints; ++p)
                    out << point_value(*f, 0, p, nv, mesh) << " "
                        << point_value(*f, 1, p, nv, mesh) << " 0\n";
                break;
            case ValueKind::SymTensor2: {
                const char* suffix[3] = {"_xx", "_xy", "_yy"};
                for (int c = 0; c < 3; ++c) {
                    out << "SCALARS " << name << suffix[c] << " double 1\nLOOKUP_TABLE default\n";
                    for (int p = 0; p < npoints; ++p)
                        out << point_value(*f, c, p, nv, mesh) << "\n";
                }
                break;
            }
        }
    }
}

}  // namespace fsi
