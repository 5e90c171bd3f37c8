#include "fsi/fem.hpp"

#include <cmath>
#include <stdexcept>

namespace fsi {

void eval_basis(int degree, double l0, double l1, double l2, double* out) {
    if (degree == 1) {
        out[0] = l0;
        out[1] = l1;
        out[2] = l2;
        return;
    }
    out[0] = l0 * (2 * l0 - 1);
    out[1] = l1 * (2 * l1 - 1);
    out[2] = l2 * (2 * l2 - 1);
    out[3] = 4 * l1 * l2;  // edge opposite vertex 0
    out[4] = 4 * l2 * l0;
    out[5] = 4 * l0 * l1;
}

namespace {

void basis_gradients(int degree, double l0, double l1, double l2,
                     const std::array<Vec2, 3>& gl, Vec2* out) {
    if (degree == 1) {
        out[0] = gl[0];
        out[1] = gl[1];
        out[2] = gl[2];
        return;
    }
    const double l[3] = {l0, l1, l2};
    for (int k = 0; k < 3; ++k) out[k] = (4 * l[k] - 1) * gl[k];
    for (int k = 0; k < 3; ++k) {
        const int i = (k + 1) % 3, j = (k + 2) % 3;
        out[3 + k] = 4 * (l[j] * gl[i] + l[i] * gl[j]);
    }
}

}  // namespace

FESpace FESpace::create(const Mesh& mesh, int degree, ValueKind kind) {
    if (degree != 1 && degree != 2) throw std::invalid_argument("FESpace: degree must be 1 or 2");
    FESpace s;
    s.mesh = &mesh;
    s.degree = degree;
    s.kind = kind;
    s.scalar_dofs = mesh.vertex_count() + (degree == 2 ? mesh.edge_count() : 0);
    return s;
}

int FESpace::components() const {
    switch (kind) {
        case ValueKind::Scalar: return 1;
        case ValueKind::Vector2: return 2;
        case ValueKind::SymTensor2: return 3;
    }
    return 1;
}

int FESpace::global_scalar_dof(int tri, int local) const {
    if (local < 3) return mesh->triangles[tri][local];
    return mesh->vertex_count() + mesh->triangle_edges[tri][local - 3];
}

Vec2 FESpace::scalar_dof_point(int sdof) const {
    if (sdof < mesh->vertex_count()) return mesh->vertices[sdof];
    return mesh->edge_midpoint(sdof - mesh->vertex_count());
}

double FESpace::component_multiplicity(int c) const {
    return (kind == ValueKind::SymTensor2 && c == 1) ? 2.0 : 1.0;
}

std::vector<int> FESpace::boundary_scalar_dofs() const {
    std::vector<char> on(scalar_dofs, 0);
    for (std::size_t k = 0; k < mesh->boundary_edges.size(); ++k) {
        const MeshEdge& e = mesh->edges[mesh->boundary_edges[k]];
        on[e.v0] = 1;
        on[e.v1] = 1;
        if (degree == 2) on[mesh->vertex_count() + mesh->boundary_edges[k]] = 1;
    }
    std::vector<int> out;
    for (int d = 0; d < scalar_dofs; ++d)
        if (on[d]) out.push_back(d);
    return out;
}

ElementBasis tabulate(const FESpace& space, int tri, const std::vector<QuadraturePoint>& rule) {
    const Mesh& mesh = *space.mesh;
    const auto& t = mesh.triangles[tri];
    const Vec2 p0 = mesh.vertices[t[0]], p1 = mesh.vertices[t[1]], p2 = mesh.vertices[t[2]];
    const double area = mesh.signed_area(tri);

    std::array<Vec2, 3> gl;
    const double inv2a = 1.0 / (2.0 * area);
    gl[0] = {(p1.y - p2.y) * inv2a, (p2.x - p1.x) * inv2a};
    gl[1] = {(p2.y - p0.y) * inv2a, (p0.x - p2.x) * inv2a};
    gl[2] = {(p0.y - p1.y) * inv2a, (p1.x - p0.x) * inv2a};

    ElementBasis eb;
    eb.nq = static_cast<int>(rule.size());
    eb.nloc = space.local_scalar_count();
    for (int k = 0; k < eb.nloc; ++k) eb.dofs[k] = space.global_scalar_dof(tri, k);
    eb.values.resize(eb.nq * eb.nloc);
    eb.grads.resize(eb.nq * eb.nloc);
    eb.points.resize(eb.nq);
    eb.weights.resize(eb.nq);

    for (int q = 0; q < eb.nq; ++q) {
        const QuadraturePoint& qp = rule[q];
        eval_basis(space.degree, qp.l0, qp.l1, qp.l2, &eb.values[q * eb.nloc]);
        basis_gradients(space.degree, qp.l0, qp.l1, qp.l2, gl, &eb.grads[q * eb.nloc]);
        eb.points[q] = qp.l0 * p0 + qp.l1 * p1 + qp.l2 * p2;
        eb.weights[q] = qp.w * 2.0 * area;
    }
    return eb;
}

BasisCache::BasisCache(const FESpace& space, int quad_order) {
    const auto& rule = quadrature_rule(quad_order);
    tables_.reserve(space.mesh->triangle_count());
    for (int t = 0; t < space.mesh->triangle_count(); ++t)
        tables_.push_back(tabulate(space, t, rule));
}

double LocalField::value(const ElementBasis& eb, int q) const {
    double s = 0.0;
    for (int k = 0; k < eb.nloc; ++k) s += coeff[k] * eb.value(q, k);
    return s;
}

Vec2 LocalField::grad(const ElementBasis& eb, int q) const {
    Vec2 g{0.0, 0.0};
    for (int k = 0; k < eb.nloc; ++k) {
        const Vec2 gk = eb.grad(q, k);
        g.x += coeff[k] * gk.x;
        g.y += coeff[k] * gk.y;
    }
    return g;
}

LocalField gather(const FEFunction& f, const ElementBasis& eb, int component) {
    LocalField lf;
    const int offset = component * f.space->scalar_dofs;
    for (int k = 0; k < eb.nloc; ++k) lf.coeff[k] = f.coeffs[offset + eb.dofs[k]];
    return lf;
}

FEFunction interpolate(const FESpace& s, const std::function<double(Vec2)>& f) {
    if (s.kind != ValueKind::Scalar) throw std::invalid_argument("interpolate: scalar space expected");
    FEFunction out(s);
    for (int d = 0; d < s.scalar_dofs; ++d) out.coeffs[d] = f(s.scalar_dof_point(d));
    return out;
}

FEFunction interpolate_vector(const FESpace& s, const std::function<Vec2(Vec2)>& f) {
    if (s.kind != ValueKind::Vector2)
        throw std::invalid_argument("interpolate_vector: vector space expected");
    FEFunction out(s);
    for (int d = 0; d < s.scalar_dofs; ++d) {
        const Vec2 v = f(s.scalar_dof_point(d));
        out.coeffs[d] = v.x;
        out.coeffs[s.scalar_dofs + d] = v.y;
    }
    return out;
}

FEFunction interpolate_symtensor(const FESpace& s, const std::function<SymTensor2(Vec2)>& f) {
    if (s.kind != ValueKind::SymTensor2)
        throw std::invalid_argument("interpolate_symtensor: tensor space expected");
    FEFunction out(s);
    for (int d = 0; d < s.scalar_dofs; ++d) {
        const SymTensor2 b = f(s.scalar_dof_point(d));
        out.coeffs[d] = b.xx;
        out.coeffs[s.scalar_dofs + d] = b.xy;
        out.coeffs[2 * s.scalar_dofs + d] = b.yy;
    }
    return out;
}

namespace {

// Barycentric coordinates of p in triangle t; returns the minimum coordinate.
double barycentric(const Mesh& mesh, int t, Vec2 p, double l[3]) {
    const auto& tri = mesh.triangles[t];
    const Vec2 a = mesh.vertices[tri[0]], b = mesh.vertices[tri[1]], c = mesh.vertices[tri[2]];
    const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    l[1] = ((p.x - a.x) * (c.y - a.y) - (c.x - a.x) * (p.y - a.y)) / det;
    l[2] = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / det;
    l[0] = 1.0 - l[1] - l[2];
    return std::min({l[0], l[1], l[2]});
}

int locate(const Mesh& mesh, Vec2 p, double l[3]) {
    int best = -1;
    double best_min = -1e30;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        double lt[3];
        const double m = barycentric(mesh, t, p, lt);
        if (m > best_min) {
            best_min = m;
            best = t;
            l[0] = lt[0];
            l[1] = lt[1];
            l[2] = lt[2];
        }
        if (m >= 0.0) return t;
    }
    if (best_min > -1e-10) return best;
    throw std::domain_error("evaluate: point outside the mesh");
}

double eval_component(const FEFunction& f, int tri, const double l[3], int component) {
    double vals[6];
    eval_basis(f.space->degree, l[0], l[1], l[2], vals);
    const int nloc = f.space->local_scalar_count();
    const int offset = component * f.space->scalar_dofs;
    double s = 0.0;
    for (int k = 0; k < nloc; ++k)
        s += f.coeffs[offset + f.space->global_scalar_dof(tri, k)] * vals[k];
    return s;
}

}  // namespace

double evaluate(const FEFunction& f, Vec2 p) {
    double l[3];
    const int t = locate(*f.space->mesh, p, l);
    return eval_component(f, t, l, 0);
}

Vec2 evaluate_vector(const FEFunction& f, Vec2 p) {
    double l[3];
    const int t = locate(*f.space->mesh, p, l);
    return {eval_component(f, t, l, 0), eval_component(f, t, l, 1)};
}

SymTensor2 evaluate_symtensor(const FEFunction& f, Vec2 p) {
    double l[3];
    const int t = locate(*f.space->mesh, p, l);
    return {eval_component(f, t, l, 0), eval_component(f, t, l, 1), eval_component(f, t, l, 2)};
}

double integrate(const Mesh& mesh, const std::function<double(Vec2)>& f, int quad_order) {
    const auto& rule = quadrature_rule(quad_order);
    double total = 0.0;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangles[t];
        const Vec2 p0 = mesh.vertices[tri[0]], p1 = mesh.vertices[tri[1]],
                   p2 = mesh.vertices[tri[2]];
        const double two_a = 2.0 * mesh.signed_area(t);
        for (const QuadraturePoint& qp : rule)
            total += qp.w * two_a * f(qp.l0 * p0 + qp.l1 * p1 + qp.l2 * p2);
    }
    return total;
}

double l2_norm(const FEFunction& f, int quad_order) {
    const FESpace& s = *f.space;
    const auto& rule = quadrature_rule(quad_order);
    double total = 0.0;
    for (int t = 0; t < s.mesh->triangle_count(); ++t) {
        const ElementBasis eb = tabulate(s, t, rule);
        for (int c = 0; c < s.components(); ++c) {
            const LocalField lf = gather(f, eb, c);
            const double mult = s.component_multiplicity(c);
            for (int q = 0; q < eb.nq; ++q) {
                const double v = lf.value(eb, q);
                total += mult * eb.weights[q] * v * v;
            }
        }
    }
    return std::sqrt(total);
}

double l2_diff(const FEFunction& a, const FEFunction& b, int quad_order) {
    if (a.space != b.space) throw std::invalid_argument("l2_diff: functions on different spaces");
    FEFunction d = a;
    for (std::size_t k = 0; k < d.coeffs.size(); ++k) d.coeffs[k] -= b.coeffs[k];
    return l2_norm(d, quad_order);
}

}  // namespace fsi
