#pragma once

// Independent dense-quadrature evaluation of the assembled bilinear forms.
// Everything here is written from scratch against the definitions: dense
// storage, Duffy-collapsed tensor Gauss-Legendre quadrature, basis functions
// evaluated as full vector/tensor fields so that symmetric-tensor
// multiplicities emerge from the contractions instead of being bookkept.

#include <array>
#include <functional>
#include <vector>

#include "fsi/fem.hpp"
#include "fsi/mesh.hpp"

namespace oracle {

using fsi::Mesh;
using fsi::Vec2;

using Dense = std::vector<std::vector<double>>;

// 12-point Gauss-Legendre nodes and weights on [0, 1].
inline const std::array<double, 12>& gl_nodes() {
    static const std::array<double, 12> n = {
        0.009219682876640378, 0.047941371814762571, 0.115048662902847656,
        0.206341022856691276, 0.316084250500909903, 0.437383295744265542,
        0.562616704255734458, 0.683915749499090097, 0.793658977143308724,
        0.884951337097152344, 0.952058628185237429, 0.990780317123359622};
    return n;
}

inline const std::array<double, 12>& gl_weights() {
    static const std::array<double, 12> w = {
        0.023587668193255914, 0.053469662997659215, 0.080039164271673113,
        0.101583713361532961, 0.116746268269177404, 0.124573522906701393,
        0.124573522906701393, 0.116746268269177404, 0.101583713361532961,
        0.080039164271673113, 0.053469662997659215, 0.023587668193255914};
    return w;
}

struct TriGeom {
    Vec2 a, b, c;
    double jac;  // |det| of the affine map, = 2 area
    // inverse transpose of the Jacobian for gradient transforms
    double inv[2][2];
};

inline TriGeom tri_geom(const Mesh& mesh, int t) {
    TriGeom g;
    g.a = mesh.vertices[mesh.triangles[t][0]];
    g.b = mesh.vertices[mesh.triangles[t][1]];
    g.c = mesh.vertices[mesh.triangles[t][2]];
    const double j11 = g.b.x - g.a.x, j12 = g.c.x - g.a.x;
    const double j21 = g.b.y - g.a.y, j22 = g.c.y - g.a.y;
    const double det = j11 * j22 - j12 * j21;
    g.jac = det;
    // rows of J^{-1}: dxi/dx, dxi/dy; deta/dx, deta/dy
    g.inv[0][0] = j22 / det;
    g.inv[0][1] = -j12 / det;
    g.inv[1][0] = -j21 / det;
    g.inv[1][1] = j11 / det;
    return g;
}

struct BasisPoint {
    double value;
    Vec2 grad;
};

// Scalar Lagrange basis k of the given degree at reference point (xi, eta).
inline BasisPoint basis_at(int degree, int k, double xi, double eta, const TriGeom& g) {
    const double l[3] = {1.0 - xi - eta, xi, eta};
    // reference gradients of the barycentric coordinates
    const double dl[3][2] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};
    double v;
    double dv[2];
    if (degree == 1) {
        v = l[k];
        dv[0] = dl[k][0];
        dv[1] = dl[k][1];
    } else if (k < 3) {
        v = l[k] * (2 * l[k] - 1);
        dv[0] = (4 * l[k] - 1) * dl[k][0];
        dv[1] = (4 * l[k] - 1) * dl[k][1];
    } else {
        const int i = (k - 3 + 1) % 3, j = (k - 3 + 2) % 3;
        v = 4 * l[i] * l[j];
        dv[0] = 4 * (l[j] * dl[i][0] + l[i] * dl[j][0]);
        dv[1] = 4 * (l[j] * dl[i][1] + l[i] * dl[j][1]);
    }
    BasisPoint bp;
    bp.value = v;
    bp.grad = {dv[0] * g.inv[0][0] + dv[1] * g.inv[1][0], dv[0] * g.inv[0][1] + dv[1] * g.inv[1][1]};
    return bp;
}

// Integrates fn(t, xi, eta, x, bookkeeping done by caller) over the mesh with
// the Duffy-collapsed product rule.
template <typename Fn>
void quadrature_loop(const Mesh& mesh, Fn&& fn) {
    const auto& n = gl_nodes();
    const auto& w = gl_weights();
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const TriGeom g = tri_geom(mesh, t);
        for (int iu = 0; iu < 12; ++iu)
            for (int iv = 0; iv < 12; ++iv) {
                const double u = n[iu], vv = n[iv];
                const double xi = u * (1.0 - vv), eta = u * vv;
                const double weight = w[iu] * w[iv] * u * g.jac;
                const Vec2 x{g.a.x + xi * (g.b.x - g.a.x) + eta * (g.c.x - g.a.x),
                             g.a.y + xi * (g.b.y - g.a.y) + eta * (g.c.y - g.a.y)};
                fn(t, g, xi, eta, x, weight);
            }
    }
}

struct SpaceDesc {
    int degree;
    int components;  // 1 scalar, 2 vector, 3 symtensor (xx, xy, yy order)
};

inline int scalar_dofs(const Mesh& mesh, const SpaceDesc& s) {
    return mesh.vertex_count() + (s.degree == 2 ? mesh.edge_count() : 0);
}

inline int global_scalar_dof(const Mesh& mesh, int degree, int t, int k) {
    if (k < 3) return mesh.triangles[t][k];
    (void)degree;
    return mesh.vertex_count() + mesh.triangle_edges[t][k - 3];
}

// Full tensor basis: component c of a symmetric tensor expands to the matrix
// E_c scaled by the scalar basis. E_xy has two unit entries, so contractions
// pick up the factor 2 naturally.
inline void tensor_of_component(int c, double scalar, double out[2][2]) {
    out[0][0] = c == 0 ? scalar : 0.0;
    out[0][1] = out[1][0] = c == 1 ? scalar : 0.0;
    out[1][1] = c == 2 ? scalar : 0.0;
}

inline Dense zeros(int r, int c) { return Dense(r, std::vector<double>(c, 0.0)); }

inline Dense mass(const Mesh& mesh, const SpaceDesc& s,
                  const std::function<double(Vec2)>& w) {
    const int S = scalar_dofs(mesh, s);
    const int n = S * s.components;
    Dense m = zeros(n, n);
    const int nloc = s.degree == 1 ? 3 : 6;
    quadrature_loop(mesh, [&](int t, const TriGeom& g, double xi, double eta, Vec2 x, double wq) {
        const double c = w(x) * wq;
        for (int i = 0; i < nloc; ++i)
            for (int j = 0; j < nloc; ++j) {
                const double pi = basis_at(s.degree, i, xi, eta, g).value;
                const double pj = basis_at(s.degree, j, xi, eta, g).value;
                const int gi = global_scalar_dof(mesh, s.degree, t, i);
                const int gj = global_scalar_dof(mesh, s.degree, t, j);
                for (int ci = 0; ci < s.components; ++ci)
                    for (int cj = 0; cj < s.components; ++cj) {
                        double contraction;
                        if (s.components == 3) {
                            double ti[2][2], tj[2][2];
                            tensor_of_component(ci, pi, ti);
                            tensor_of_component(cj, pj, tj);
                            contraction = ti[0][0] * tj[0][0] + ti[0][1] * tj[0][1] +
                                          ti[1][0] * tj[1][0] + ti[1][1] * tj[1][1];
                        } else {
                            contraction = (ci == cj) ? pi * pj : 0.0;
                        }
                        m[ci * S + gi][cj * S + gj] += c * contraction;
                    }
            }
    });
    return m;
}

inline Dense stiffness(const Mesh& mesh, const SpaceDesc& s,
                       const std::function<double(Vec2)>& w) {
    const int S = scalar_dofs(mesh, s);
    const int n = S * s.components;
    Dense m = zeros(n, n);
    const int nloc = s.degree == 1 ? 3 : 6;
    quadrature_loop(mesh, [&](int t, const TriGeom& g, double xi, double eta, Vec2 x, double wq) {
        const double c = w(x) * wq;
        for (int i = 0; i < nloc; ++i)
            for (int j = 0; j < nloc; ++j) {
                const BasisPoint bi = basis_at(s.degree, i, xi, eta, g);
                const BasisPoint bj = basis_at(s.degree, j, xi, eta, g);
                const int gi = global_scalar_dof(mesh, s.degree, t, i);
                const int gj = global_scalar_dof(mesh, s.degree, t, j);
                const double gg = bi.grad.x * bj.grad.x + bi.grad.y * bj.grad.y;
                for (int ci = 0; ci < s.components; ++ci) {
                    double mult = 1.0;
                    if (s.components == 3 && ci == 1) mult = 2.0;  // E_xy : E_xy
                    m[ci * S + gi][ci * S + gj] += c * mult * gg;
                }
            }
    });
    return m;
}

// velocity supplied as a callback so the oracle does not depend on the
// library's evaluation path
inline Dense convection(const Mesh& mesh, const SpaceDesc& s,
                        const std::function<Vec2(Vec2)>& vel,
                        const std::function<double(Vec2)>& w) {
    const int S = scalar_dofs(mesh, s);
    const int n = S * s.components;
    Dense m = zeros(n, n);
    const int nloc = s.degree == 1 ? 3 : 6;
    quadrature_loop(mesh, [&](int t, const TriGeom& g, double xi, double eta, Vec2 x, double wq) {
        const double c = w(x) * wq;
        const Vec2 v = vel(x);
        for (int i = 0; i < nloc; ++i)
            for (int j = 0; j < nloc; ++j) {
                const BasisPoint bi = basis_at(s.degree, i, xi, eta, g);
                const BasisPoint bj = basis_at(s.degree, j, xi, eta, g);
                const int gi = global_scalar_dof(mesh, s.degree, t, i);
                const int gj = global_scalar_dof(mesh, s.degree, t, j);
                const double conv = (v.x * bj.grad.x + v.y * bj.grad.y) * bi.value;
                for (int ci = 0; ci < s.components; ++ci) {
                    double mult = 1.0;
                    if (s.components == 3 && ci == 1) mult = 2.0;
                    m[ci * S + gi][ci * S + gj] += c * mult * conv;
                }
            }
    });
    return m;
}

inline Dense symgrad(const Mesh& mesh, const std::function<double(Vec2)>& mu) {
    const SpaceDesc s{2, 2};
    const int S = scalar_dofs(mesh, s);
    Dense m = zeros(2 * S, 2 * S);
    quadrature_loop(mesh, [&](int t, const TriGeom& g, double xi, double eta, Vec2 x, double wq) {
        const double c = 2.0 * mu(x) * wq;
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) {
                const BasisPoint bi = basis_at(2, i, xi, eta, g);
                const BasisPoint bj = basis_at(2, j, xi, eta, g);
                const int gi = global_scalar_dof(mesh, 2, t, i);
                const int gj = global_scalar_dof(mesh, 2, t, j);
                const double gim[2] = {bi.grad.x, bi.grad.y};
                const double gjm[2] = {bj.grad.x, bj.grad.y};
                for (int bc = 0; bc < 2; ++bc)
                    for (int ac = 0; ac < 2; ++ac) {
                        // D(psi_j e_ac) and D(psi_i e_bc) as full matrices
                        double dj[2][2] = {{0, 0}, {0, 0}}, di[2][2] = {{0, 0}, {0, 0}};
                        for (int kk = 0; kk < 2; ++kk) {
                            dj[ac][kk] += 0.5 * gjm[kk];
                            dj[kk][ac] += 0.5 * gjm[kk];
                            di[bc][kk] += 0.5 * gim[kk];
                            di[kk][bc] += 0.5 * gim[kk];
                        }
                        double contraction = 0.0;
                        for (int r = 0; r < 2; ++r)
                            for (int cc = 0; cc < 2; ++cc) contraction += dj[r][cc] * di[r][cc];
                        m[bc * S + gi][ac * S + gj] += c * contraction;
                    }
            }
    });
    return m;
}

inline Dense divergence(const Mesh& mesh) {
    const SpaceDesc v{2, 2}, p{1, 1};
    const int Sv = scalar_dofs(mesh, v);
    const int Sp = scalar_dofs(mesh, p);
    Dense m = zeros(Sp, 2 * Sv);
    quadrature_loop(mesh, [&](int t, const TriGeom& g, double xi, double eta, Vec2, double wq) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 6; ++j) {
                const BasisPoint bi = basis_at(1, i, xi, eta, g);
                const BasisPoint bj = basis_at(2, j, xi, eta, g);
                const int gi = global_scalar_dof(mesh, 1, t, i);
                const int gj = global_scalar_dof(mesh, 2, t, j);
                m[gi][gj] += wq * bi.value * bj.grad.x;
                m[gi][Sv + gj] += wq * bi.value * bj.grad.y;
            }
    });
    return m;
}

}  // namespace oracle
