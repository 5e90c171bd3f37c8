#include "fsi/assembly.hpp"

#include <stdexcept>

namespace fsi {

Coefficient Coefficient::nodal(const FEFunction& f) { return nodal(f, {}); }

Coefficient Coefficient::nodal(const FEFunction& f, std::function<double(double)> map) {
    if (f.space->kind != ValueKind::Scalar)
        throw std::invalid_argument("Coefficient::nodal: scalar function expected");
    Coefficient c(0.0);
    c.kind_ = Kind::Nodal;
    c.nodal_ = &f;
    c.map_ = std::move(map);
    return c;
}

double Coefficient::eval(int tri, const QuadraturePoint& qp, Vec2 x) const {
    switch (kind_) {
        case Kind::Constant: return constant_;
        case Kind::Function: return fn_(x.x, x.y);
        case Kind::Nodal: break;
    }
    const FESpace& s = *nodal_->space;
    if (cached_tri_ != tri) {
        for (int k = 0; k < s.local_scalar_count(); ++k)
            local_[k] = nodal_->coeffs[s.global_scalar_dof(tri, k)];
        cached_tri_ = tri;
    }
    double vals[6];
    eval_basis(s.degree, qp.l0, qp.l1, qp.l2, vals);
    double v = 0.0;
    for (int k = 0; k < s.local_scalar_count(); ++k) v += local_[k] * vals[k];
    return map_ ? map_(v) : v;
}

namespace {

// Shared scaffolding for element loops over one space: for every element,
// calls kernel(tri, eb) which adds local contributions.
template <typename Kernel>
void for_each_element(const FESpace& s, int quad_order, Kernel&& kernel) {
    const auto& rule = quadrature_rule(quad_order);
    for (int t = 0; t < s.mesh->triangle_count(); ++t) kernel(t, tabulate(s, t, rule), rule);
}

}  // namespace

SparseMatrix assemble_mass(const FESpace& s, const Coefficient& w, int quad_order) {
    MatrixBuilder b(s.dof_count(), s.dof_count());
    const int nc = s.components();
    for_each_element(s, quad_order, [&](int t, const ElementBasis& eb, const auto& rule) {
        for (int q = 0; q < eb.nq; ++q) {
            const double wq = eb.weights[q] * w.eval(t, rule[q], eb.points[q]);
            for (int c = 0; c < nc; ++c) {
                const double m = wq * s.component_multiplicity(c);
                const int off = c * s.scalar_dofs;
                for (int i = 0; i < eb.nloc; ++i)
                    for (int j = 0; j < eb.nloc; ++j)
                        b.add(off + eb.dofs[i], off + eb.dofs[j],
                              m * eb.value(q, i) * eb.value(q, j));
            }
        }
    });
    return b.build();
}

SparseMatrix assemble_stiffness(const FESpace& s, const Coefficient& w, int quad_order) {
    MatrixBuilder b(s.dof_count(), s.dof_count());
    const int nc = s.components();
    for_each_element(s, quad_order, [&](int t, const ElementBasis& eb, const auto& rule) {
        for (int q = 0; q < eb.nq; ++q) {
            const double wq = eb.weights[q] * w.eval(t, rule[q], eb.points[q]);
            for (int c = 0; c < nc; ++c) {
                const double m = wq * s.component_multiplicity(c);
                const int off = c * s.scalar_dofs;
                for (int i = 0; i < eb.nloc; ++i)
                    for (int j = 0; j < eb.nloc; ++j)
                        b.add(off + eb.dofs[i], off + eb.dofs[j],
                              m * dot(eb.grad(q, i), eb.grad(q, j)));
            }
        }
    });
    return b.build();
}

SparseMatrix assemble_convection(const FESpace& s, const FEFunction& velocity,
                                 const Coefficient& w, int quad_order) {
    if (velocity.space->kind != ValueKind::Vector2)
        throw std::invalid_argument("assemble_convection: vector velocity expected");
    if (velocity.space->mesh != s.mesh)
        throw std::invalid_argument("assemble_convection: mesh mismatch");
    MatrixBuilder b(s.dof_count(), s.dof_count());
    const int nc = s.components();
    const auto& vrule = quadrature_rule(quad_order);
    for_each_element(s, quad_order, [&](int t, const ElementBasis& eb, const auto& rule) {
        const ElementBasis vb = tabulate(*velocity.space, t, vrule);
        const LocalField vx = gather(velocity, vb, 0);
        const LocalField vy = gather(velocity, vb, 1);
        for (int q = 0; q < eb.nq; ++q) {
            const double wq = eb.weights[q] * w.eval(t, rule[q], eb.points[q]);
            const Vec2 v{vx.value(vb, q), vy.value(vb, q)};
            for (int c = 0; c < nc; ++c) {
                const double m = wq * s.component_multiplicity(c);
                const int off = c * s.scalar_dofs;
                for (int i = 0; i < eb.nloc; ++i)
                    for (int j = 0; j < eb.nloc; ++j)
                        b.add(off + eb.dofs[i], off + eb.dofs[j],
                              m * dot(v, eb.grad(q, j)) * eb.value(q, i));
            }
        }
    });
    return b.build();
}

SparseMatrix assemble_vector_laplacian_and_symgrad(const FESpace& vspace, const Coefficient& mu,
                                                   int quad_order) {
    if (vspace.kind != ValueKind::Vector2)
        throw std::invalid_argument("assemble_vector_laplacian_and_symgrad: vector space expected");
    MatrixBuilder b(vspace.dof_count(), vspace.dof_count());
    const int S = vspace.scalar_dofs;
    for_each_element(vspace, quad_order, [&](int t, const ElementBasis& eb, const auto& rule) {
        for (int q = 0; q < eb.nq; ++q) {
            const double wq = eb.weights[q] * mu.eval(t, rule[q], eb.points[q]);
            // 2 mu D(psi_j e_a) : D(psi_i e_b)
            //   = mu [ delta_ab grad(psi_j).grad(psi_i) + d_b psi_j d_a psi_i ]
            for (int i = 0; i < eb.nloc; ++i)
                for (int j = 0; j < eb.nloc; ++j) {
                    const Vec2 gi = eb.grad(q, i), gj = eb.grad(q, j);
                    const double gg = dot(gi, gj);
                    const double gjm[2] = {gj.x, gj.y}, gim[2] = {gi.x, gi.y};
                    for (int bcomp = 0; bcomp < 2; ++bcomp)
                        for (int acomp = 0; acomp < 2; ++acomp) {
                            double val = gjm[bcomp] * gim[acomp];
                            if (acomp == bcomp) val += gg;
                            b.add(bcomp * S + eb.dofs[i], acomp * S + eb.dofs[j], wq * val);
                        }
                }
        }
    });
    return b.build();
}

SparseMatrix assemble_divergence(const FESpace& vspace, const FESpace& pspace, int quad_order) {
    if (vspace.mesh != pspace.mesh)
        throw std::invalid_argument("assemble_divergence: mesh mismatch");
    if (vspace.kind != ValueKind::Vector2 || pspace.kind != ValueKind::Scalar)
        throw std::invalid_argument("assemble_divergence: expects (vector, scalar) spaces");
    MatrixBuilder b(pspace.dof_count(), vspace.dof_count());
    const int S = vspace.scalar_dofs;
    const auto& rule = quadrature_rule(quad_order);
    for (int t = 0; t < vspace.mesh->triangle_count(); ++t) {
        const ElementBasis vb = tabulate(vspace, t, rule);
        const ElementBasis pb = tabulate(pspace, t, rule);
        for (int q = 0; q < vb.nq; ++q) {
            const double wq = vb.weights[q];
            for (int i = 0; i < pb.nloc; ++i)
                for (int j = 0; j < vb.nloc; ++j) {
                    const Vec2 gj = vb.grad(q, j);
                    const double pi = pb.value(q, i);
                    b.add(pb.dofs[i], vb.dofs[j], wq * pi * gj.x);
                    b.add(pb.dofs[i], S + vb.dofs[j], wq * pi * gj.y);
                }
        }
    }
    return b.build();
}

std::vector<double> assemble_load(const FESpace& s, const std::function<double(Vec2)>& f,
                                  int quad_order) {
    if (s.kind != ValueKind::Scalar) throw std::invalid_argument("assemble_load: scalar space");
    std::vector<double> rhs(s.dof_count(), 0.0);
    for_each_element(s, quad_order, [&](int, const ElementBasis& eb, const auto&) {
        for (int q = 0; q < eb.nq; ++q) {
            const double wf = eb.weights[q] * f(eb.points[q]);
            for (int i = 0; i < eb.nloc; ++i) rhs[eb.dofs[i]] += wf * eb.value(q, i);
        }
    });
    return rhs;
}

std::vector<double> assemble_vector_load(const FESpace& s, const std::function<Vec2(Vec2)>& f,
                                         int quad_order) {
    if (s.kind != ValueKind::Vector2)
        throw std::invalid_argument("assemble_vector_load: vector space");
    std::vector<double> rhs(s.dof_count(), 0.0);
    const int S = s.scalar_dofs;
    for_each_element(s, quad_order, [&](int, const ElementBasis& eb, const auto&) {
        for (int q = 0; q < eb.nq; ++q) {
            const Vec2 v = f(eb.points[q]);
            const double wq = eb.weights[q];
            for (int i = 0; i < eb.nloc; ++i) {
                rhs[eb.dofs[i]] += wq * v.x * eb.value(q, i);
                rhs[S + eb.dofs[i]] += wq * v.y * eb.value(q, i);
            }
        }
    });
    return rhs;
}

std::vector<double> assemble_symtensor_load(const FESpace& s,
                                            const std::function<SymTensor2(Vec2)>& f,
                                            int quad_order) {
    if (s.kind != ValueKind::SymTensor2)
        throw std::invalid_argument("assemble_symtensor_load: tensor space");
    std::vector<double> rhs(s.dof_count(), 0.0);
    const int S = s.scalar_dofs;
    for_each_element(s, quad_order, [&](int, const ElementBasis& eb, const auto&) {
        for (int q = 0; q < eb.nq; ++q) {
            const SymTensor2 v = f(eb.points[q]);
            const double wq = eb.weights[q];
            for (int i = 0; i < eb.nloc; ++i) {
                const double phi = eb.value(q, i);
                rhs[eb.dofs[i]] += wq * v.xx * phi;
                rhs[S + eb.dofs[i]] += wq * 2.0 * v.xy * phi;  // F:A counts xy twice
                rhs[2 * S + eb.dofs[i]] += wq * v.yy * phi;
            }
        }
    });
    return rhs;
}

}  // namespace fsi
