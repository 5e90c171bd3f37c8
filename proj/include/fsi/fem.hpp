#pragma once

#include <array>
#include <functional>
#include <vector>

#include "fsi/mesh.hpp"

namespace fsi {

/// Symmetric 2x2 tensor stored as 3 components.
struct SymTensor2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;
};

/// 2x2 matrix, row-major: a[i][j] = d v_i / d x_j for gradients.
struct Mat2 {
    double a[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
};

struct QuadraturePoint {
    double l0, l1, l2;  // barycentric coordinates
    double w;           // reference weight; weights of a rule sum to 1/2
};

/// Symmetric Gauss rule on the reference triangle, exact for polynomials of
/// total degree `order`, 1 <= order <= 6.
const std::vector<QuadraturePoint>& quadrature_rule(int order);

/// Values of the 3 (P1) or 6 (P2) Lagrange basis functions at a barycentric
/// point.
void eval_basis(int degree, double l0, double l1, double l2, double* out);

enum class ValueKind { Scalar, Vector2, SymTensor2 };

/// Lagrange finite-element space (P1 or P2) on a triangle mesh. Component
/// blocks are laid out contiguously: dof = component * scalar_dofs + i.
/// SymTensor2 components are ordered (xx, xy, yy).
struct FESpace {
    const Mesh* mesh = nullptr;
    int degree = 1;
    ValueKind kind = ValueKind::Scalar;
    int scalar_dofs = 0;

    static FESpace create(const Mesh& mesh, int degree, ValueKind kind);

    int components() const;
    int dof_count() const { return components() * scalar_dofs; }
    int local_scalar_count() const { return degree == 1 ? 3 : 6; }
    int global_scalar_dof(int tri, int local) const;
    Vec2 scalar_dof_point(int sdof) const;
    /// Frobenius multiplicity of component c in inner products (1,2,1 for
    /// symmetric tensors, 1 otherwise).
    double component_multiplicity(int c) const;
    /// Scalar dofs lying on the domain boundary, sorted.
    std::vector<int> boundary_scalar_dofs() const;
};

struct FEFunction {
    const FESpace* space = nullptr;
    std::vector<double> coeffs;

    FEFunction() = default;
    explicit FEFunction(const FESpace& s) : space(&s), coeffs(s.dof_count(), 0.0) {}
};

/// Per-element basis tables at the points of a quadrature rule. Weights are
/// scaled by the Jacobian so that their sum is the element area.
struct ElementBasis {
    int nq = 0;
    int nloc = 0;
    std::array<int, 6> dofs{};          // global scalar dofs
    std::vector<double> values;         // nq * nloc
    std::vector<Vec2> grads;            // nq * nloc
    std::vector<Vec2> points;           // physical coordinates
    std::vector<double> weights;

    double value(int q, int k) const { return values[q * nloc + k]; }
    Vec2 grad(int q, int k) const { return grads[q * nloc + k]; }
};

ElementBasis tabulate(const FESpace& space, int tri, const std::vector<QuadraturePoint>& rule);

/// Precomputed element tables for one space and rule; meshes are immutable,
/// so repeated assemblies share these.
class BasisCache {
  public:
    BasisCache() = default;
    BasisCache(const FESpace& space, int quad_order);
    bool empty() const { return tables_.empty(); }
    const ElementBasis& operator[](int tri) const { return tables_[tri]; }

  private:
    std::vector<ElementBasis> tables_;
};

/// Values and gradients of one scalar component of a function on one element.
struct LocalField {
    std::array<double, 6> coeff{};
    double value(const ElementBasis& eb, int q) const;
    Vec2 grad(const ElementBasis& eb, int q) const;
};

LocalField gather(const FEFunction& f, const ElementBasis& eb, int component = 0);

// Nodal interpolation. Exact for polynomials up to the space degree.
FEFunction interpolate(const FESpace& s, const std::function<double(Vec2)>& f);
FEFunction interpolate_vector(const FESpace& s, const std::function<Vec2(Vec2)>& f);
FEFunction interpolate_symtensor(const FESpace& s, const std::function<SymTensor2(Vec2)>& f);

// Point evaluation; throws if the point lies outside the mesh.
double evaluate(const FEFunction& f, Vec2 p);
Vec2 evaluate_vector(const FEFunction& f, Vec2 p);
SymTensor2 evaluate_symtensor(const FEFunction& f, Vec2 p);

double integrate(const Mesh& mesh, const std::function<double(Vec2)>& f, int quad_order);

/// True L2 norm over the mesh; tensor components counted with multiplicity.
double l2_norm(const FEFunction& f, int quad_order = 4);
/// L2 norm of (a - b) for functions on the same space.
double l2_diff(const FEFunction& a, const FEFunction& b, int quad_order = 4);

}  // namespace fsi
