#pragma once

#include <functional>

#include "fsi/fem.hpp"
#include "fsi/sparse.hpp"

namespace fsi {

/// Scalar coefficient evaluated at quadrature points: a constant, a closed
/// form in (x, y), or a (mapped) scalar finite-element function sampled
/// in-element.
class Coefficient {
  public:
    Coefficient(double c) : constant_(c), kind_(Kind::Constant) {}
    Coefficient(std::function<double(double, double)> fn)
        : fn_(std::move(fn)), kind_(Kind::Function) {}

    static Coefficient nodal(const FEFunction& f);
    static Coefficient nodal(const FEFunction& f, std::function<double(double)> map);

    double eval(int tri, const QuadraturePoint& qp, Vec2 x) const;

  private:
    enum class Kind { Constant, Function, Nodal };
    double constant_ = 0.0;
    std::function<double(double, double)> fn_;
    const FEFunction* nodal_ = nullptr;
    std::function<double(double)> map_;
    Kind kind_;
    mutable int cached_tri_ = -1;
    mutable std::array<double, 6> local_{};
};

// Weighted bilinear forms. Vector and tensor spaces produce block matrices
// in the space's component layout; symmetric-tensor contractions count the
// off-diagonal component twice.

/// M[i,j] = int w psi_i psi_j
SparseMatrix assemble_mass(const FESpace& s, const Coefficient& w, int quad_order);

/// K[i,j] = int w grad(psi_j) . grad(psi_i)
SparseMatrix assemble_stiffness(const FESpace& s, const Coefficient& w, int quad_order);

/// C[i,j] = int w (v . grad(psi_j)) psi_i
SparseMatrix assemble_convection(const FESpace& s, const FEFunction& velocity,
                                 const Coefficient& w, int quad_order);

/// A[i,j] = int 2 mu D(psi_j) : D(psi_i) on a Vector2 space.
SparseMatrix assemble_vector_laplacian_and_symgrad(const FESpace& vspace, const Coefficient& mu,
                                                   int quad_order);

/// B[i,j] = int q_i div(psi_j), rows on the pressure space.
SparseMatrix assemble_divergence(const FESpace& vspace, const FESpace& pspace, int quad_order);

// Load functionals.
std::vector<double> assemble_load(const FESpace& s, const std::function<double(Vec2)>& f,
                                  int quad_order);
std::vector<double> assemble_vector_load(const FESpace& s, const std::function<Vec2(Vec2)>& f,
                                         int quad_order);
/// rhs_i = int F : A_i with the symmetric-tensor test functions A_i.
std::vector<double> assemble_symtensor_load(const FESpace& s,
                                            const std::function<SymTensor2(Vec2)>& f,
                                            int quad_order);

}  // namespace fsi
