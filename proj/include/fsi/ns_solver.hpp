#pragma once

#include "fsi/assembly.hpp"
#include "fsi/linsolve.hpp"
#include "fsi/materials.hpp"
#include "fsi/scenarios.hpp"

namespace fsi {

struct NSSubproblemInput {
    const FEFunction* v_n = nullptr;      // P2 vector, level n
    const FEFunction* phi_n = nullptr;    // P2 scalar, level n
    const FEFunction* phi_new = nullptr;  // P2 scalar, iterate kappa+1
    const FEFunction* m_new = nullptr;    // P2 scalar, iterate kappa+1
    const FEFunction* b_new = nullptr;    // P1 symmetric tensor, iterate kappa+1
    const FEFunction* v_guess = nullptr;  // P2 vector, iterate kappa
    double dt = 0.0;
    const MaterialParams* params = nullptr;
    const MMSCase* mms = nullptr;  // forcing plus v = v_ref(t_half) on the walls
    double t_half = 0.0;
};

struct NSResult {
    FEFunction v;
    FEFunction p;
    LinearSolveReport report;
};

/// One half-step of the variable-density Navier-Stokes system with elastic,
/// capillary, and mobility-flux terms. Solved monolithically; the pressure is
/// pinned at one dof during the solve and shifted to zero mean afterwards.
class NSSolver {
  public:
    NSSolver(const FESpace& v_space, const FESpace& p_space, LinearSolveOptions opts = {});

    NSResult solve(const NSSubproblemInput& in);

    /// Starts a preconditioner epoch (see LinearSolver::begin_epoch).
    void begin_step() { solver_.begin_epoch(); }

  private:
    const FESpace* v_space_;
    const FESpace* p_space_;
    std::vector<double> p_integral_;  // int q_j, for the zero-mean shift
    BasisCache cache_p2_;
    BasisCache cache_p1_;
    AssemblyMap map_;
    LinearSolver solver_;
};

/// Manufactured forcing for the momentum equation: rhs_i += int f_v . z_i.
void add_mms_forcing_ns(std::vector<double>& rhs, const FESpace& v_space, const MMSCase& mms,
                        double t, int quad_order = 4);

}  // namespace fsi
