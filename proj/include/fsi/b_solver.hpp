#pragma once

#include "fsi/assembly.hpp"
#include "fsi/linsolve.hpp"
#include "fsi/materials.hpp"
#include "fsi/scenarios.hpp"

namespace fsi {

struct BSubproblemInput {
    const FEFunction* b_n = nullptr;      // P1 symmetric tensor, level n
    const FEFunction* v_guess = nullptr;  // P2 vector, iterate kappa
    const FEFunction* phi_new = nullptr;  // P2 scalar, iterate kappa+1
    double dt = 0.0;
    const MaterialParams* params = nullptr;
    const MMSCase* mms = nullptr;
    double t_half = 0.0;
};

struct BResult {
    FEFunction b;
    LinearSolveReport report;
};

/// One half-step of the stabilized left Cauchy-Green transport equation with
/// natural boundary conditions. All three tensor components are solved as one
/// block system since the velocity gradient couples them.
class BSolver {
  public:
    explicit BSolver(const FESpace& b_space, LinearSolveOptions opts = {});

    BResult solve(const BSubproblemInput& in);

    /// Starts a preconditioner epoch (see LinearSolver::begin_epoch).
    void begin_step() { solver_.begin_epoch(); }

  private:
    const FESpace* space_;
    BasisCache cache_p1_;
    BasisCache cache_p2_;
    AssemblyMap map_;
    LinearSolver solver_;
    bool warned_unstabilized_ = false;
};

/// Manufactured forcing for the strain transport: rhs_i += int F_B : A_i.
void add_mms_forcing_b(std::vector<double>& rhs, const FESpace& b_space, const MMSCase& mms,
                       double t, int quad_order = 4);

}  // namespace fsi
