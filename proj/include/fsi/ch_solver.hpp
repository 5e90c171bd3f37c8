#pragma once

#include "fsi/assembly.hpp"
#include "fsi/linsolve.hpp"
#include "fsi/materials.hpp"
#include "fsi/scenarios.hpp"

namespace fsi {

/// Assembly form of the phase convection term. The divergence form tests the
/// term against the gradient of the test function, which conserves the phase
/// mass exactly for velocities with zero normal trace; the convective form is
/// the equation as printed.
enum class ConvectionForm { Convective, Divergence };

struct CHSubproblemInput {
    const FEFunction* phi_n = nullptr;     // P2 scalar, level n
    const FEFunction* phi_guess = nullptr; // P2 scalar, iterate kappa
    const FEFunction* v_guess = nullptr;   // P2 vector, iterate kappa
    double dt = 0.0;
    const MaterialParams* params = nullptr;
    bool phi_dirichlet = false;  // no-wetting condition phi = value on the walls
    double phi_bc_value = 1.0;
    ConvectionForm form = ConvectionForm::Divergence;
    const MMSCase* mms = nullptr;  // adds the manufactured forcing when set
    double t_half = 0.0;
};

struct CHResult {
    FEFunction phi;
    FEFunction m;
    LinearSolveReport report;
};

/// One linearized half-step of the coupled Cahn-Hilliard pair (phi, m).
class CHSolver {
  public:
    explicit CHSolver(const FESpace& phi_space, LinearSolveOptions opts = {});

    CHResult solve(const CHSubproblemInput& in);

    /// Starts a preconditioner epoch (see LinearSolver::begin_epoch).
    void begin_step() { solver_.begin_epoch(); }

  private:
    const FESpace* space_;
    BasisCache cache_;
    AssemblyMap map_;
    LinearSolver solver_;
};

/// Manufactured forcing for the phase equation: rhs_i += int f_phi psi_i.
void add_mms_forcing_phi(std::vector<double>& rhs, const FESpace& phi_space, const MMSCase& mms,
                         double t, int quad_order = 4);

}  // namespace fsi
