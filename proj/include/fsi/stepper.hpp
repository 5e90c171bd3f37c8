#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "fsi/b_solver.hpp"
#include "fsi/ch_solver.hpp"
#include "fsi/ns_solver.hpp"

namespace fsi {

/// Fields at time levels n-1 and n plus the converged half-step quantities
/// of the most recent step.
struct SimState {
    double t = 0.0;
    int step_index = 0;
    FEFunction v_prev, v_curr;
    FEFunction phi_prev, phi_curr;
    FEFunction b_prev, b_curr;
    FEFunction p_curr, m_curr;    // half-step pressure and potential
    FEFunction v_half, phi_half;  // converged half-step fields
};

struct FixedPointConfig {
    double rel_tol = 1e-8;
    int max_iter = 50;
    /// Anderson acceleration of the subiteration. Off by default: plain
    /// successive substitution as printed. Stiff elastic coupling (contact
    /// runs) contracts too slowly without it.
    bool acceleration = false;
    int acceleration_depth = 5;
};

enum class PhiBC { Natural, DirichletOne };

struct SchemeOptions {
    ConvectionForm ch_form = ConvectionForm::Divergence;
    PhiBC phi_bc = PhiBC::Natural;
    bool freeze_phi = false;  // keep phi constant (diagnostic runs)
};

/// Fixed-point subiteration failure carrying the change history.
class SubiterationError : public std::runtime_error {
  public:
    SubiterationError(int step, std::string kind, std::vector<double> history)
        : std::runtime_error("subiteration " + kind + " at step " + std::to_string(step) +
                             " after " + std::to_string(history.size()) + " iterations"),
          step_(step),
          kind_(std::move(kind)),
          history_(std::move(history)) {}

    int step() const { return step_; }
    const std::string& kind() const { return kind_; }  // non-convergence | divergence
    const std::vector<double>& residual_history() const { return history_; }

  private:
    int step_;
    std::string kind_;
    std::vector<double> history_;
};

struct StepStats {
    int subiters = 0;
    int lin_solves = 0;
    int lin_iters = 0;
    double lin_residual_max = 0.0;
};

/// Orchestrates one time step: extrapolated guesses, the fixed-point loop
/// over the three subproblem solves, and the extrapolations to t^{n+1}.
class Stepper {
  public:
    Stepper(const Mesh& mesh, MaterialParams params, double dt, FixedPointConfig fp = {},
            SchemeOptions opts = {}, const MMSCase* mms = nullptr, LinearSolveOptions lin = {});

    const FESpace& v_space() const { return v_space_; }
    const FESpace& p_space() const { return p_space_; }
    const FESpace& phi_space() const { return phi_space_; }
    const FESpace& b_space() const { return b_space_; }
    const MaterialParams& params() const { return params_; }
    const MMSCase* mms() const { return mms_; }
    double dt() const { return dt_; }

    /// Both time levels start from the initial data; the first step's guesses
    /// then equal the initial fields.
    SimState initial_state(FEFunction v0, FEFunction phi0, FEFunction b0) const;

    /// Coefficientwise 3/2 curr - 1/2 prev.
    static FEFunction extrapolate_guess(const FEFunction& curr, const FEFunction& prev);

    StepStats advance(SimState& state);

  private:
    double field_change(const SparseMatrix& mass, const FEFunction& next,
                        const FEFunction& prev) const;

    const Mesh* mesh_;
    MaterialParams params_;
    double dt_;
    FixedPointConfig fp_;
    SchemeOptions opts_;
    const MMSCase* mms_;
    FESpace v_space_, p_space_, phi_space_, b_space_;
    CHSolver ch_;
    BSolver b_;
    NSSolver ns_;
    SparseMatrix mass_v_, mass_phi_, mass_b_;
};

}  // namespace fsi
