#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsi/sparse.hpp"

namespace fsi {

enum class SolveMethod { DirectLU, Gmres };

struct LinearSolveOptions {
    SolveMethod method = SolveMethod::DirectLU;
    double rel_tol = 1e-10;
    int max_iter = 500;
    /// Within one epoch (time step), later solves run GMRES preconditioned
    /// by the epoch's first LU factorization instead of refactorizing. The
    /// verified residual bound still holds for the actual matrix; the solver
    /// falls back to a fresh factorization when the frozen one has drifted
    /// too far.
    bool freeze_preconditioner = false;
};

struct LinearSolveReport {
    double residual_norm = 0.0;  // ||Ax-b|| / ||b||, re-verified by multiplication
    int iterations = 0;          // 0 for the direct method
    SolveMethod method = SolveMethod::DirectLU;
};

/// Solver failure carrying the subproblem that produced the system.
class LinearSolveError : public std::runtime_error {
  public:
    LinearSolveError(std::string subproblem, const std::string& what)
        : std::runtime_error(subproblem + ": " + what), subproblem_(std::move(subproblem)) {}
    const std::string& subproblem() const { return subproblem_; }

  private:
    std::string subproblem_;
};

/// Reusable solver bound to one subproblem. Sparsity analysis is cached
/// across calls when the pattern is unchanged; factorizations are not.
class LinearSolver {
  public:
    explicit LinearSolver(std::string subproblem, LinearSolveOptions opts = {});
    ~LinearSolver();
    LinearSolver(LinearSolver&&) noexcept;
    LinearSolver& operator=(LinearSolver&&) noexcept;

    std::vector<double> solve(const SparseMatrix& a, const std::vector<double>& b,
                              LinearSolveReport* report = nullptr);

    /// Marks the start of a preconditioner epoch: the next direct solve
    /// refactorizes even when freeze_preconditioner is set.
    void begin_epoch();

    const LinearSolveOptions& options() const { return opts_; }
    void set_options(const LinearSolveOptions& opts) { opts_ = opts; }

  private:
    std::string subproblem_;
    LinearSolveOptions opts_;
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One-shot convenience wrapper.
std::pair<std::vector<double>, LinearSolveReport> solve(const SparseMatrix& a,
                                                        const std::vector<double>& b,
                                                        const LinearSolveOptions& opts = {},
                                                        const std::string& subproblem = "linear-solve");

}  // namespace fsi
