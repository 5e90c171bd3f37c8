#pragma once

#include <iosfwd>
#include <vector>

#include "fsi/stepper.hpp"

namespace fsi {

/// Per-step energy budget, conservation checks, boundedness monitors, and
/// solver statistics. Sup-type norms are quadrature-point maxima.
struct DiagnosticsRecord {
    int step = 0;
    double t = 0.0;
    double e_kin = 0.0;      // int rho(phi) |v|^2 / 2
    double e_elastic = 0.0;  // 1/2 int G(phi) tr B
    double e_mix = 0.0;      // gamma/eps int W(phi) + gamma eps/2 int |grad phi|^2
    double d_visc = 0.0;     // int 2 mu(phi) |D(v)|^2
    double d_mob = 0.0;      // int M |grad m|^2
    double r_relax = 0.0;    // 1/2 int alpha(phi) tr B
    double power_body = 0.0;     // int rho(phi) f . v
    double power_forcing = 0.0;  // work of the manufactured forcings, 0 otherwise
    double mass_phi = 0.0;
    double min_phi = 0.0;       // over quadrature points
    double max_phi = 0.0;
    double min_phi_nodal = 0.0; // over Lagrange coefficients
    double min_eig_b = 0.0;
    double norm_grad_v_inf = 0.0;
    double norm_dtphi_inf = 0.0;
    double norm_phi_w14 = 0.0;  // ||phi||^4 in W^{1,4}
    double com_y = 0.0;         // NaN when the solid phase is empty
    int subiters = 0;
    int lin_solves = 0;
    int lin_iters = 0;
    double lin_residual_max = 0.0;
    bool clamp_active = false;  // phi left [-1, 1] somewhere

    double energy_total() const { return e_kin + e_elastic + e_mix; }
};

DiagnosticsRecord record_state(const SimState& state, const Stepper& stepper,
                               const StepStats& stats = {});

/// Residual of the semi-discrete energy identity between two consecutive
/// records, with dissipation and sources taken at the interval midpoint.
/// Logged, not asserted; the time discretization is not energy-exact.
double energy_balance_residual(const DiagnosticsRecord& a, const DiagnosticsRecord& b, double dt,
                               double alpha_f, double mass_phi0);

struct RelativeErrors {
    double e_v = 0.0;
    double e_b = 0.0;
    double e_phi = 0.0;
    // set when the reference norm is below 1e-14 and the error is absolute
    bool absolute_v = false;
    bool absolute_b = false;
    bool absolute_phi = false;
};

/// L2 errors against the closed-form reference fields at time t.
RelativeErrors relative_errors(const FEFunction& v, const FEFunction& b, const FEFunction& phi,
                               const MMSCase& mms, double t);

/// rate_i = log2(e_i / e_{i+1}); NaN where an error is not positive.
std::vector<double> convergence_rates(const std::vector<double>& errors);

/// CSV with a versioned header comment, one row per record.
void write_diagnostics_csv(const std::vector<DiagnosticsRecord>& records, std::ostream& out);

}  // namespace fsi
