#pragma once

#include "fsi/fem.hpp"
#include "fsi/materials.hpp"

namespace fsi {

/// Closed-form reference fields for the convergence study, with the analytic
/// derivatives needed by the forcing terms. The pressure reference is the
/// constant 0.
struct MMSCase {
    int case_id = 1;  // 1: viscoelastic structure; 2: mu_s = 0, g_f = 0
    MaterialParams params;

    double phi(Vec2 p, double t) const;
    Vec2 grad_phi(Vec2 p, double t) const;
    double lap_phi(Vec2 p, double t) const;
    double dphi_dt(Vec2 p, double t) const;
    Mat2 hess_phi(Vec2 p, double t) const;

    Vec2 velocity(Vec2 p, double t) const;
    Mat2 grad_v(Vec2 p, double t) const;
    Vec2 dv_dt(Vec2 p, double t) const;
    Vec2 lap_v(Vec2 p, double t) const;

    SymTensor2 strain(Vec2 p, double t) const;  // B
    SymTensor2 dB_dt(Vec2 p, double t) const;
    SymTensor2 dB_dx(Vec2 p, double t) const;
    SymTensor2 dB_dy(Vec2 p, double t) const;
    SymTensor2 lap_B(Vec2 p, double t) const;
    Vec2 div_B(Vec2 p, double t) const;

    /// Chemical potential consistent with the scheme: the G' tr B term is
    /// omitted, matching the discretization.
    double chem_potential(Vec2 p, double t) const;
    Vec2 grad_m(Vec2 p, double t) const;
    double lap_m(Vec2 p, double t) const;

    // Strong-form residuals at the reference fields. The stabilization term
    // is not part of the transport residual; the solver cancels it weakly
    // against the interpolated reference.
    double forcing_phi(Vec2 p, double t) const;
    SymTensor2 forcing_B(Vec2 p, double t) const;
    Vec2 forcing_v(Vec2 p, double t) const;
};

/// Table-1 parameters; epsilon follows the mesh (epsilon = 4 dx) and is
/// supplied by the caller.
MMSCase build_mms(int case_id, double epsilon);

enum class InitProfile { Sharp, Tanh };

/// Falling elastic ball with wall contact: no-wetting condition phi = 1 on
/// the walls, v = 0 on the walls, natural conditions on B.
struct ContactCase {
    int case_id = 1;
    MaterialParams params;
    Vec2 center{0.5, 0.7};
    double radius = 0.2;
    InitProfile profile = InitProfile::Sharp;

    double initial_phi(Vec2 p) const;
};

ContactCase build_contact(int case_id, InitProfile profile = InitProfile::Sharp);

/// y-coordinate of the solid-phase centroid, int y (1-phi)/2 / int (1-phi)/2.
/// Throws if the solid phase is empty.
double center_of_mass_y(const FEFunction& phi);

}  // namespace fsi
