#pragma once

#include <string>
#include <vector>

#include "fsi/mesh.hpp"

namespace fsi {

/// Physical and numerical constants of the diffuse-interface model. The
/// phase-dependent blends clamp their argument to [-1, 1]; the phase itself
/// is free to overshoot.
struct MaterialParams {
    double rho_f = 1.0;      // fluid density (g/cm^3)
    double rho_s = 1.0;      // solid density
    double mu_f = 1.0;       // fluid viscosity (poise)
    double mu_s = 0.0;       // solid viscosity
    double g_f = 0.0;        // fluid shear modulus (dyne/cm^2)
    double g_s = 1.0;        // solid shear modulus
    double alpha_f = 1.0;    // fluid strain relaxation (dyne/(cm^2 s))
    double gamma = 1e-4;     // scaled surface tension
    double epsilon = 0.1;    // interface width (cm)
    double mobility = 1.0;   // constant mobility M
    double delta_stab = 0.0; // strain-transport stabilization
    Vec2 body_force{0.0, 0.0};  // f (cm/s^2)

    double rho(double phi) const { return blend(phi, rho_f, rho_s); }
    double mu(double phi) const { return blend(phi, mu_f, mu_s); }
    double G(double phi) const { return blend(phi, g_f, g_s); }
    double alpha(double phi) const { return blend(phi, alpha_f, 0.0); }

    // Blend slopes; zero where the clamp is active.
    double drho(double phi) const { return slope(phi, rho_f, rho_s); }
    double dmu(double phi) const { return slope(phi, mu_f, mu_s); }
    double dG(double phi) const { return slope(phi, g_f, g_s); }

    /// Throws with every violated invariant listed.
    void validate() const;

  private:
    static double blend(double phi, double fluid, double solid) {
        const double p = phi < -1.0 ? -1.0 : (phi > 1.0 ? 1.0 : phi);
        return fluid * (1.0 + p) / 2.0 + solid * (1.0 - p) / 2.0;
    }
    static double slope(double phi, double fluid, double solid) {
        if (phi <= -1.0 || phi >= 1.0) return 0.0;
        return (fluid - solid) / 2.0;
    }
};

/// Polynomial double-well potential W(phi) = (phi^2 - 1)^2 / 4.
double double_well(double phi);
/// W'(phi) = phi^3 - phi.
double double_well_prime(double phi);
/// Linearization W'_lin(old, new) = new * old^2 - new; agrees with W' when
/// old == new.
double double_well_prime_lin(double phi_old, double phi_new);

/// Scaled surface tension from the physical one: gamma = 3/(2 sqrt 2) gamma~.
double gamma_from_physical(double gamma_physical);

}  // namespace fsi
