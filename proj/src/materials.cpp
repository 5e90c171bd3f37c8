#include "fsi/materials.hpp"

#include <cmath>
#include <stdexcept>

namespace fsi {

void MaterialParams::validate() const {
    std::vector<std::string> errors;
    auto require = [&](bool ok, const char* msg) {
        if (!ok) errors.emplace_back(msg);
    };
    require(rho_f > 0.0, "rho_f must be > 0");
    require(rho_s > 0.0, "rho_s must be > 0");
    require(mu_f > 0.0, "mu_f must be > 0");
    require(mu_s >= 0.0, "mu_s must be >= 0");
    require(g_s > 0.0, "g_s must be > 0");
    require(g_f >= 0.0, "g_f must be >= 0");
    require(alpha_f >= 0.0, "alpha_f must be >= 0");
    require(gamma > 0.0, "gamma must be > 0");
    require(epsilon > 0.0, "epsilon must be > 0");
    require(mobility > 0.0, "mobility must be > 0");
    require(delta_stab >= 0.0, "delta_stab must be >= 0");
    if (!errors.empty()) {
        std::string all = "invalid material parameters:";
        for (const auto& e : errors) all += "\n  - " + e;
        throw std::invalid_argument(all);
    }
}

double double_well(double phi) {
    const double d = phi * phi - 1.0;
    return 0.25 * d * d;
}

double double_well_prime(double phi) { return phi * phi * phi - phi; }

double double_well_prime_lin(double phi_old, double phi_new) {
    return phi_new * phi_old * phi_old - phi_new;
}

double gamma_from_physical(double gamma_physical) {
    if (gamma_physical < 0.0)
        throw std::invalid_argument("gamma_from_physical: negative surface tension");
    return 3.0 / (2.0 * std::sqrt(2.0)) * gamma_physical;
}

}  // namespace fsi
