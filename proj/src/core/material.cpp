#include "empost/core/material.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace empost::core {

namespace {
void require_positive(double v, const char* name) {
  if (!(v > 0.0)) {
    throw std::invalid_argument(std::string("MaterialParams: ") + name +
                                " must be strictly positive");
  }
}
}  // namespace

void MaterialParams::validate() const {
  require_positive(e_charge, "e_charge");
  require_positive(rho, "rho");
  require_positive(z_star, "z_star");
  require_positive(omega_atomic, "omega_atomic");
  require_positive(bulk_modulus, "bulk_modulus");
  require_positive(d0, "d0");
  require_positive(ea_ev, "ea_ev");
  require_positive(k_boltzmann, "k_boltzmann");
  require_positive(temperature, "temperature");
  require_positive(sigma_crit, "sigma_crit");
  require_positive(delta_void, "delta_void");
}

double drive_force(double current_density, const MaterialParams& mat) {
  return mat.e_charge * mat.rho * current_density * mat.z_star /
         mat.omega_atomic;
}

double diffusivity(const MaterialParams& mat) {
  const double kbt = mat.k_boltzmann * mat.temperature;
  const double ea_joule = mat.ea_ev * 1.602176634e-19;
  const double d_a = mat.d0 * std::exp(-ea_joule / kbt);
  return d_a * mat.bulk_modulus * mat.omega_atomic / kbt;
}

}  // namespace empost::core
