#pragma once

namespace empost::core {

// Wire material properties and physical constants. SI units; activation
// energy in eV, temperature in K.
struct MaterialParams {
  double e_charge = 1.602176634e-19;  // C
  double rho = 2.2e-8;                // ohm*m
  double z_star = 10.0;
  double omega_atomic = 8.78e-30;     // m^3
  double bulk_modulus = 1.0e11;       // Pa
  double d0 = 5.2e-5;                 // m^2/s
  double ea_ev = 1.1;                 // eV
  double k_boltzmann = 1.380649e-23;  // J/K
  double temperature = 373.15;        // K
  double sigma_crit = 5.0e8;          // Pa
  double delta_void = 1.0e-9;         // m, effective void interface thickness

  void validate() const;  // throws std::invalid_argument on nonpositive fields
};

// EM driving force G = e*rho*J*Z'/Omega. Sign follows the current density.
double drive_force(double current_density, const MaterialParams& mat);

// Stress diffusivity kappa = D_a*B*Omega/(k_B*T) with the Arrhenius
// D_a = D0*exp(-Ea/(k_B*T)).
double diffusivity(const MaterialParams& mat);

}  // namespace empost::core
