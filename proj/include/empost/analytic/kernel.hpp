#pragma once

namespace empost::analytic {

// Diffusion boundary kernel
//   g(x, t) = 2*sqrt(kappa*t/pi)*exp(-x^2/(4*kappa*t)) -
//             x*erfc(x/(2*sqrt(kappa*t)))
// Satisfies dg/dt = sqrt(kappa/(pi*t))*exp(-x^2/(4*kappa*t)) and
// dg/dx = -erfc(x/(2*sqrt(kappa*t))), g(x, 0+) = 0.
double g_kernel(double x, double t, double kappa);

// Image-shift arguments of the reflected half-line kernels:
//   zeta1 = (2p+2)L - x, zeta2 = (2p+1)L - x,
//   zeta3 = 2pL + x,      zeta4 = (2p+1)L + x.
double zeta(int variant, int p, double x, double length);

}  // namespace empost::analytic
