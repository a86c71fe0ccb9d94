#pragma once

#include <functional>
#include <vector>

#include "heunpot/solution.hpp"

namespace heunpot {

struct OdeSolution {
    std::vector<double> x;
    std::vector<cplx> psi;
    std::vector<cplx> dpsi;
};

// Integrate psi'' + km (E - V(x)) psi = 0 with a Dormand-Prince 5(4)
// embedded pair, sampling at the given points (which must be monotone from
// x_start toward x_end). StepUnderflow when the controller collapses.
OdeSolution ode_integrate(const std::function<double(double)>& V, double km,
                          double E, double x_start, double x_end, cplx psi0,
                          cplx dpsi0, double tol,
                          const std::vector<double>& samples);

OdeSolution ode_integrate(const PotentialSpec& spec, double E, double x_start,
                          double x_end, cplx psi0, cplx dpsi0, double tol,
                          const std::vector<double>& samples);

struct ResidualReport {
    std::vector<double> grid;
    std::vector<double> residuals;
    double max_rel_residual = 0;
    double scale = 0; // normalization: max_j of |km E psi| and |km (E-V) psi|
};

// residual_j = |psi''(x_j) + km (E - V(x_j)) psi(x_j)| with psi'' from
// Richardson-extrapolated 6th-order stencils taken along z (where the series
// evaluation is direct) and mapped through the chain rule; the spacing adapts
// to the local curvature and to the distance from the domain edges, refining
// until the measured extrapolation leftover is far below the local term size.
ResidualReport schrodinger_residual(const Wavefunction& psi,
                                    const std::vector<double>& grid);

// {z,x} = z'''/z' - (3/2)(z''/z')^2 by 6th-order finite differences.
double schwarzian(const std::function<double(double)>& zmap, double x);

// Max over the given z points of
//   | rho^2 I(z) + (1/2){z,x} - km (E - V(x)) |,
// I = g - f'/2 - f^2/4 from the constructed Heun coefficients. Ties the
// coordinate maps, the potential, and the Heun parameters together.
double bose_consistency_check(const PotentialSpec& spec, double E,
                              const std::vector<double>& z_points);

// Default evaluation window for residual checks: 200-point x-grid spanning
// z in [anchor + lo_frac*R, anchor + hi_frac*R], R = min(Frobenius radius,
// branch length).
std::vector<double> default_verify_grid(const Wavefunction& wf, int n = 200,
                                        double lo_frac = 0.08,
                                        double hi_frac = 0.6);

} // namespace heunpot
