#pragma once

#include <array>
#include <optional>
#include <vector>

#include "heunpot/heun.hpp"
#include "heunpot/potential.hpp"

namespace heunpot {

enum class Scheme { frobenius, hypexp, closed_form_2f1 };

// Prefactor exponents alpha_i at the three singularities: roots of
// alpha_i^2 + (m_i - 1) alpha_i + C_i = 0,
// C_i = km (E r(a_i) - v(a_i)) / prod_{n != i} (a_i - a_n)^2.
struct ExponentSet {
    cplx alpha1{0}, alpha2{0}, alpha3{0};
    std::array<int, 3> sign_choice{+1, +1, +1};

    cplx alpha(int i) const {
        return i == 0 ? alpha1 : (i == 1 ? alpha2 : alpha3);
    }
};

// All sign combinations (up to 8; fewer when a discriminant vanishes).
std::vector<ExponentSet> exponents(const PotentialSpec& spec, double E);

// The single combination selected by signs (+1: principal root).
ExponentSet exponents_for(const PotentialSpec& spec, double E,
                          std::array<int, 3> signs);

// Heun parameters for the given spec/exponents, slots taken in spec order:
//   gamma,delta,epsilon = 2 alpha_i + m_i
//   alpha+beta = gamma+delta+epsilon-1,
//   alpha*beta = S^2 + S(sum m - 1) + km (E r4 - v4), S = alpha1+alpha2+alpha3
//   q from the singularity-symmetric bilinear form plus the km(E r3.. - v3..)
//   term; alpha is the root with the smaller real part.
HeunParams heun_params(const PotentialSpec& spec, double E,
                       const ExponentSet& exps);

// Parameters of the 1/z potential family with the constrained z^-2 slot:
// V = V0 + V1/z + (km sigma^2 V3^2)/z^2 + V3/z^3, z = sqrt(1+e^{2(x-x0)/sigma}).
struct ClosedForm35 {
    double V0 = 0, V1 = 0, V3 = 0;
    double sigma = 1, x0 = 0, hbar = 1, mass = 1;
    cplx alpha0{0}, alpha1{0}, alpha2{0}; // principal-branch exponents
};

struct Wavefunction {
    PotentialSpec spec;        // as supplied
    PotentialSpec cspec;       // class-ordered slots (map frame)
    PotentialSpec pspec;       // anchor-first slots (Heun frame)
    double energy = 0;
    ExponentSet exps;          // pspec slot order
    HeunParams heun;           // pspec frame, general position
    CanonicalHeun canonical;   // heun shifted/scaled to (0,1,a)
    Scheme scheme = Scheme::frobenius;
    Branch branch{};
    double disk_radius = 0;    // Frobenius radius in z units around the anchor
    double eval_tol = 1e-10;   // series truncation tolerance for eval_z/eval_x
    std::optional<ClosedForm35> cf35;

    // psi at a point of the branch: prefactor prod |z-a_i|^alpha_i times H
    // (constant sign factors dropped). OutsideDisk/OutOfBranch propagate.
    cplx eval_z(double z) const;
    cplx eval_x(double x) const;
};

Wavefunction build_wavefunction(const PotentialSpec& spec, double E,
                                std::array<int, 3> signs, Scheme scheme);

struct CipReport {
    bool is_reducible = false;
    std::array<int, 3> which_exps{+1, +1, +1};
    double eps_residual = 0; // |epsilon| for the best sign choice
    double q_residual = 0;   // |q - a*alpha*beta| in canonical position
};

// Scan sign choices in the class frame for the 2F1 reduction conditions
// epsilon = 0 and q = a*alpha*beta (canonical position).
CipReport cip_reduction_check(const PotentialSpec& spec, double E);

// Conditionally-integrable restrictions for the three reducible classes,
// canonical singularities (0,1,a): returns (V0, V1) making the reduction
// conditions hold for every energy. V-coefficients are v_k/sigma^2.
std::pair<double, double> table2_restrict(const Triad& class_triad, double a,
                                          double V2, double V3, double V4,
                                          double sigma, double hbar = 1.0,
                                          double mass = 1.0);

// The closed-form family V = V0 + V1/z + (km sigma^2 V3^2) / z^2 + V3/z^3
// with z(x) = sqrt(1 + e^{2(x-x0)/sigma}); builds the exponent set for E.
ClosedForm35 make_closed_form_35(double V0, double V1, double V3, double sigma,
                                 double x0, double E, double hbar = 1.0,
                                 double mass = 1.0);

// Explicit two-term 2F1 solution of that family (GammaDegenerate when the
// lower parameter gamma-1 is a non-positive integer).
Wavefunction closed_form_35(const ClosedForm35& params, double E);

// Potential value V(x) of the closed-form family.
double cf35_potential(const ClosedForm35& params, double x);

// The equivalent general-pipeline spec: triad (1,1,-1), a = (-1,1,0),
// v = sigma^2 (0, V3, km sigma^2 V3^2, V1, V0).
PotentialSpec cf35_equivalent_spec(const ClosedForm35& params);

} // namespace heunpot
