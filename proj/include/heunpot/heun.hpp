#pragma once

#include <vector>

#include "heunpot/special_functions.hpp"

namespace heunpot {

// General Heun equation in general position:
//   u'' + (gamma/(z-a1) + delta/(z-a2) + epsilon/(z-a3)) u'
//      + (alpha*beta*z - q) / ((z-a1)(z-a2)(z-a3)) u = 0
// subject to gamma+delta+epsilon = alpha+beta+1.
struct HeunParams {
    cplx a1{0}, a2{1}, a3{2};
    cplx q{0};
    cplx alpha{0}, beta{0}, gamma{1}, delta{1}, epsilon{1};

    cplx fuchs_residual() const { return gamma + delta + epsilon - (alpha + beta + 1.0); }
    bool is_canonical(double tol = 1e-12) const {
        return std::abs(a1) < tol && std::abs(a2 - 1.0) < tol;
    }
};

// w = (z - shift)/scale
struct AffineMap {
    cplx shift{0}, scale{1};
    cplx forward(cplx z) const { return (z - shift) / scale; }
    cplx inverse(cplx w) const { return shift + scale * w; }
};

struct CanonicalHeun {
    HeunParams params; // a1,a2,a3 = 0,1,a
    AffineMap map;     // w(z); params.q is the transformed accessory parameter
};

enum class MuChoice { zero, one_minus_gamma };
enum class Gamma0Choice { gamma, alpha, beta };

struct SeriesSolution {
    cplx mu{0};
    std::vector<cplx> coeffs; // c_0 = 1
    int n_used{0};
    double tail_estimate{0};
};

struct FrobeniusResult {
    cplx value;
    SeriesSolution series;
};

struct TerminationRoot {
    cplx q;
    std::vector<cplx> coeffs; // c_0..c_N at this root
};

// Shift/scale to canonical position: a_c = (a3-a1)/(a2-a1),
// q_c = (q - alpha*beta*a1)/(a2-a1); exponent parameters unchanged.
CanonicalHeun to_canonical(const HeunParams& p);

// Power series z^mu sum c_n z^n about w=0; convergence disk |z| < min(|a|,1).
FrobeniusResult frobenius_eval(const HeunParams& canonical, MuChoice mu_choice,
                               cplx z, double tol);

// Expansion sum c_n 2F1(alpha,beta;gamma0-n;z), normalized to value 1 at z=0.
cplx hypergeometric_expansion_eval(const HeunParams& canonical, Gamma0Choice g0,
                                   cplx z, double tol);

// Accessory-parameter roots making the Frobenius series a degree-N polynomial.
// Requires mu+N+alpha = 0 or mu+N+beta = 0 (else PreconditionPNnonzero).
std::vector<TerminationRoot> frobenius_termination(const HeunParams& family,
                                                   MuChoice mu_choice, int N);

// Accessory-parameter roots truncating the hypergeometric expansion after
// N+1 terms. Requires the matching condition for gamma0_choice:
//   gamma0=gamma: epsilon = -N;  gamma0=alpha: epsilon+gamma-alpha = -N;
//   gamma0=beta:  epsilon+gamma-beta = -N   (else PreconditionEq32).
std::vector<TerminationRoot> hypergeom_termination(const HeunParams& family,
                                                   Gamma0Choice g0, int N);

// Roots of c[0] + c[1] x + ... + c[d] x^d via companion-matrix eigenvalues,
// polished by Newton iteration.
std::vector<cplx> poly_roots(const std::vector<cplx>& coeffs);

} // namespace heunpot
