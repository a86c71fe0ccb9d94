#pragma once

#include <complex>

#include "heunpot/errors.hpp"

namespace heunpot {

using cplx = std::complex<double>;

struct HypergeometricArgs {
    cplx alpha, beta, gamma;
    cplx z;
};

struct EllipticArgs {
    double u;
    double m_param; // parameter convention: sn(u|0) = sin u
};

// Principal-branch complex Gamma (Lanczos approximation + reflection).
cplx gamma_complex(cplx z);

// Gauss 2F1, principal branch. Maclaurin for small |z|; fractional-linear
// connection formulas otherwise. Real z >= 1 is on the branch cut:
// ArgumentOnCut unless the series terminates.
cplx gauss_2f1(const HypergeometricArgs& args, double tol);

// Same, but a real argument z >= 1 is evaluated as the limit from above the
// cut (z + i*0+). Used internally where the working variable lives on [1,oo).
cplx gauss_2f1_above_cut(const HypergeometricArgs& args, double tol);

// Jacobi sn in the parameter convention, real u, m_param in [0,1].
double jacobi_sn(const EllipticArgs& args, double tol);

// Complete elliptic integral of the first kind, parameter convention, via AGM.
double elliptic_K(double m_param);

// Incomplete elliptic integral of the first kind F(phi|m), |phi| <= pi/2.
double elliptic_F(double phi, double m_param);

// Carlson symmetric integral R_F (duplication algorithm).
double carlson_rf(double x, double y, double z);

} // namespace heunpot
