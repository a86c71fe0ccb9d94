#pragma once

#include <array>
#include <string>

#include "heunpot/triads.hpp"

namespace heunpot {

// One member of the potential family: V(z) = v(z)/r(z) with
// r(z) = sigma^2 prod (z-a_i)^(2-2m_i), sampled along z(x) defined by
// dz/dx = rho = (1/sigma) prod (z-a_i)^(m_i).
//
// v-coefficients carry energy units times the r-polynomial's length powers,
// so V = v/r is an energy directly; hbar and mass enter only through the
// Schrodinger combination km = 2*mass/hbar^2.
struct PotentialSpec {
    Triad triad;
    std::array<double, 3> a{0.0, 1.0, 2.0};
    std::array<double, 5> v{};
    double sigma = 1.0;
    double x0 = 0.0;
    double hbar = 1.0;
    double mass = 1.0;

    double m(int i) const { return triad.m(i); }
    double km() const { return 2.0 * mass / (hbar * hbar); }
    // throws UnsupportedTriad / CoincidentSingularities / ParameterOutOfRange
    void validate() const;
};

struct RationalPotential {
    std::array<double, 5> r{};
    std::array<double, 5> v{};

    double r_at(double z) const;
    double v_at(double z) const;
};

// Expand r(z) exactly (integer exponents 2-2m_i in 0..4).
RationalPotential build_r_poly(const PotentialSpec& spec);

// V(z) = v(z)/r(z); PoleAtZ if r(z) = 0.
double potential_value(const PotentialSpec& spec, double z);

// Signed dz/dx: integer powers keep the sign of (z-a_i); half-integer powers
// require z > a_i and use the positive square root.
double rho(const PotentialSpec& spec, double z);

// Slots reordered into the canonical class (m non-increasing); ties between
// equal m broken by the configuration the closed-form map prefers.
PotentialSpec to_class_order(const PotentialSpec& spec);

// Maximal working interval of the map for the class-ordered spec:
// lo = largest singularity that must stay below z (all half-integer-exponent
// positions, plus every position for classes whose map lives above all
// singularities); hi = next singularity above lo, or +infinity.
// lo is always one of the a_i; anchor_slot names it (class-order index).
struct Branch {
    double lo;
    double hi; // may be +infinity
    int anchor_slot;
};
Branch branch_of(const PotentialSpec& class_ordered);

// x(z) on the branch: closed form per class where it stays real, adaptive
// quadrature otherwise. dx/dz = 1/rho.
double x_of_z(const PotentialSpec& spec, double z);

// Inverse map: closed form for the classes listing z(x) explicitly,
// bracketed Newton/bisection on x_of_z otherwise.
double z_of_x(const PotentialSpec& spec, double x);

// True when the class-ordered configuration uses the closed-form x(z) path.
bool has_closed_form_map(const PotentialSpec& class_ordered);

// Short human-readable description of the class's map, used by the catalog.
std::string map_description(const Triad& class_triad);

} // namespace heunpot
