#include "heunpot/potential.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "heunpot/errors.hpp"
#include "heunpot/special_functions.hpp"

namespace heunpot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

cplx cx(double v) { return cplx(v, 0.0); }

// Class row indices, in canonical_classes() order. The numeric suffix matches
// the doubled-triad representative, not any external numbering.
enum Row {
    kRow111 = 0,  // m = (1, 1, 1)
    kRow11h,      // (1, 1, 1/2)
    kRow110,      // (1, 1, 0)
    kRow11mh,     // (1, 1, -1/2)
    kRow11m1,     // (1, 1, -1)
    kRow1hh,      // (1, 1/2, 1/2)
    kRow1h0,      // (1, 1/2, 0)
    kRow1hmh,     // (1, 1/2, -1/2)
    kRow100,      // (1, 0, 0)
    kRowhhh,      // (1/2, 1/2, 1/2)
    kRowhh0,      // (1/2, 1/2, 0)
};

int row_of(const Triad& t) { return class_index(canonical_class(t)); }

// maps that live above every singularity (their branch is (max a_i, inf))
bool lives_above_all(int row) {
    return row == kRow111 || row == kRow110 || row == kRow11m1 || row == kRow100 ||
           row == kRowhhh || row == kRowhh0;
}

// T(y,c) = artanh(sqrt(y)/sqrt(c))/sqrt(c): the sqrt(y) factor is real on the
// branch (y > 0); sqrt(c) continues to the principal complex root so c < 0
// turns artanh into arctan with the right sign.
cplx T_fun(double y, double c) {
    cplx sc = std::sqrt(cx(c));
    return std::atanh(std::sqrt(y) / sc) / sc;
}
cplx U_fun(double y, double c) {
    cplx sc = std::sqrt(cx(c));
    return sc * std::atanh(std::sqrt(y) / sc);
}

double reference_z(const Branch& br) {
    return std::isfinite(br.hi) ? 0.5 * (br.lo + br.hi)
                                : br.lo + std::max(1.0, std::abs(br.lo));
}

// ---- adaptive Gauss-Kronrod 15(7) ----

struct GK {
    double integral, error;
};

template <class F>
GK gk15(const F& f, double a, double b) {
    static const double xgk[8] = {0.991455371120813, 0.949107912342759,
                                  0.864864423359769, 0.741531185599394,
                                  0.586087235467691, 0.405845151377397,
                                  0.207784955007898, 0.0};
    static const double wgk[8] = {0.022935322010529, 0.063092092629979,
                                  0.104790010322250, 0.140653259715525,
                                  0.169004726639267, 0.190350578064785,
                                  0.204432940075298, 0.209482141084728};
    static const double wg[4] = {0.129484966168870, 0.279705391489277,
                                 0.381830050505119, 0.417959183673469};
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = wgk[7] * fc, resg = wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        double fv = f(c - h * xgk[j]) + f(c + h * xgk[j]);
        resk += wgk[j] * fv;
        if (j % 2 == 1) resg += wg[j / 2] * fv;
    }
    return {resk * h, std::abs((resk - resg) * h)};
}

template <class F>
double adaptive_segment(const F& f, double a, double b, double tol, int depth) {
    GK g = gk15(f, a, b);
    if (g.error <= tol || !std::isfinite(g.integral)) {
        if (!std::isfinite(g.integral))
            throw QuadratureFailure("map integrand is not finite inside the branch");
        return g.integral;
    }
    if (depth > 52)
        throw QuadratureFailure("adaptive refinement exhausted on the map integral");
    double c = 0.5 * (a + b);
    return adaptive_segment(f, a, c, 0.5 * tol, depth + 1) +
           adaptive_segment(f, c, b, 0.5 * tol, depth + 1);
}

template <class F>
double integrate(const F& f, double a, double b) {
    if (a == b) return 0.0;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    return sign * adaptive_segment(f, a, b, 1e-12, 0);
}

// closed-form x(z) in complex arithmetic; caller checks Im
cplx closed_x(const PotentialSpec& s, int row, double z) {
    const double a1 = s.a[0], a2 = s.a[1], a3 = s.a[2];
    const double sg = s.sigma, x0 = s.x0;
    switch (row) {
        case kRow111: {
            double x = x0;
            for (int i = 0; i < 3; ++i) {
                double prod = 1.0;
                for (int j = 0; j < 3; ++j)
                    if (j != i) prod *= s.a[i] - s.a[j];
                x += sg * std::log(z - s.a[i]) / prod;
            }
            return cx(x);
        }
        case kRow11h:
            return cx(x0) + 2.0 * sg / (a1 - a2) *
                                (T_fun(z - a3, a2 - a3) - T_fun(z - a3, a1 - a3));
        case kRow110:
            return cx(x0 + sg / (a1 - a2) * std::log((z - a1) / (z - a2)));
        case kRow11mh:
            return cx(x0) + 2.0 * sg / (a1 - a2) *
                                (U_fun(z - a3, a2 - a3) - U_fun(z - a3, a1 - a3));
        case kRow11m1:
            return cx(x0 + sg / (a1 - a2) *
                               ((a1 - a3) * std::log(z - a1) + (a3 - a2) * std::log(z - a2)));
        case kRow1hh: {
            cplx root = std::sqrt(cx((a1 - a2) * (a1 - a3)));
            cplx inner = std::sqrt(cx((a1 - a2) * (z - a2))) +
                         std::sqrt(cx((a1 - a3) * (z - a3)));
            cplx lg = std::log(cx(a1 - z)) -
                      std::log(inner * inner - cx((a2 - a3) * (a2 - a3)));
            // pivot below both halves: the continued log runs backwards
            double orient = a1 > a2 ? 1.0 : -1.0;
            return cx(x0) + orient * sg / root * lg;
        }
        case kRow1h0: {
            cplx root = std::sqrt(cx(a1 - a2));
            return cx(x0) - 2.0 * sg / root * std::atanh(std::sqrt(z - a2) / root);
        }
        case kRow1hmh: {
            cplx s12 = std::sqrt(cx(a1 - a2)), s13 = std::sqrt(cx(a1 - a3));
            cplx arg = s12 * std::sqrt(z - a3) / (s13 * std::sqrt(z - a2));
            cplx term = std::sqrt(cx((a1 - a3) / (a1 - a2))) * std::atanh(arg);
            return cx(x0 + 2.0 * sg * std::log(std::sqrt(z - a2) + std::sqrt(z - a3))) -
                   2.0 * sg * term;
        }
        case kRow100:
            return cx(x0 + sg * std::log(z - a1));
        case kRowhhh: {
            double m_ell = (a2 - a3) / (a2 - a1);
            double srt = std::sqrt(a1 - a2);
            double s_amp = std::sqrt((a1 - a2) / (z - a2));
            return cx(x0 - 2.0 * sg * elliptic_F(std::asin(s_amp), m_ell) / srt);
        }
        case kRowhh0:
            return cx(x0 + 2.0 * sg * std::log(std::sqrt(z - a1) + std::sqrt(z - a2)));
    }
    throw UnsupportedTriad("unknown canonical class row");
}

double quadrature_x(const PotentialSpec& s, const Branch& br, double z) {
    const double zr = reference_z(br);
    auto f = [&s](double t) { return 1.0 / rho(s, t); };
    return s.x0 + integrate(f, zr, z);
}

} // namespace

void PotentialSpec::validate() const {
    if (!is_admissible(triad))
        throw UnsupportedTriad("exponent triple outside the admissible set");
    for (double ai : a)
        if (!std::isfinite(ai)) throw ParameterOutOfRange("singular position not finite");
    for (double vi : v)
        if (!std::isfinite(vi)) throw ParameterOutOfRange("strength coefficient not finite");
    if (!std::isfinite(sigma) || sigma == 0.0)
        throw ParameterOutOfRange("length scale must be finite and nonzero");
    if (!std::isfinite(x0)) throw ParameterOutOfRange("origin must be finite");
    if (!(hbar > 0) || !std::isfinite(hbar))
        throw ParameterOutOfRange("hbar must be positive");
    if (!(mass > 0) || !std::isfinite(mass))
        throw ParameterOutOfRange("mass must be positive");
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            double scale = std::max({1.0, std::abs(a[i]), std::abs(a[j])});
            if (std::abs(a[i] - a[j]) <= 1e-12 * scale)
                throw CoincidentSingularities("singular positions must be distinct");
        }
}

double RationalPotential::r_at(double z) const {
    double acc = 0.0;
    for (int k = 4; k >= 0; --k) acc = acc * z + r[k];
    return acc;
}

double RationalPotential::v_at(double z) const {
    double acc = 0.0;
    for (int k = 4; k >= 0; --k) acc = acc * z + v[k];
    return acc;
}

RationalPotential build_r_poly(const PotentialSpec& spec) {
    RationalPotential out;
    out.v = spec.v;
    std::array<double, 5> poly{spec.sigma * spec.sigma, 0, 0, 0, 0};
    int degree = 0;
    for (int i = 0; i < 3; ++i) {
        int e = 2 - spec.triad.twom[i];
        if (e < 0 || e > 4)
            throw NonIntegerExponent("denominator exponent outside the polynomial range");
        for (int k = 0; k < e; ++k) {
            // multiply by (z - a_i)
            if (degree >= 4)
                throw NonIntegerExponent("denominator degree exceeds quartic bound");
            for (int d = degree; d >= 0; --d) {
                poly[d + 1] += poly[d];
                poly[d] *= -spec.a[i];
            }
            ++degree;
        }
    }
    out.r = poly;
    return out;
}

double potential_value(const PotentialSpec& spec, double z) {
    spec.validate();
    RationalPotential rp = build_r_poly(spec);
    double r = rp.r_at(z);
    double scale = 0.0, zp = 1.0;
    for (int k = 0; k <= 4; ++k) {
        scale += std::abs(rp.r[k]) * std::abs(zp);
        zp *= z;
    }
    if (r == 0.0 || std::abs(r) < 1e-15 * scale)
        throw PoleAtZ("potential denominator vanishes here");
    return rp.v_at(z) / r;
}

double rho(const PotentialSpec& spec, double z) {
    double p = 1.0 / spec.sigma;
    for (int i = 0; i < 3; ++i) {
        double d = z - spec.a[i];
        switch (spec.triad.twom[i]) {
            case 2: p *= d; break;
            case 0: break;
            case -2:
                if (d == 0.0) throw PoleAtZ("map derivative pole at a singular position");
                p /= d;
                break;
            case 1:
                if (d <= 0.0)
                    throw BranchViolation("half-integer factor needs z above its position");
                p *= std::sqrt(d);
                break;
            case -1:
                if (d <= 0.0)
                    throw BranchViolation("half-integer factor needs z above its position");
                p /= std::sqrt(d);
                break;
            default:
                throw UnsupportedTriad("exponent outside the admissible set");
        }
    }
    return p;
}

PotentialSpec to_class_order(const PotentialSpec& spec) {
    spec.validate();
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int i, int j) {
        if (spec.triad.twom[i] != spec.triad.twom[j])
            return spec.triad.twom[i] > spec.triad.twom[j];
        return spec.a[i] > spec.a[j];
    });
    PotentialSpec out = spec;
    for (int k = 0; k < 3; ++k) {
        out.triad.twom[k] = spec.triad.twom[idx[k]];
        out.a[k] = spec.a[idx[k]];
    }
    // all-half class: roles are (largest, smallest, middle) so the elliptic
    // modulus lands in (0,1)
    if (out.triad.twom == std::array<int, 3>{1, 1, 1})
        std::swap(out.a[1], out.a[2]);
    return out;
}

Branch branch_of(const PotentialSpec& class_ordered) {
    PotentialSpec cs = to_class_order(class_ordered);
    const int row = row_of(cs.triad);
    const bool above_all = lives_above_all(row);
    double lo = -kInf;
    int slot = -1;
    for (int i = 0; i < 3; ++i) {
        bool constrains = above_all || (cs.triad.twom[i] % 2 != 0);
        if (constrains && cs.a[i] > lo) {
            lo = cs.a[i];
            slot = i;
        }
    }
    double hi = kInf;
    for (int i = 0; i < 3; ++i)
        if (cs.a[i] > lo) hi = std::min(hi, cs.a[i]);
    return {lo, hi, slot};
}

bool has_closed_form_map(const PotentialSpec& class_ordered) {
    PotentialSpec cs = to_class_order(class_ordered);
    switch (row_of(cs.triad)) {
        case kRow1hh:
            // real for the pivot above both half positions or below both
            return cs.a[0] > cs.a[1] || cs.a[0] < cs.a[2];
        case kRow1hmh:
            return cs.a[1] < cs.a[2];
        default:
            return true;
    }
}

double x_of_z(const PotentialSpec& spec, double z) {
    PotentialSpec cs = to_class_order(spec);
    Branch br = branch_of(cs);
    if (!(z > br.lo && z < br.hi))
        throw BranchViolation("argument outside the working interval of the map");
    if (has_closed_form_map(cs)) {
        cplx xc = closed_x(cs, row_of(cs.triad), z);
        if (std::abs(xc.imag()) <= 1e-9 * (1.0 + std::abs(xc.real())))
            return xc.real();
    }
    return quadrature_x(cs, br, z);
}

double z_of_x(const PotentialSpec& spec, double x) {
    PotentialSpec cs = to_class_order(spec);
    Branch br = branch_of(cs);
    const int row = row_of(cs.triad);
    const double a1 = cs.a[0], a2 = cs.a[1], sg = cs.sigma, x0 = cs.x0;

    auto branch_check = [&](double z) {
        if (!std::isfinite(z) || !(z > br.lo && z < br.hi))
            throw OutOfBranch("position maps outside the working interval");
        return z;
    };

    switch (row) {
        case kRow110: {
            double en = std::exp((a1 - a2) * (x - x0) / sg);
            return branch_check((a1 - a2 * en) / (1.0 - en));
        }
        case kRow1h0: {
            if (a1 > a2) {
                double u = std::sqrt(a1 - a2) * (x0 - x) / (2.0 * sg);
                if (u <= 0.0) throw OutOfBranch("position on the wrong side of the origin");
                double t = std::tanh(u);
                return branch_check(a2 + (a1 - a2) * t * t);
            }
            double u = std::sqrt(a2 - a1) * (x - x0) / (2.0 * sg);
            if (u <= 0.0 || u >= M_PI / 2)
                throw OutOfBranch("position outside the image of the map");
            double t = std::tan(u);
            return branch_check(a2 + (a2 - a1) * t * t);
        }
        case kRow100:
            return branch_check(a1 + std::exp((x - x0) / sg));
        case kRowhhh: {
            double srt = std::sqrt(a1 - a2);
            double m_ell = (a2 - cs.a[2]) / (a2 - a1);
            double u = srt * (x0 - x) / (2.0 * sg);
            double K = elliptic_K(m_ell);
            if (u <= 0.0 || u >= K)
                throw OutOfBranch("position outside the fundamental elliptic interval");
            double sn = jacobi_sn({u, m_ell}, 1e-14);
            return branch_check(a2 + (a1 - a2) / (sn * sn));
        }
        case kRowhh0: {
            double t = std::exp((x - x0) / (2.0 * sg));
            if (t * t <= a1 - a2)
                throw OutOfBranch("position below the fold of the map");
            double w = t + (a2 - a1) / t;
            return branch_check(a1 + 0.25 * w * w);
        }
        default:
            break;
    }

    // numeric inversion: x(z) is strictly monotone on the branch
    const double zr = reference_z(br);
    const bool increasing = rho(cs, zr) > 0;
    auto fval = [&](double z) { return x_of_z(cs, z) - x; };

    const double ftol = 1e-13 * (1.0 + std::abs(x));
    double z1 = zr, f1 = fval(z1);
    if (std::abs(f1) < ftol) return z1;
    // move toward lo when overshooting in an increasing map (and vice versa)
    bool go_down = (f1 > 0.0) == increasing;
    const double z_start = z1;
    double z2 = z1, f2 = f1;
    bool bracketed = false;
    for (int k = 1; k <= 200 && !bracketed; ++k) {
        if (go_down) {
            z2 = br.lo + (z_start - br.lo) * std::pow(0.5, k);
        } else if (std::isfinite(br.hi)) {
            z2 = br.hi - (br.hi - z_start) * std::pow(0.5, k);
        } else {
            z2 = z_start + std::max(1.0, std::abs(z_start)) * (std::pow(2.0, k) - 1.0);
            if (!std::isfinite(z2)) break;
        }
        f2 = fval(z2);
        bracketed = (f1 > 0) != (f2 > 0);
        if (!bracketed) {
            z1 = z2; // same sign: keep as the tight end of the bracket
            f1 = f2;
        }
    }
    if (!bracketed)
        throw OutOfBranch("position outside the image of the map");

    double zl = std::min(z1, z2), zh = std::max(z1, z2);
    double fl = z1 < z2 ? f1 : f2;
    double z = 0.5 * (zl + zh);
    for (int it = 0; it < 120; ++it) {
        double f = fval(z);
        if (std::abs(f) < ftol) return z;
        if ((f > 0) == (fl > 0)) {
            zl = z;
            fl = f;
        } else {
            zh = z;
        }
        double step = -f * rho(cs, z); // Newton with dx/dz = 1/rho
        double zn = z + step;
        if (!(zn > zl && zn < zh)) zn = 0.5 * (zl + zh);
        if (std::abs(zn - z) < 1e-14 * (1.0 + std::abs(zn))) return zn;
        z = zn;
    }
    throw InversionFailure("map inversion did not converge");
}

std::string map_description(const Triad& class_triad) {
    switch (row_of(class_triad)) {
        case kRow111:
            return "x = x0 + sigma*sum_i log(z-a_i)/prod_{j!=i}(a_i-a_j); branch above all a_i";
        case kRow11h:
            return "x = x0 + 2*sigma*(T(z-a3,a2-a3)-T(z-a3,a1-a3))/(a1-a2) with "
                   "T(y,c)=artanh(sqrt(y)/sqrt(c))/sqrt(c)";
        case kRow110:
            return "x = x0 + sigma*log((z-a1)/(z-a2))/(a1-a2); inverse z(x) in closed form";
        case kRow11mh:
            return "x = x0 + 2*sigma*(U(z-a3,a2-a3)-U(z-a3,a1-a3))/(a1-a2) with "
                   "U(y,c)=sqrt(c)*artanh(sqrt(y)/sqrt(c))";
        case kRow11m1:
            return "x = x0 + sigma*((a1-a3)*log(z-a1)+(a3-a2)*log(z-a2))/(a1-a2)";
        case kRow1hh:
            return "x = x0 + sigma*(log(a1-z) - log((sqrt((a1-a2)(z-a2))+sqrt((a1-a3)(z-a3)))^2"
                   " - (a2-a3)^2))/sqrt((a1-a2)(a1-a3))";
        case kRow1h0:
            return "x = x0 - 2*sigma*artanh(sqrt((z-a2)/(a1-a2)))/sqrt(a1-a2); "
                   "z(x) = a2 + (a1-a2)*tanh^2(sqrt(a1-a2)*(x0-x)/(2*sigma))";
        case kRow1hmh:
            return "x = x0 + 2*sigma*(log(sqrt(z-a2)+sqrt(z-a3)) - "
                   "sqrt((a1-a3)/(a1-a2))*artanh(sqrt(a1-a2)*sqrt(z-a3)/"
                   "(sqrt(a1-a3)*sqrt(z-a2))))";
        case kRow100:
            return "x = x0 + sigma*log(z-a1); z(x) = a1 + exp((x-x0)/sigma)";
        case kRowhhh:
            return "z(x) = a2 + (a1-a2)/sn^2(sqrt(a1-a2)*(x0-x)/(2*sigma) | m), "
                   "m = (a2-a3)/(a2-a1), slots ordered (largest, smallest, middle)";
        case kRowhh0:
            return "x = x0 + 2*sigma*log(sqrt(z-a1)+sqrt(z-a2)); "
                   "z(x) = a1 + (t+(a2-a1)/t)^2/4, t = exp((x-x0)/(2*sigma))";
    }
    throw UnsupportedTriad("unknown canonical class row");
}

} // namespace heunpot
