#include "heunpot/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace heunpot {

namespace {

inline cplx cx(double v) { return cplx(v, 0.0); }

using State = std::array<cplx, 2>; // (psi, psi')

// Dormand-Prince 5(4) tableau
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
// b - b*: weights of the embedded error estimate
constexpr double kE[7] = {71.0 / 57600,      0.0,         -71.0 / 16695,
                          71.0 / 1920,       -17253.0 / 339200,
                          22.0 / 525,        -1.0 / 40};

// stencil weights: f'' (7 pt), f' (7 pt), f''' (9 pt), all 6th order
constexpr double kD2[7] = {2, -27, 270, -490, 270, -27, 2};
constexpr double kD1[7] = {-1, 9, -45, 0, 45, -9, 1};
constexpr double kD3[9] = {-7.0 / 240, 3.0 / 10,   -169.0 / 120,
                           61.0 / 30,  0.0,        -61.0 / 30,
                           169.0 / 120, -3.0 / 10, 7.0 / 240};

} // namespace

OdeSolution ode_integrate(const std::function<double(double)>& V, double km,
                          double E, double x_start, double x_end, cplx psi0,
                          cplx dpsi0, double tol,
                          const std::vector<double>& samples) {
    if (!(tol > 0.0) || !std::isfinite(tol))
        throw ParameterOutOfRange("integration tolerance must be positive");
    if (x_end == x_start)
        throw ParameterOutOfRange("integration range is empty");
    const double dir = x_end > x_start ? 1.0 : -1.0;
    const double span = std::abs(x_end - x_start);
    for (size_t j = 0; j < samples.size(); ++j) {
        if (dir * (samples[j] - x_start) < 0 || dir * (x_end - samples[j]) < 0)
            throw ParameterOutOfRange("sample point outside the integration range");
        if (j > 0 && dir * (samples[j] - samples[j - 1]) < 0)
            throw ParameterOutOfRange("sample points must run toward the endpoint");
    }

    auto deriv = [&](double x, const State& y) -> State {
        return {y[1], -km * (E - V(x)) * y[0]};
    };

    OdeSolution out;
    State y{psi0, dpsi0};
    double x = x_start;
    size_t next = 0;
    auto record_reached = [&]() {
        while (next < samples.size() &&
               dir * (samples[next] - x) <= 1e-14 * std::max(1.0, std::abs(x))) {
            out.x.push_back(samples[next]);
            out.psi.push_back(y[0]);
            out.dpsi.push_back(y[1]);
            ++next;
        }
    };
    record_reached();

    double h = dir * span / 100.0;
    State k[7];
    k[0] = deriv(x, y);
    while (dir * (x_end - x) > 0.0) {
        double target = x_end;
        if (next < samples.size() && dir * (samples[next] - x_end) < 0.0)
            target = samples[next];
        double hstep = h;
        bool clipped = false;
        if (dir * (x + hstep - target) > 0.0) {
            hstep = target - x;
            clipped = true;
        }
        if (std::abs(hstep) < 1e-14 * std::max(1.0, std::abs(x)))
            throw StepUnderflow("step size collapsed during integration");

        for (int s = 1; s < 7; ++s) {
            State ys = y;
            for (int j = 0; j < s; ++j) {
                ys[0] += hstep * kA[s][j] * k[j][0];
                ys[1] += hstep * kA[s][j] * k[j][1];
            }
            k[s] = deriv(x + kC[s] * hstep, ys);
        }
        // stage 6 state is the 5th-order solution (FSAL)
        State y5 = y;
        for (int j = 0; j < 6; ++j) {
            y5[0] += hstep * kA[6][j] * k[j][0];
            y5[1] += hstep * kA[6][j] * k[j][1];
        }
        cplx e0{}, e1{};
        for (int j = 0; j < 7; ++j) {
            e0 += kE[j] * k[j][0];
            e1 += kE[j] * k[j][1];
        }
        double sc0 = tol + tol * std::max(std::abs(y[0]), std::abs(y5[0]));
        double sc1 = tol + tol * std::max(std::abs(y[1]), std::abs(y5[1]));
        double err = std::sqrt(0.5 * (std::norm(e0 * hstep) / (sc0 * sc0) +
                                      std::norm(e1 * hstep) / (sc1 * sc1)));

        if (err <= 1.0) {
            x = clipped ? target : x + hstep;
            y = y5;
            k[0] = k[6];
            record_reached();
            double fac = err == 0.0 ? 5.0
                                    : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            double hn = hstep * fac;
            if (clipped && std::abs(hn) < std::abs(h)) hn = h;
            h = hn;
        } else {
            h = hstep * std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
        }
    }
    record_reached();
    return out;
}

OdeSolution ode_integrate(const PotentialSpec& spec, double E, double x_start,
                          double x_end, cplx psi0, cplx dpsi0, double tol,
                          const std::vector<double>& samples) {
    spec.validate();
    auto V = [&spec](double x) {
        return potential_value(spec, z_of_x(spec, x));
    };
    return ode_integrate(V, spec.km(), E, x_start, x_end, psi0, dpsi0, tol,
                         samples);
}

ResidualReport schrodinger_residual(const Wavefunction& psi,
                                    const std::vector<double>& grid) {
    if (grid.empty()) throw GridTooCoarse("empty evaluation grid");
    ResidualReport rep;
    rep.grid = grid;
    rep.residuals.reserve(grid.size());
    const double km = psi.spec.km();

    // series noise at the default truncation tolerance would swamp the
    // h^2 division below
    Wavefunction tight = psi;
    tight.eval_tol = std::min(psi.eval_tol, 1e-13);

    // Differentiate in z rather than x: series evaluation in z is direct,
    // while eval_x inverts the coordinate map with an iterative solve whose
    // exit jitter, divided by the stencil's h^2, would swamp the residual
    // wherever the map compresses x. The chain rule needs only closed-form
    // map factors:
    //   psi_xx = rho^2 (psi_zz + L psi_z),  L = d log(rho)/dz = sum m_i/(z-a_i)
    auto d12_at = [&tight](double z, double hz, cplx* center) {
        cplx d1{}, d2{};
        for (int o = -3; o <= 3; ++o) {
            cplx v = tight.eval_z(z + o * hz);
            d1 += kD1[o + 3] * v;
            d2 += kD2[o + 3] * v;
            if (o == 0 && center) *center = v;
        }
        return std::pair{d1 / (60.0 * hz), d2 / (180.0 * hz * hz)};
    };

    const double zlo = psi.branch.lo;
    double scale = 0.0;
    try {
        for (double x : grid) {
            const double z = z_of_x(psi.spec, x);
            const double V = potential_value(psi.spec, z);
            const double r2 = rho(psi.spec, z) * rho(psi.spec, z);
            double L = 0.0;
            for (int i = 0; i < 3; ++i)
                L += psi.spec.m(i) / (z - psi.spec.a[i]);

            // the 3*hz stencil half-width must stay inside the branch and,
            // for the series scheme, well inside its convergence disk
            double dist = z - zlo;
            if (std::isfinite(psi.branch.hi))
                dist = std::min(dist, psi.branch.hi - z);
            if (psi.scheme == Scheme::frobenius)
                dist = std::min(dist, 0.95 * psi.disk_radius - (z - zlo));
            if (!(dist > 0.0))
                throw GridTooCoarse("grid point too close to the domain edge");
            // curvature cap from the equation itself: psi_zz ~ km|E-V|/rho^2
            const double g2 = std::max(
                1.0, km * (std::abs(psi.energy) + std::abs(V)) / r2);
            double hz = std::min({dist / 12.0, 0.25 / std::sqrt(g2),
                                  0.02 * (1.0 + std::abs(z))});
            hz = std::max(hz, 1e-8);

            cplx center{};
            auto [e1, f1] = d12_at(z, hz, &center);
            auto [e2, f2] = d12_at(z, 0.5 * hz, nullptr);
            cplx A1 = r2 * (f1 + L * e1);
            cplx A2 = r2 * (f2 + L * e2);
            const double local =
                std::max(std::abs(km * psi.energy * center),
                         std::abs(km * (psi.energy - V) * center));
            const double thr = 2e-9 * std::max(local, 1.0);
            // |A2-A1|/63 measures the h^6 term the extrapolation below will
            // remove; halve hz until the leftover is far below the local term
            // size, keeping the cleanest pair in case noise takes over first
            cplx b1 = A1, b2 = A2;
            double best = std::abs(A2 - A1);
            for (int r = 0;
                 r < 3 && std::abs(A2 - A1) / 63.0 > thr && hz > 1e-5; ++r) {
                hz *= 0.5;
                A1 = A2;
                auto [e, f] = d12_at(z, 0.5 * hz, nullptr);
                A2 = r2 * (f + L * e);
                if (std::abs(A2 - A1) < best) {
                    best = std::abs(A2 - A1);
                    b1 = A1;
                    b2 = A2;
                }
            }
            // both stencils are 6th order, so Richardson cancels the h^6 term
            cplx d2x = (64.0 * b2 - b1) / 63.0;
            rep.residuals.push_back(
                std::abs(d2x + km * (psi.energy - V) * center));
            scale = std::max(scale, std::abs(km * psi.energy * center));
            scale = std::max(scale, std::abs(km * (psi.energy - V) * center));
        }
    } catch (const OutOfBranch&) {
        throw GridTooCoarse("stencil leaves the working interval");
    } catch (const BranchViolation&) {
        throw GridTooCoarse("stencil leaves the working interval");
    } catch (const OutsideDisk&) {
        throw GridTooCoarse("stencil leaves the series convergence disk");
    }
    rep.scale = scale;
    double worst = 0.0;
    for (double r : rep.residuals) worst = std::max(worst, r);
    rep.max_rel_residual = worst / std::max(scale, 1e-300);
    return rep;
}

namespace {

struct MapDerivs {
    double d1, d2, d3;
};

MapDerivs map_derivs(const std::function<double(double)>& zmap, double x,
                     double h) {
    double v[9];
    double scale = 0.0;
    for (int o = -4; o <= 4; ++o) {
        v[o + 4] = zmap(x + o * h);
        scale = std::max(scale, std::abs(v[o + 4]));
    }
    double d1 = 0.0, d2 = 0.0, d3 = 0.0;
    for (int o = -3; o <= 3; ++o) {
        d1 += kD1[o + 3] * v[o + 4];
        d2 += kD2[o + 3] * v[o + 4];
    }
    for (int o = -4; o <= 4; ++o) d3 += kD3[o + 4] * v[o + 4];
    // raw-sum test: after dividing by 60h the cancellation residue of a
    // constant map (~eps * |weights| * scale) would outgrow any fixed bound
    if (std::abs(d1) < 1e-11 * std::max(scale, 1.0))
        throw DerivativeBreakdown("map derivative vanishes at the sample point");
    d1 /= 60.0 * h;
    d2 /= 180.0 * h * h;
    d3 /= h * h * h;
    return {d1, d2, d3};
}

} // namespace

double schwarzian(const std::function<double(double)>& zmap, double x) {
    // probe pass estimates the local variation scale; the final spacing
    // balances z''' roundoff (eps/h^3, wants h large) against truncation
    // (wants h * |z''/z'| small)
    MapDerivs p = map_derivs(zmap, x, 1e-3 * (1.0 + std::abs(x)));
    double g = std::abs(p.d2 / p.d1);
    double h = std::clamp(0.03 / std::max(g, 1.0), 4e-3, 0.02) *
               (1.0 + 1e-3 * std::abs(x));
    auto sch = [](const MapDerivs& s) {
        double r = s.d2 / s.d1;
        return s.d3 / s.d1 - 1.5 * r * r;
    };
    double s1 = sch(map_derivs(zmap, x, h));
    double s2 = sch(map_derivs(zmap, x, 0.5 * h));
    // Richardson across the two 6th-order evaluations
    return (64.0 * s2 - s1) / 63.0;
}

double bose_consistency_check(const PotentialSpec& spec, double E,
                              const std::vector<double>& z_points) {
    spec.validate();
    ExponentSet ex = exponents_for(spec, E, {+1, +1, +1});
    HeunParams hp = heun_params(spec, E, ex);
    const double km = spec.km();
    auto zmap = [&spec](double xx) { return z_of_x(spec, xx); };
    double worst = 0.0;
    for (double z : z_points) {
        double x = x_of_z(spec, z);
        cplx d1 = cx(z) - hp.a1, d2 = cx(z) - hp.a2, d3 = cx(z) - hp.a3;
        cplx f = hp.gamma / d1 + hp.delta / d2 + hp.epsilon / d3;
        cplx fp = -(hp.gamma / (d1 * d1) + hp.delta / (d2 * d2) +
                    hp.epsilon / (d3 * d3));
        cplx g = (hp.alpha * hp.beta * z - hp.q) / (d1 * d2 * d3);
        cplx I = g - 0.5 * fp - 0.25 * f * f;
        double rr = rho(spec, z);
        double sch = schwarzian(zmap, x);
        cplx lhs = rr * rr * I + cx(0.5 * sch);
        double rhs = km * (E - potential_value(spec, z));
        worst = std::max(worst, std::abs(lhs - cx(rhs)));
    }
    return worst;
}

std::vector<double> default_verify_grid(const Wavefunction& wf, int n,
                                        double lo_frac, double hi_frac) {
    if (n < 2 || !(lo_frac > 0.0) || !(hi_frac > lo_frac) || hi_frac >= 1.0)
        throw ParameterOutOfRange("malformed grid window");
    double len = std::isfinite(wf.branch.hi) ? wf.branch.hi - wf.branch.lo
                                             : wf.disk_radius;
    double R = std::min(wf.disk_radius, len);
    std::vector<double> xs;
    xs.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        double frac = lo_frac + (hi_frac - lo_frac) * i / (n - 1.0);
        xs.push_back(x_of_z(wf.spec, wf.branch.lo + frac * R));
    }
    return xs;
}

} // namespace heunpot
