#include <doctest.h>

#include <cmath>
#include <complex>

#include "heunpot/solution.hpp"

using heunpot::cplx;
using heunpot::PotentialSpec;
using heunpot::Scheme;
using heunpot::Wavefunction;

namespace {

// spec with rational data whose exponents and Heun parameters are known exactly
PotentialSpec rational_spec() {
    PotentialSpec s;
    s.triad.twom = {2, 2, 2};
    s.a = {0.0, 2.0, -1.0};
    s.v = {73.0 / 45.0, -3827.0 / 11025.0, 13921.0 / 22050.0, 0.5, -1.0 / 3.0};
    return s;
}

constexpr double kE = 1.4;

double fd_residual(const Wavefunction& wf, double x) {
    const PotentialSpec& s = wf.spec;
    double h = 5e-4 * (1.0 + std::abs(x));
    cplx psi = wf.eval_x(x);
    cplx d2 = (-wf.eval_x(x + 2 * h) + 16.0 * wf.eval_x(x + h) - 30.0 * psi +
               16.0 * wf.eval_x(x - h) - wf.eval_x(x - 2 * h)) /
              (12.0 * h * h);
    double V = potential_value(s, z_of_x(s, x));
    cplx res = d2 + s.km() * (wf.energy - V) * psi;
    double scale = s.km() * (std::abs(wf.energy) + std::abs(V)) * std::abs(psi);
    return std::abs(res) / std::max(scale, 1e-30);
}

} // namespace

TEST_CASE("exponents reproduce the rational reference") {
    PotentialSpec s = rational_spec();
    auto ex = exponents_for(s, kE, {+1, -1, +1});
    CHECK(std::abs(ex.alpha1 - cplx(1.0 / 3.0)) < 1e-12);
    CHECK(std::abs(ex.alpha2 - cplx(-0.2)) < 1e-12);
    CHECK(std::abs(ex.alpha3 - cplx(2.0 / 7.0)) < 1e-12);

    // every sign combination satisfies the defining quadratic:
    // (1 - m_i - alpha_i) alpha_i prod_n (a_i-a_n)^2 = km (E r(a_i) - v(a_i))
    auto all = exponents(s, kE);
    CHECK(all.size() == 8);
    heunpot::RationalPotential rp = build_r_poly(s);
    for (const auto& e : all) {
        for (int i = 0; i < 3; ++i) {
            double prod = 1.0;
            for (int n = 0; n < 3; ++n)
                if (n != i) prod *= (s.a[i] - s.a[n]) * (s.a[i] - s.a[n]);
            cplx lhs = (1.0 - s.m(i) - e.alpha(i)) * e.alpha(i) * prod;
            double rhs = s.km() * (kE * rp.r_at(s.a[i]) - rp.v_at(s.a[i]));
            CHECK(std::abs(lhs - rhs) < 1e-10);
        }
    }

    // degenerate indicial discriminants collapse the combination count
    PotentialSpec flat = s;
    flat.v = {0, 0, 0, 0, 0};
    CHECK(exponents(flat, 0.0).size() == 1);
    CHECK(std::abs(exponents(flat, 0.0)[0].alpha1) < 1e-14);

    CHECK_THROWS_AS((void)exponents_for(s, kE, {0, 1, 1}),
                    heunpot::ParameterOutOfRange);
}

TEST_CASE("heun_params reproduces the reference parameters") {
    PotentialSpec s = rational_spec();
    auto ex = exponents_for(s, kE, {+1, -1, +1});
    heunpot::HeunParams hp = heun_params(s, kE, ex);
    CHECK(std::abs(hp.gamma - cplx(5.0 / 3.0)) < 1e-12);
    CHECK(std::abs(hp.delta - cplx(0.6)) < 1e-12);
    CHECK(std::abs(hp.epsilon - cplx(11.0 / 7.0)) < 1e-12);
    CHECK(std::abs(hp.alpha * hp.beta - cplx(18526.0 / 11025.0)) < 1e-12);
    CHECK(std::abs(hp.q - cplx(24127.0 / 11025.0)) < 1e-12);
    CHECK(std::abs(hp.fuchs_residual()) < 1e-12);
    CHECK(hp.alpha.real() <= hp.beta.real());
    CHECK(std::abs(hp.a1) == 0.0);
    CHECK(hp.a2.real() == 2.0);
    CHECK(hp.a3.real() == -1.0);
}

TEST_CASE("wavefunction satisfies the Schrodinger equation") {
    PotentialSpec s = rational_spec();
    for (std::array<int, 3> signs :
         {std::array<int, 3>{+1, -1, +1}, std::array<int, 3>{+1, +1, +1},
          std::array<int, 3>{-1, +1, -1}}) {
        Wavefunction wf = build_wavefunction(s, kE, signs, Scheme::frobenius);
        wf.eval_tol = 1e-13;
        CHECK(wf.branch.lo == 2.0);
        CHECK(std::isinf(wf.branch.hi));
        CHECK(wf.pspec.a[0] == 2.0);
        CHECK(wf.disk_radius == doctest::Approx(2.0));
        for (double z : {2.3, 2.8, 3.2}) {
            double x = x_of_z(s, z);
            CHECK(std::abs(wf.eval_x(x)) > 1e-12);
            CHECK(fd_residual(wf, x) < 5e-6);
        }
    }
    CHECK_THROWS_AS((void)build_wavefunction(s, kE, {+1, +1, +1},
                                             Scheme::closed_form_2f1),
                    heunpot::ParameterOutOfRange);
    Wavefunction wf = build_wavefunction(s, kE, {+1, -1, +1}, Scheme::frobenius);
    CHECK_THROWS_AS((void)wf.eval_z(1.5), heunpot::OutOfBranch);
    CHECK_THROWS_AS((void)wf.eval_z(4.5), heunpot::OutsideDisk);
}

TEST_CASE("anchor-first frame puts the working singularity at gamma") {
    PotentialSpec s;
    s.triad.twom = {2, 2, -1};
    s.a = {0.0, 1.0, 2.3};
    Wavefunction wf = build_wavefunction(s, 0.7, {+1, +1, +1}, Scheme::frobenius);
    CHECK(wf.branch.lo == 2.3);
    CHECK(wf.pspec.a[0] == 2.3);
    CHECK(wf.pspec.triad.twom[0] == -1);
    // class order of the two full slots is position-descending
    CHECK(wf.pspec.a[1] == 1.0);
    CHECK(wf.pspec.a[2] == 0.0);
    CHECK(std::abs(wf.heun.gamma - (2.0 * wf.exps.alpha1 - 0.5)) < 1e-14);
}

TEST_CASE("reduction detection flags the restricted families") {
    const double V2 = 0.37, V3 = -0.61, V4 = 0.22;
    for (std::array<int, 3> row :
         {std::array<int, 3>{2, 2, -1}, std::array<int, 3>{2, 2, -2},
          std::array<int, 3>{2, 1, -1}}) {
        for (double a : {2.3, -0.7}) {
            for (double sigma : {1.1}) {
                auto [V0, V1] = heunpot::table2_restrict({row}, a, V2, V3, V4,
                                                         sigma);
                PotentialSpec s;
                s.triad.twom = row;
                s.a = {0.0, 1.0, a};
                s.sigma = sigma;
                double s2 = sigma * sigma;
                s.v = {s2 * V0, s2 * V1, s2 * V2, s2 * V3, s2 * V4};
                for (double E : {-0.3, 1.7}) {
                    auto rep = cip_reduction_check(s, E);
                    CAPTURE(row[2]);
                    CAPTURE(a);
                    CAPTURE(E);
                    CHECK(rep.is_reducible);
                    CHECK(rep.eps_residual < 1e-9);
                    CHECK(rep.q_residual < 1e-9);
                }
                // perturbing the restriction breaks the reduction
                PotentialSpec bad = s;
                bad.v[0] += 0.05 * s2;
                auto repb = cip_reduction_check(bad, 1.7);
                CHECK(!repb.is_reducible);
                CHECK(repb.q_residual + repb.eps_residual > 1e-6);
            }
        }
    }

    // non-default hbar/mass enter through hbar^2/m
    auto [W0, W1] =
        heunpot::table2_restrict({{2, 2, -2}}, 1.9, V2, V3, V4, 0.8, 1.3, 0.8);
    PotentialSpec s;
    s.triad.twom = {2, 2, -2};
    s.a = {0.0, 1.0, 1.9};
    s.sigma = 0.8;
    s.hbar = 1.3;
    s.mass = 0.8;
    double s2 = 0.64;
    s.v = {s2 * W0, s2 * W1, s2 * V2, s2 * V3, s2 * V4};
    auto rep = cip_reduction_check(s, 0.9);
    CHECK(rep.is_reducible);

    CHECK_THROWS_AS((void)heunpot::table2_restrict({{2, 2, 2}}, 2.0, 0, 0, 0, 1),
                    heunpot::UnsupportedTriad);
    CHECK_THROWS_AS((void)heunpot::table2_restrict({{2, 2, -2}}, 1.0, 0, 0, 0, 1),
                    heunpot::CoincidentSingularities);
}

TEST_CASE("closed-form family matches frozen references") {
    const double V0 = 0.2, V1 = -1.1, V3 = -0.8, E = -0.5;
    auto p = heunpot::make_closed_form_35(V0, V1, V3, 1.0, 0.0, E);
    CHECK(std::abs(p.alpha0 - std::sqrt(cplx(1.4))) < 1e-14);
    CHECK(std::abs(p.alpha1 - std::sqrt(cplx(1.94))) < 1e-14);
    CHECK(std::abs(p.alpha2 - cplx(0.2)) < 1e-13);

    CHECK(heunpot::cf35_potential(p, 0.7) ==
          doctest::Approx(-0.1064225152951713014888).epsilon(1e-14));

    // the inner hypergeometric factor at x = 0.7, w = (z+1)/2
    double z = std::sqrt(1.0 + std::exp(1.4));
    cplx w(0.5 * (z + 1.0), 0.0);
    CHECK(std::abs(w - cplx(1.624188592590748826269)) < 1e-14);
    cplx AL = p.alpha1 + p.alpha2 - p.alpha0;
    cplx BE = p.alpha1 + p.alpha2 + p.alpha0;
    cplx GA = 1.0 + 2.0 * p.alpha1;
    cplx f = heunpot::gauss_2f1_above_cut({AL - 1.0, BE, GA - 1.0, w}, 1e-13);
    CHECK(std::abs(f - cplx(-0.21011350784813388868, -0.72227855628062049913)) <
          1e-12);

    Wavefunction wf = heunpot::closed_form_35(p, E);
    wf.eval_tol = 1e-13;
    CHECK(wf.scheme == Scheme::closed_form_2f1);
    CHECK(wf.cf35.has_value());
    CHECK(wf.branch.lo == 1.0);
    CHECK(std::isinf(wf.branch.hi));
    CHECK(wf.cspec.a[0] == 1.0);
    CHECK(wf.cspec.a[1] == -1.0);
    CHECK(std::abs(wf.exps.alpha3) < 1e-12);

    struct Pt {
        double x;
        cplx want;
    };
    const Pt pts[] = {
        {-1.5, {1.3218240104953813794, 4.1634071587838247534}},
        {0.7, {1.0772311911228558277, 3.625491083468921952}},
        {2.0, {2.8451012389543091154, 9.7327177002703578805}},
    };
    for (const auto& pt : pts) {
        cplx got = wf.eval_x(pt.x);
        CHECK(std::abs(got - pt.want) < 1e-12 * std::abs(pt.want));
    }

    // the two-term combination solves the equation away from the references
    for (double x : {-2.5, -0.4, 1.3}) {
        double h = 5e-4 * (1.0 + std::abs(x));
        cplx psi = wf.eval_x(x);
        cplx d2 = (wf.eval_x(x + h) + wf.eval_x(x - h) - 2.0 * psi) / (h * h);
        double V = heunpot::cf35_potential(p, x);
        cplx res = d2 + 2.0 * (E - V) * psi;
        CHECK(std::abs(res) < 5e-6 * std::abs(2.0 * E * psi));
    }

    // dyadic data so the degenerate energy V0-(V1+V3)+km sigma^2 V3^2 is exact
    CHECK_THROWS_AS(
        (void)heunpot::closed_form_35(
            heunpot::make_closed_form_35(0.25, -1.0, -0.5, 1.0, 0.0, 2.25), 2.25),
        heunpot::GammaDegenerate);
}

TEST_CASE("equivalent spec reproduces the closed-form potential") {
    const double V0 = 0.2, V1 = -1.1, V3 = -0.8, E = -0.5;
    auto p = heunpot::make_closed_form_35(V0, V1, V3, 0.9, 0.15, E);
    PotentialSpec es = heunpot::cf35_equivalent_spec(p);
    CHECK_NOTHROW(es.validate());
    for (double x : {-1.0, 0.3, 1.8}) {
        double z = z_of_x(es, x);
        CHECK(potential_value(es, z) ==
              doctest::Approx(heunpot::cf35_potential(p, x)).epsilon(1e-12));
    }

    // degenerate sub-families stay regular
    auto pz = heunpot::make_closed_form_35(0.2, -1.1, 0.0, 1.0, 0.0, E);
    Wavefunction wz = heunpot::closed_form_35(pz, E);
    CHECK(std::abs(wz.eval_x(0.5)) > 0.0);
    auto pc = heunpot::make_closed_form_35(0.2, 0.8, -0.8, 1.0, 0.0, E);
    Wavefunction wc = heunpot::closed_form_35(pc, E);
    CHECK(std::abs(wc.eval_x(0.5)) > 0.0);
}
