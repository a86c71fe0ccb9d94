#include "heunpot/solution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace heunpot {

namespace {

inline cplx cx(double v) { return cplx(v, 0.0); }

// C_i of the indicial equation alpha^2 + (m_i-1) alpha + C_i = 0 at slot i
std::array<double, 3> slot_constants(const PotentialSpec& spec, double E) {
    RationalPotential rp = build_r_poly(spec);
    std::array<double, 3> C{};
    for (int i = 0; i < 3; ++i) {
        double prod = 1.0;
        for (int n = 0; n < 3; ++n)
            if (n != i) prod *= (spec.a[i] - spec.a[n]) * (spec.a[i] - spec.a[n]);
        double ai = spec.a[i];
        C[i] = spec.km() * (E * rp.r_at(ai) - rp.v_at(ai)) / prod;
    }
    return C;
}

cplx indicial_root(double m, double C, int sign) {
    double lin = 1.0 - m;
    cplx disc = std::sqrt(cx(lin * lin - 4.0 * C));
    return 0.5 * (cx(lin) + static_cast<double>(sign) * disc);
}

bool near_nonpos_int(cplx v, double tol) {
    if (std::abs(v.imag()) > tol) return false;
    double rd = std::round(v.real());
    return rd <= 0.0 && std::abs(v.real() - rd) < tol;
}

} // namespace

ExponentSet exponents_for(const PotentialSpec& spec, double E,
                          std::array<int, 3> signs) {
    spec.validate();
    for (int s : signs)
        if (s != 1 && s != -1)
            throw ParameterOutOfRange("exponent sign choice must be +1 or -1");
    auto C = slot_constants(spec, E);
    ExponentSet out;
    out.sign_choice = signs;
    out.alpha1 = indicial_root(spec.m(0), C[0], signs[0]);
    out.alpha2 = indicial_root(spec.m(1), C[1], signs[1]);
    out.alpha3 = indicial_root(spec.m(2), C[2], signs[2]);
    return out;
}

std::vector<ExponentSet> exponents(const PotentialSpec& spec, double E) {
    spec.validate();
    auto C = slot_constants(spec, E);
    // a vanishing discriminant collapses the slot to a single root
    std::array<bool, 3> twofold{};
    for (int i = 0; i < 3; ++i) {
        double lin = 1.0 - spec.m(i);
        twofold[i] = std::abs(lin * lin - 4.0 * C[i]) > 1e-14 * (1.0 + lin * lin);
    }
    std::vector<ExponentSet> out;
    for (int s1 : {+1, -1}) {
        if (s1 < 0 && !twofold[0]) continue;
        for (int s2 : {+1, -1}) {
            if (s2 < 0 && !twofold[1]) continue;
            for (int s3 : {+1, -1}) {
                if (s3 < 0 && !twofold[2]) continue;
                out.push_back(exponents_for(spec, E, {s1, s2, s3}));
            }
        }
    }
    return out;
}

HeunParams heun_params(const PotentialSpec& spec, double E,
                       const ExponentSet& exps) {
    spec.validate();
    RationalPotential rp = build_r_poly(spec);
    const double km = spec.km();
    const cplx A1 = exps.alpha1, A2 = exps.alpha2, A3 = exps.alpha3;
    const double m1 = spec.m(0), m2 = spec.m(1), m3 = spec.m(2);
    const double a1 = spec.a[0], a2 = spec.a[1], a3 = spec.a[2];

    HeunParams hp;
    hp.a1 = cx(a1);
    hp.a2 = cx(a2);
    hp.a3 = cx(a3);
    hp.gamma = 2.0 * A1 + m1;
    hp.delta = 2.0 * A2 + m2;
    hp.epsilon = 2.0 * A3 + m3;

    const cplx S = A1 + A2 + A3;
    const double msum = m1 + m2 + m3;
    const cplx ab = S * S + S * (msum - 1.0) + km * (E * rp.r[4] - rp.v[4]);
    const cplx apb = hp.gamma + hp.delta + hp.epsilon - 1.0;
    cplx disc = std::sqrt(apb * apb - 4.0 * ab);
    cplx rplus = 0.5 * (apb + disc), rminus = 0.5 * (apb - disc);
    bool plus_first = rplus.real() < rminus.real() ||
                      (rplus.real() == rminus.real() && rplus.imag() < rminus.imag());
    hp.alpha = plus_first ? rplus : rminus;
    hp.beta = plus_first ? rminus : rplus;

    const double asum = a1 + a2 + a3;
    hp.q = a1 * ((A2 + A3) * (A2 + A3 + m2 + m3 - 1.0) - A1 * (A1 + m1 - 1.0)) +
           a2 * ((A1 + A3) * (A1 + A3 + m1 + m3 - 1.0) - A2 * (A2 + m2 - 1.0)) +
           a3 * ((A1 + A2) * (A1 + A2 + m1 + m2 - 1.0) - A3 * (A3 + m3 - 1.0)) -
           km * (E * (rp.r[3] + asum * rp.r[4]) - (rp.v[3] + asum * rp.v[4]));
    return hp;
}

Wavefunction build_wavefunction(const PotentialSpec& spec, double E,
                                std::array<int, 3> signs, Scheme scheme) {
    if (scheme == Scheme::closed_form_2f1)
        throw ParameterOutOfRange(
            "the explicit 2F1 scheme is built through its own family constructor");
    spec.validate();
    Wavefunction wf;
    wf.spec = spec;
    wf.cspec = to_class_order(spec);
    wf.branch = branch_of(wf.cspec);
    wf.energy = E;
    wf.scheme = scheme;

    // series frame: anchor slot first, the others keeping their class order
    PotentialSpec p = wf.cspec;
    std::array<int, 3> order{};
    order[0] = wf.branch.anchor_slot;
    for (int i = 0, k = 1; i < 3; ++i)
        if (i != wf.branch.anchor_slot) order[k++] = i;
    for (int i = 0; i < 3; ++i) {
        p.triad.twom[i] = wf.cspec.triad.twom[order[i]];
        p.a[i] = wf.cspec.a[order[i]];
    }
    wf.pspec = p;

    wf.exps = exponents_for(p, E, signs);
    wf.heun = heun_params(p, E, wf.exps);
    wf.canonical = to_canonical(wf.heun);
    wf.disk_radius = std::min(1.0, std::abs(wf.canonical.params.a3)) *
                     std::abs(wf.canonical.map.scale);
    return wf;
}

cplx Wavefunction::eval_z(double z) const {
    if (!(z > branch.lo && z < branch.hi))
        throw OutOfBranch("evaluation point outside the working interval");

    if (scheme == Scheme::closed_form_2f1) {
        const ClosedForm35& p = *cf35;
        const double km = 2.0 * p.mass / (p.hbar * p.hbar);
        const cplx AL = p.alpha1 + p.alpha2 - p.alpha0;
        const cplx BE = p.alpha1 + p.alpha2 + p.alpha0;
        const cplx GA = 1.0 + 2.0 * p.alpha1;
        const cplx w = cx(0.5 * (z + 1.0));
        cplx u1 = gauss_2f1_above_cut({AL - 1.0, BE, GA - 1.0, w}, eval_tol);
        cplx u2 = gauss_2f1_above_cut({AL, BE + 1.0, GA, w}, eval_tol);
        cplx coef = (p.alpha2 - p.alpha1 + BE * z -
                     km * p.sigma * p.sigma * p.V3) /
                    (2.0 * (GA - 1.0));
        cplx u = u1 + coef * u2;
        return std::pow(cx(z + 1.0), p.alpha1) * std::pow(cx(z - 1.0), p.alpha2) * u;
    }

    cplx pre = 1.0;
    for (int i = 0; i < 3; ++i)
        pre *= std::exp(exps.alpha(i) * std::log(std::abs(z - pspec.a[i])));
    cplx w = canonical.map.forward(cx(z));
    cplx H;
    if (scheme == Scheme::frobenius)
        H = frobenius_eval(canonical.params, MuChoice::zero, w, eval_tol).value;
    else
        H = hypergeometric_expansion_eval(canonical.params, Gamma0Choice::gamma, w,
                                          eval_tol);
    return pre * H;
}

cplx Wavefunction::eval_x(double x) const { return eval_z(z_of_x(spec, x)); }

CipReport cip_reduction_check(const PotentialSpec& spec, double E) {
    PotentialSpec cs = to_class_order(spec);
    CipReport best;
    double best_score = std::numeric_limits<double>::infinity();
    for (int s1 : {+1, -1})
        for (int s2 : {+1, -1})
            for (int s3 : {+1, -1}) {
                ExponentSet ex = exponents_for(cs, E, {s1, s2, s3});
                HeunParams hp = heun_params(cs, E, ex);
                CanonicalHeun ch = to_canonical(hp);
                double er = std::abs(hp.epsilon);
                double qr =
                    std::abs(ch.params.q - ch.params.a3 * hp.alpha * hp.beta);
                double score = std::max(er, qr);
                if (score < best_score) {
                    best_score = score;
                    best.is_reducible = er < 1e-9 && qr < 1e-9;
                    best.which_exps = {s1, s2, s3};
                    best.eps_residual = er;
                    best.q_residual = qr;
                }
            }
    return best;
}

std::pair<double, double> table2_restrict(const Triad& class_triad, double a,
                                          double V2, double V3, double V4,
                                          double sigma, double hbar,
                                          double mass) {
    if (!std::isfinite(a) || a == 0.0 || a == 1.0)
        throw CoincidentSingularities(
            "third singularity must be distinct from 0 and 1");
    if (!(sigma != 0.0) || !std::isfinite(sigma))
        throw ParameterOutOfRange("sigma must be nonzero");
    if (!(mass > 0) || !(hbar > 0))
        throw ParameterOutOfRange("hbar and mass must be positive");
    const double K = hbar * hbar / (mass * sigma * sigma);
    const std::array<int, 3>& t = class_triad.twom;
    double V0, V1;
    if (t == std::array<int, 3>{2, 2, -1}) {
        V0 = (a - 1.0) * (7.0 * a - 1.0) * a * a * K / 32.0 +
             a * a * (V2 + a * (2.0 * V3 + 3.0 * a * V4));
        V1 = 3.0 * (1.0 - a) * (2.0 * a - 1.0) * a * K / 16.0 -
             a * (2.0 * V2 + a * (3.0 * V3 + 4.0 * a * V4));
    } else if (t == std::array<int, 3>{2, 2, -2}) {
        V0 = (a - 1.0) * (5.0 * a - 1.0) * a * a * K / 8.0 +
             a * a * (V2 + a * (2.0 * V3 + 3.0 * a * V4));
        V1 = (1.0 - a) * (2.0 * a - 1.0) * a * K / 2.0 -
             a * (2.0 * V2 + a * (3.0 * V3 + 4.0 * a * V4));
    } else if (t == std::array<int, 3>{2, 1, -1}) {
        V0 = (a - 1.0) * (9.0 * a - 1.0) * a * a * K / 32.0 +
             a * a * (V2 + a * (2.0 * V3 + 3.0 * a * V4));
        V1 = (1.0 - a) * (7.0 * a - 3.0) * a * K / 16.0 -
             a * (2.0 * V2 + a * (3.0 * V3 + 4.0 * a * V4));
    } else {
        throw UnsupportedTriad(
            "energy-independent reduction exists only for three classes");
    }
    return {V0, V1};
}

ClosedForm35 make_closed_form_35(double V0, double V1, double V3, double sigma,
                                 double x0, double E, double hbar, double mass) {
    if (!(sigma != 0.0) || !std::isfinite(sigma))
        throw ParameterOutOfRange("sigma must be nonzero");
    if (!(mass > 0) || !(hbar > 0))
        throw ParameterOutOfRange("hbar and mass must be positive");
    for (double v : {V0, V1, V3, x0})
        if (!std::isfinite(v)) throw ParameterOutOfRange("parameter not finite");
    ClosedForm35 p;
    p.V0 = V0;
    p.V1 = V1;
    p.V3 = V3;
    p.sigma = sigma;
    p.x0 = x0;
    p.hbar = hbar;
    p.mass = mass;
    const double km = 2.0 * mass / (hbar * hbar);
    const double s2 = sigma * sigma;
    const double kappa = km * s2 * V3 * V3;
    p.alpha0 = std::sqrt(cx(-km * s2 * (E - V0)));
    p.alpha1 = std::sqrt(cx(-0.25 * km * s2 * (E - V0 + (V1 + V3) - kappa)));
    p.alpha2 = std::sqrt(cx(-0.25 * km * s2 * (E - V0 - (V1 + V3) - kappa)));
    return p;
}

Wavefunction closed_form_35(const ClosedForm35& params, double E) {
    ClosedForm35 p = make_closed_form_35(params.V0, params.V1, params.V3,
                                         params.sigma, params.x0, E,
                                         params.hbar, params.mass);
    if (near_nonpos_int(2.0 * p.alpha1, 1e-9))
        throw GammaDegenerate(
            "lower hypergeometric parameter hits a non-positive integer");
    Wavefunction wf =
        build_wavefunction(cf35_equivalent_spec(p), E, {+1, +1, -1},
                           Scheme::frobenius);
    wf.scheme = Scheme::closed_form_2f1;
    wf.cf35 = p;
    return wf;
}

double cf35_potential(const ClosedForm35& p, double x) {
    const double km = 2.0 * p.mass / (p.hbar * p.hbar);
    const double z = std::sqrt(1.0 + std::exp(2.0 * (x - p.x0) / p.sigma));
    const double kappa = km * p.sigma * p.sigma * p.V3 * p.V3;
    return p.V0 + p.V1 / z + kappa / (z * z) + p.V3 / (z * z * z);
}

PotentialSpec cf35_equivalent_spec(const ClosedForm35& p) {
    PotentialSpec s;
    s.triad.twom = {2, 2, -2};
    s.a = {-1.0, 1.0, 0.0};
    const double km = 2.0 * p.mass / (p.hbar * p.hbar);
    const double s2 = p.sigma * p.sigma;
    s.v = {0.0, s2 * p.V3, s2 * km * s2 * p.V3 * p.V3, s2 * p.V1, s2 * p.V0};
    s.sigma = p.sigma;
    s.x0 = p.x0;
    s.hbar = p.hbar;
    s.mass = p.mass;
    return s;
}

} // namespace heunpot
