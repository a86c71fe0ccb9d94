#include "heunpot/heun.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "heunpot/errors.hpp"

namespace heunpot {

namespace {

constexpr double kIntTol = 1e-12;
constexpr double kRootTol = 1e-9; // residual bound for accepted q-roots
constexpr int kMaxFrobTerms = 20000;
constexpr int kMaxHypTerms = 500;

void require_canonical(const HeunParams& p) {
    if (!p.is_canonical())
        throw ParameterOutOfRange("series evaluation requires canonical singularities 0,1,a");
    if (std::abs(p.a3) < 1e-14 || std::abs(p.a3 - 1.0) < 1e-14)
        throw CoincidentSingularities("third singularity collides with 0 or 1");
}

bool nonpos_int_within(cplx v, double tol) {
    double r = std::round(v.real());
    return std::abs(v.imag()) < tol && r < 0.5 && std::abs(v.real() - r) < tol;
}

// Frobenius recurrence pieces about w = 0 (canonical frame), exponent mu:
//   R_n c_n + Q_{n-1} c_{n-1} + P_{n-2} c_{n-2} = 0,  Q_m(q) = Qt_m - q
struct FrobGen {
    cplx a, al, be, ga, de, ep, mu;
    cplx R(int n) const { return a * (mu + cplx(n)) * (mu + cplx(n) - 1.0 + ga); }
    cplx Qt(int m) const {
        cplx s = mu + cplx(m);
        return -s * ((1.0 + a) * (s - 1.0 + ga) + de * a + ep);
    }
    cplx P(int m) const { return (mu + cplx(m) + al) * (mu + cplx(m) + be); }
    // R_n vanishes iff mu+n = 0 or mu+n-1+ga = 0
    bool R_degenerate(int n) const {
        return std::abs(mu + cplx(n)) < kIntTol * (1 + n) ||
               std::abs(mu + cplx(n) - 1.0 + ga) < kIntTol * (1 + n);
    }
};

// Hypergeometric-expansion recurrence pieces: u = sum c_n F(al,be;g0-n;w)
struct HypGen {
    cplx a, al, be, ga, de, ep, g0;
    cplx R(int n) const {
        return a / (g0 - cplx(n)) * (ga - g0 + cplx(n)) * (al - g0 + cplx(n)) *
               (be - g0 + cplx(n));
    }
    cplx Qt(int n) const {
        return (1.0 - a) * (ep + ga - g0 + cplx(n)) * (g0 - cplx(n) - 1.0) +
               a * (ga - g0 + cplx(n)) * (al + be - g0 + cplx(n)) + a * al * be;
    }
    cplx P(int n) const {
        return (a - 1.0) * (ep + ga - g0 + cplx(n)) * (g0 - cplx(n) - 1.0);
    }
    bool R_degenerate(int n) const {
        double s = kIntTol * (1 + n);
        return std::abs(g0 - cplx(n)) < s || std::abs(ga - g0 + cplx(n)) < s ||
               std::abs(al - g0 + cplx(n)) < s || std::abs(be - g0 + cplx(n)) < s;
    }
};

// polynomials in q, ascending coefficients
using QPoly = std::vector<cplx>;

// c_next = -((Qt - q) c_cur + P c_prev) / R
QPoly recurrence_step(const QPoly& cur, const QPoly& prev, cplx Qt, cplx P, cplx R) {
    QPoly out(cur.size() + 1, cplx(0));
    for (size_t i = 0; i < cur.size(); ++i) {
        out[i] += Qt * cur[i];
        out[i + 1] -= cur[i];
    }
    for (size_t i = 0; i < prev.size(); ++i) out[i] += P * prev[i];
    for (auto& c : out) c = -c / R;
    return out;
}

cplx poly_eval(const QPoly& p, cplx x) {
    cplx v = 0;
    for (size_t i = p.size(); i-- > 0;) v = v * x + p[i];
    return v;
}

template <class Gen>
std::vector<TerminationRoot> terminate_with(const Gen& gen, int N) {
    QPoly prev, cur{cplx(1)};
    for (int n = 1; n <= N + 1; ++n) {
        if (gen.R_degenerate(n))
            throw IndicialDegenerate("series coefficient recurrence pivot vanishes at order " +
                                     std::to_string(n));
        QPoly next = recurrence_step(cur, prev, gen.Qt(n - 1),
                                     n >= 2 ? gen.P(n - 2) : cplx(0), gen.R(n));
        prev = std::move(cur);
        cur = std::move(next);
    }
    // cur == c_{N+1}(q), degree N+1
    std::vector<cplx> roots = poly_roots(cur);
    std::sort(roots.begin(), roots.end(), [](cplx x, cplx y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });

    std::vector<TerminationRoot> out;
    for (cplx q : roots) {
        std::vector<cplx> c{cplx(1)};
        double maxc = 1.0;
        for (int n = 1; n <= N + 2; ++n) {
            if (n == N + 2 && gen.R_degenerate(n)) break; // c_{N+2} check unavailable
            cplx cn = -((gen.Qt(n - 1) - q) * c[n - 1] +
                        (n >= 2 ? gen.P(n - 2) * c[n - 2] : cplx(0))) /
                      gen.R(n);
            c.push_back(cn);
            if (n <= N) maxc = std::max(maxc, std::abs(cn));
        }
        bool ok = true;
        for (size_t i = N + 1; i < c.size(); ++i)
            ok = ok && std::abs(c[i]) < kRootTol * maxc;
        if (!ok) continue; // spurious or ill-conditioned root
        c.resize(N + 1);
        out.push_back({q, std::move(c)});
    }
    return out;
}

} // namespace

CanonicalHeun to_canonical(const HeunParams& p) {
    double scale = std::max({1.0, std::abs(p.a1), std::abs(p.a2), std::abs(p.a3)});
    if (std::abs(p.a1 - p.a2) < 1e-14 * scale || std::abs(p.a2 - p.a3) < 1e-14 * scale ||
        std::abs(p.a3 - p.a1) < 1e-14 * scale)
        throw CoincidentSingularities("singular points of the equation must be distinct");
    CanonicalHeun ch;
    ch.map = {p.a1, p.a2 - p.a1};
    ch.params = p;
    ch.params.a1 = 0.0;
    ch.params.a2 = 1.0;
    ch.params.a3 = (p.a3 - p.a1) / ch.map.scale;
    ch.params.q = (p.q - p.alpha * p.beta * p.a1) / ch.map.scale;
    return ch;
}

FrobeniusResult frobenius_eval(const HeunParams& canonical, MuChoice mu_choice,
                               cplx z, double tol) {
    if (!(tol > 0)) throw ParameterOutOfRange("series tolerance must be positive");
    require_canonical(canonical);
    const cplx a = canonical.a3;
    const cplx mu = mu_choice == MuChoice::zero ? cplx(0) : 1.0 - canonical.gamma;

    // R_n = a(mu+n)(mu+n-1+gamma) must stay nonzero for every n >= 1
    if (mu_choice == MuChoice::zero && nonpos_int_within(canonical.gamma, kIntTol))
        throw IndicialDegenerate("exponent 0 is degenerate: gamma is a non-positive integer");
    if (mu_choice == MuChoice::one_minus_gamma &&
        nonpos_int_within(2.0 - canonical.gamma, kIntTol))
        throw IndicialDegenerate("exponent 1-gamma is degenerate: 2-gamma is a non-positive integer");

    const double radius = std::min(std::abs(a), 1.0);
    if (std::abs(z) >= radius)
        throw OutsideDisk("argument outside the convergence disk of the local series");

    FrobGen gen{a, canonical.alpha, canonical.beta, canonical.gamma,
                canonical.delta, canonical.epsilon, mu};

    FrobeniusResult res;
    res.series.mu = mu;
    auto& c = res.series.coeffs;
    c = {cplx(1)};
    if (z == cplx(0.0) && mu_choice == MuChoice::zero) {
        res.value = 1.0;
        res.series.n_used = 0;
        return res;
    }

    cplx sum = 1.0, zn = 1.0;
    double t2 = 0, t1 = 0, t0 = 1; // trailing |term| history for the tail bound
    int small_count = 0, n = 0;
    for (n = 1; n < kMaxFrobTerms; ++n) {
        cplx cn = -((gen.Qt(n - 1) - canonical.q) * c[n - 1] +
                    (n >= 2 ? gen.P(n - 2) * c[n - 2] : cplx(0))) /
                  gen.R(n);
        c.push_back(cn);
        zn *= z;
        cplx term = cn * zn;
        sum += term;
        t2 = t1; t1 = t0; t0 = std::abs(term);
        if (t0 < tol * std::abs(sum)) {
            if (++small_count >= 3) break;
        } else {
            small_count = 0;
        }
    }
    if (n >= kMaxFrobTerms)
        throw NoConvergence("local series did not meet the term criterion");

    // geometric tail extrapolation from the trailing term ratios
    double r = 0;
    if (t1 > 0) r = t0 / t1;
    if (t2 > 0) r = std::sqrt(r * (t1 / t2));
    res.series.tail_estimate = (r > 0 && r < 1) ? t0 * r / (1 - r) : t0;
    res.series.n_used = n;
    res.value = (mu_choice == MuChoice::zero ? cplx(1) : std::pow(z, mu)) * sum;
    return res;
}

cplx hypergeometric_expansion_eval(const HeunParams& canonical, Gamma0Choice g0c,
                                   cplx z, double tol) {
    if (!(tol > 0)) throw ParameterOutOfRange("series tolerance must be positive");
    require_canonical(canonical);
    const cplx g0 = g0c == Gamma0Choice::gamma   ? canonical.gamma
                    : g0c == Gamma0Choice::alpha ? canonical.alpha
                                                 : canonical.beta;
    HypGen gen{canonical.a3, canonical.alpha, canonical.beta, canonical.gamma,
               canonical.delta, canonical.epsilon, g0};

    std::vector<cplx> c{cplx(1)};
    cplx sum = 0, csum = 0;
    double maxc = 1.0;
    int small_count = 0;
    bool terminated = false;
    for (int n = 0; n < kMaxHypTerms; ++n) {
        if (!terminated) {
            cplx Fn;
            try {
                Fn = gauss_2f1({canonical.alpha, canonical.beta, g0 - cplx(n), z}, tol);
            } catch (const PoleAtGamma& e) {
                throw RecurrenceBreakdown(
                    std::string("expansion member hits a lower-parameter pole: ") + e.what());
            }
            cplx term = c[n] * Fn;
            sum += term;
            csum += c[n];
            if (std::abs(term) < tol * std::abs(sum)) {
                if (++small_count >= 3) break;
            } else {
                small_count = 0;
            }
        } else {
            break;
        }
        // advance c_{n+1}
        cplx rhs = (gen.Qt(n) - canonical.q) * c[n] + (n >= 1 ? gen.P(n - 1) * c[n - 1] : cplx(0));
        if (gen.R_degenerate(n + 1)) {
            if (std::abs(rhs) < 1e-9 * maxc * (std::abs(gen.Qt(n) - canonical.q) +
                                               (n >= 1 ? std::abs(gen.P(n - 1)) : 0.0) + 1.0)) {
                terminated = true; // expansion ends here; zero continuation
                continue;
            }
            throw RecurrenceBreakdown("expansion recurrence pivot vanishes with nonzero load");
        }
        cplx cn1 = -rhs / gen.R(n + 1);
        c.push_back(cn1);
        maxc = std::max(maxc, std::abs(cn1));
    }
    if (small_count < 3 && !terminated)
        throw NoConvergence("hypergeometric expansion did not meet the term criterion");
    if (std::abs(csum) < 1e-13 * maxc)
        throw NoConvergence("expansion cannot be normalized: coefficient sum vanishes");
    return sum / csum;
}

std::vector<TerminationRoot> frobenius_termination(const HeunParams& family,
                                                   MuChoice mu_choice, int N) {
    if (N < 0) throw ParameterOutOfRange("termination order must be non-negative");
    require_canonical(family);
    const cplx mu = mu_choice == MuChoice::zero ? cplx(0) : 1.0 - family.gamma;
    // degree-N cutoff needs P_N = (mu+N+alpha)(mu+N+beta) = 0
    if (std::abs(mu + cplx(N) + family.alpha) > kRootTol &&
        std::abs(mu + cplx(N) + family.beta) > kRootTol)
        throw PreconditionPNnonzero(
            "neither exponent parameter cancels the series at the requested order");
    FrobGen gen{family.a3, family.alpha, family.beta, family.gamma,
                family.delta, family.epsilon, mu};
    return terminate_with(gen, N);
}

std::vector<TerminationRoot> hypergeom_termination(const HeunParams& family,
                                                   Gamma0Choice g0c, int N) {
    if (N < 1) throw ParameterOutOfRange("expansion termination order must be at least 1");
    require_canonical(family);
    if (std::abs(family.a3 - 1.0) < kIntTol)
        throw PreconditionEq32("expansion termination is degenerate at a = 1");
    const cplx g0 = g0c == Gamma0Choice::gamma   ? family.gamma
                    : g0c == Gamma0Choice::alpha ? family.alpha
                                                 : family.beta;
    // P_N = (a-1)(epsilon+gamma-gamma0+N)(gamma0-N-1) must vanish through the
    // exponent-sum factor
    if (std::abs(family.epsilon + family.gamma - g0 + cplx(N)) > kRootTol)
        throw PreconditionEq32("exponent parameters do not cancel the expansion at this order");
    HypGen gen{family.a3, family.alpha, family.beta, family.gamma,
               family.delta, family.epsilon, g0};
    return terminate_with(gen, N);
}

std::vector<cplx> poly_roots(const std::vector<cplx>& coeffs) {
    if (coeffs.size() < 2)
        throw ParameterOutOfRange("poly_roots needs a polynomial of degree >= 1");
    const size_t d = coeffs.size() - 1;
    if (std::abs(coeffs[d]) == 0.0)
        throw ParameterOutOfRange("poly_roots leading coefficient vanishes");

    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
    for (size_t i = 0; i + 1 < d; ++i) comp(i + 1, i) = 1.0;
    for (size_t i = 0; i < d; ++i) comp(i, d - 1) = -coeffs[i] / coeffs[d];

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    if (es.info() != Eigen::Success)
        throw NoConvergence("companion-matrix eigenvalue iteration failed");

    std::vector<cplx> roots(d);
    for (size_t i = 0; i < d; ++i) {
        cplx x = es.eigenvalues()(i);
        for (int it = 0; it < 4; ++it) { // Newton polish
            cplx p = 0, dp = 0;
            for (size_t k = coeffs.size(); k-- > 0;) {
                dp = dp * x + p;
                p = p * x + coeffs[k];
            }
            if (std::abs(dp) == 0.0) break;
            cplx step = p / dp;
            x -= step;
            if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
        }
        roots[i] = x;
    }
    return roots;
}

} // namespace heunpot
