#include "heunpot/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "heunpot/spec_file.hpp"
#include "heunpot/triads.hpp"
#include "heunpot/verify.hpp"

namespace heunpot {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

// one template per canonical class, class_index order
struct CatalogRow {
    std::array<int, 3> twom;
    std::array<double, 3> a;
};
constexpr CatalogRow kCatalog[11] = {
    {{2, 2, 2}, {0, 1, 2}},    {{2, 2, 1}, {1, 2, 0}},
    {{2, 2, 0}, {1, 0, -1}},   {{2, 2, -1}, {1, 2, 0}},
    {{2, 2, -2}, {2, 0, 1}},   {{2, 1, 1}, {2, 0, 1}},
    {{2, 1, 0}, {1, 0, -1}},   {{2, 1, -1}, {2, 0, 1}},
    {{2, 0, 0}, {1, 0, 0.5}},  {{1, 1, 1}, {2, 0, 1}},
    {{1, 1, 0}, {1, 0, 0.5}},
};

PotentialSpec catalog_spec(const CatalogRow& row) {
    PotentialSpec spec;
    spec.triad.twom = row.twom;
    spec.a = row.a;
    return spec;
}

std::vector<double> make_grid(const RunConfig& cfg) {
    if (!cfg.have_grid)
        throw ParameterOutOfRange("--grid x_min:x_max:n is required");
    std::vector<double> xs(static_cast<size_t>(cfg.n));
    double step = (cfg.x_max - cfg.x_min) / (cfg.n - 1);
    for (int i = 0; i < cfg.n; ++i) xs[static_cast<size_t>(i)] = cfg.x_min + i * step;
    return xs;
}

void cmd_triads(const RunConfig& cfg, std::ostream& out) {
    auto all = enumerate_triads();
    if (cfg.format == RunConfig::Format::json) {
        nlohmann::ordered_json doc = nlohmann::ordered_json::array();
        for (const auto& t : all) {
            Triad c = canonical_class(t);
            nlohmann::ordered_json el;
            el["m"] = {t.m(0), t.m(1), t.m(2)};
            el["class_m"] = {c.m(0), c.m(1), c.m(2)};
            el["class_index"] = class_index(t);
            doc.push_back(el);
        }
        out << doc.dump(2) << '\n';
        return;
    }
    out << "m1,m2,m3,class_m1,class_m2,class_m3,class_index\n";
    for (const auto& t : all) {
        Triad c = canonical_class(t);
        out << fmt(t.m(0)) << ',' << fmt(t.m(1)) << ',' << fmt(t.m(2)) << ','
            << fmt(c.m(0)) << ',' << fmt(c.m(1)) << ',' << fmt(c.m(2)) << ','
            << class_index(t) << '\n';
    }
}

void cmd_catalog(const RunConfig& cfg, std::ostream& out) {
    if (cfg.format == RunConfig::Format::json) {
        nlohmann::ordered_json doc = nlohmann::ordered_json::array();
        for (int i = 0; i < 11; ++i) {
            PotentialSpec spec = catalog_spec(kCatalog[i]);
            auto el = nlohmann::ordered_json::parse(spec_to_json(spec));
            el["class_index"] = i;
            el["map"] = map_description(canonical_class(spec.triad));
            doc.push_back(el);
        }
        out << doc.dump(2) << '\n';
        return;
    }
    out << "class_index,m1,m2,m3,a1,a2,a3,branch_lo,branch_hi,map\n";
    for (int i = 0; i < 11; ++i) {
        PotentialSpec spec = catalog_spec(kCatalog[i]);
        Branch br = branch_of(to_class_order(spec));
        out << i << ',' << fmt(spec.m(0)) << ',' << fmt(spec.m(1)) << ','
            << fmt(spec.m(2)) << ',' << fmt(spec.a[0]) << ','
            << fmt(spec.a[1]) << ',' << fmt(spec.a[2]) << ',' << fmt(br.lo)
            << ',' << fmt(br.hi) << ','
            << csv_quote(map_description(canonical_class(spec.triad))) << '\n';
    }
}

void cmd_eval_potential(const RunConfig& cfg, std::ostream& out) {
    PotentialSpec spec = load_spec(cfg.spec_path);
    spec.validate();
    out << "x,z,V\n";
    for (double x : make_grid(cfg)) {
        double z = z_of_x(spec, x);
        out << fmt(x) << ',' << fmt(z) << ',' << fmt(potential_value(spec, z))
            << '\n';
    }
}

Wavefunction build_for_cli(const RunConfig& cfg, const PotentialSpec& spec,
                           const std::vector<double>* xs) {
    Scheme scheme = cfg.scheme;
    if (cfg.scheme_auto) {
        scheme = Scheme::frobenius;
        Wavefunction probe =
            build_wavefunction(spec, cfg.energy, cfg.signs, scheme);
        if (xs)
            for (double x : *xs)
                if (std::abs(z_of_x(spec, x) - probe.branch.lo) >=
                    probe.disk_radius)
                    scheme = Scheme::hypexp;
    }
    Wavefunction wf = build_wavefunction(spec, cfg.energy, cfg.signs, scheme);
    wf.eval_tol = cfg.tol;
    return wf;
}

void cmd_solve(const RunConfig& cfg, std::ostream& out) {
    PotentialSpec spec = load_spec(cfg.spec_path);
    spec.validate();
    std::vector<double> xs = make_grid(cfg);
    Wavefunction wf = build_for_cli(cfg, spec, &xs);
    ResidualReport rep = schrodinger_residual(wf, xs);
    double scale = std::max(rep.scale, 1e-300);
    out << "x,z,re_psi,im_psi,residual\n";
    for (size_t i = 0; i < xs.size(); ++i) {
        cplx psi = wf.eval_x(xs[i]);
        out << fmt(xs[i]) << ',' << fmt(z_of_x(spec, xs[i])) << ','
            << fmt(psi.real()) << ',' << fmt(psi.imag()) << ','
            << fmt(rep.residuals[i] / scale) << '\n';
    }
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    constexpr double kThreshold = 1e-6;
    PotentialSpec spec = load_spec(cfg.spec_path);
    spec.validate();
    Wavefunction wf = build_for_cli(cfg, spec, nullptr);
    std::vector<double> grid = default_verify_grid(wf, 200);
    ResidualReport rep = schrodinger_residual(wf, grid);
    bool pass = rep.max_rel_residual < kThreshold;
    out << "points," << grid.size() << '\n'
        << "max_rel_residual," << fmt(rep.max_rel_residual) << '\n'
        << "threshold," << fmt(kThreshold) << '\n'
        << "status," << (pass ? "PASS" : "FAIL") << '\n';
    return pass ? 0 : 1;
}

void cmd_terminate(const RunConfig& cfg, std::ostream& out) {
    PotentialSpec spec = load_spec(cfg.spec_path);
    spec.validate();
    Wavefunction wf =
        build_wavefunction(spec, cfg.energy, cfg.signs, Scheme::frobenius);
    std::vector<TerminationRoot> roots;
    if (cfg.mechanism == "frobenius")
        roots = frobenius_termination(wf.canonical.params, cfg.mu, cfg.order);
    else if (cfg.mechanism == "hypexp")
        roots = hypergeom_termination(wf.canonical.params, cfg.g0, cfg.order);
    else
        throw ParameterOutOfRange("--mechanism must be frobenius or hypexp");
    out << "root_index,re_q,im_q,coeff_index,re_c,im_c\n";
    for (size_t r = 0; r < roots.size(); ++r)
        for (size_t k = 0; k < roots[r].coeffs.size(); ++k)
            out << r << ',' << fmt(roots[r].q.real()) << ','
                << fmt(roots[r].q.imag()) << ',' << k << ','
                << fmt(roots[r].coeffs[k].real()) << ','
                << fmt(roots[r].coeffs[k].imag()) << '\n';
}

void cmd_fig2(std::ostream& out) {
    const double v3s[4] = {-1.05, -1.0, -0.9, -0.85};
    ClosedForm35 curves[4];
    for (int c = 0; c < 4; ++c)
        curves[c] = make_closed_form_35(0.0, -1.0, v3s[c], 1.0, 0.0, 0.0);
    out << "x,a,b,c,d\n";
    for (int k = 0; k < 400; ++k) {
        double x = -4.0 + 0.02 * k;
        out << fmt(x);
        for (int c = 0; c < 4; ++c)
            out << ',' << fmt(cf35_potential(curves[c], x));
        out << '\n';
    }
}

} // namespace

int run(const RunConfig& config, std::ostream& out) {
    if (config.tol <= 0) throw ParameterOutOfRange("tolerance must be > 0");
    if (config.command == "triads") {
        cmd_triads(config, out);
    } else if (config.command == "catalog") {
        cmd_catalog(config, out);
    } else if (config.command == "eval-potential") {
        cmd_eval_potential(config, out);
    } else if (config.command == "solve") {
        cmd_solve(config, out);
    } else if (config.command == "verify") {
        return cmd_verify(config, out);
    } else if (config.command == "terminate") {
        cmd_terminate(config, out);
    } else if (config.command == "fig2") {
        cmd_fig2(out);
    } else {
        throw UnknownCommand("unknown command: " + config.command);
    }
    return 0;
}

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"Heun-solvable Schrodinger potentials: catalog, solutions, "
                 "verification"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string grid_text, signs_text = "+++", scheme_text = "frobenius";
    std::string format_text = "csv", g0_text = "gamma";
    int mu_int = 0;
    double tol_flag = 0;
    bool tol_given = false;

    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", format_text, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
    };
    auto add_spec = [&](CLI::App* sub) {
        sub->add_option("--spec", cfg.spec_path, "spec JSON file")->required();
    };
    auto add_grid = [&](CLI::App* sub) {
        sub->add_option("--grid", grid_text, "x_min:x_max:n")->required();
    };
    auto add_tol = [&](CLI::App* sub) {
        sub->add_option_function<double>(
               "--tol",
               [&](double v) {
                   tol_flag = v;
                   tol_given = true;
               },
               "series truncation tolerance (overrides HEUN_TOL)");
    };
    auto add_signs = [&](CLI::App* sub) {
        sub->add_option("--signs", signs_text,
                        "exponent sign choice, e.g. +-+");
    };

    CLI::App* c_triads = app.add_subcommand("triads", "the 35 admissible exponent triples");
    add_format(c_triads);
    CLI::App* c_catalog = app.add_subcommand("catalog", "the 11 canonical potential classes");
    add_format(c_catalog);
    CLI::App* c_eval = app.add_subcommand("eval-potential", "tabulate V(x) for a spec");
    add_spec(c_eval);
    add_grid(c_eval);
    CLI::App* c_solve = app.add_subcommand("solve", "tabulate psi(x) and residual");
    add_spec(c_solve);
    add_grid(c_solve);
    add_tol(c_solve);
    add_signs(c_solve);
    c_solve->add_option("--energy", cfg.energy, "energy E")->required();
    c_solve->add_option("--scheme", scheme_text, "frobenius, hypexp, or auto")
        ->check(CLI::IsMember({"frobenius", "hypexp", "auto"}));
    CLI::App* c_verify = app.add_subcommand("verify", "independent residual check of the pipeline");
    add_spec(c_verify);
    add_tol(c_verify);
    add_signs(c_verify);
    c_verify->add_option("--energy", cfg.energy, "energy E")->required();
    CLI::App* c_term = app.add_subcommand("terminate", "accessory-parameter roots that terminate a series");
    add_spec(c_term);
    add_tol(c_term);
    add_signs(c_term);
    c_term->add_option("--energy", cfg.energy, "energy E");
    c_term->add_option("--mechanism", cfg.mechanism, "frobenius or hypexp")
        ->required()
        ->check(CLI::IsMember({"frobenius", "hypexp"}));
    c_term->add_option("--order", cfg.order, "termination order N")
        ->check(CLI::NonNegativeNumber);
    c_term->add_option("--mu", mu_int, "Frobenius exponent choice: 0 or 1")
        ->check(CLI::Range(0, 1));
    c_term->add_option("--g0", g0_text, "expansion anchor: gamma, alpha, beta")
        ->check(CLI::IsMember({"gamma", "alpha", "beta"}));
    CLI::App* c_fig2 = app.add_subcommand("fig2", "four sample curves of the closed-form potential");
    (void)c_fig2;

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        for (CLI::App* sub : app.get_subcommands()) cfg.command = sub->get_name();
        if (!grid_text.empty()) {
            int consumed = 0;
            if (std::sscanf(grid_text.c_str(), "%lf:%lf:%d%n", &cfg.x_min,
                            &cfg.x_max, &cfg.n, &consumed) != 3 ||
                grid_text[static_cast<size_t>(consumed)] != '\0')
                throw ParameterOutOfRange("--grid must be x_min:x_max:n");
            if (cfg.n < 2 || !(cfg.x_min < cfg.x_max))
                throw ParameterOutOfRange(
                    "--grid needs n >= 2 and x_min < x_max");
            cfg.have_grid = true;
        }
        if (signs_text.size() != 3)
            throw ParameterOutOfRange("--signs must be three of +/-");
        for (int i = 0; i < 3; ++i) {
            if (signs_text[static_cast<size_t>(i)] == '+')
                cfg.signs[static_cast<size_t>(i)] = +1;
            else if (signs_text[static_cast<size_t>(i)] == '-')
                cfg.signs[static_cast<size_t>(i)] = -1;
            else
                throw ParameterOutOfRange("--signs must be three of +/-");
        }
        cfg.scheme_auto = scheme_text == "auto";
        cfg.scheme = scheme_text == "hypexp" ? Scheme::hypexp : Scheme::frobenius;
        cfg.mu = mu_int == 0 ? MuChoice::zero : MuChoice::one_minus_gamma;
        cfg.g0 = g0_text == "alpha"
                     ? Gamma0Choice::alpha
                     : (g0_text == "beta" ? Gamma0Choice::beta
                                          : Gamma0Choice::gamma);
        cfg.format = format_text == "json" ? RunConfig::Format::json
                                           : RunConfig::Format::csv;
        if (tol_given) {
            cfg.tol = tol_flag;
        } else if (const char* env = std::getenv("HEUN_TOL")) {
            char* end = nullptr;
            double v = std::strtod(env, &end);
            if (end == env || *end != '\0' || !(v > 0))
                throw ParameterOutOfRange(
                    "HEUN_TOL must be a positive number");
            cfg.tol = v;
        }
        return run(cfg, out);
    } catch (const Error& e) {
        err << "error [" << e.name() << "]: " << e.what() << '\n';
        return e.exit_code();
    }
}

} // namespace heunpot
