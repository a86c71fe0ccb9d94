#pragma once

#include <array>
#include <ostream>
#include <string>

#include "heunpot/solution.hpp"

namespace heunpot {

struct RunConfig {
    std::string command; // triads|catalog|eval-potential|solve|verify|terminate|fig2
    std::string spec_path;
    double x_min = 0, x_max = 1;
    int n = 2;
    bool have_grid = false;
    double energy = 0;
    std::array<int, 3> signs{+1, +1, +1};
    Scheme scheme = Scheme::frobenius;
    bool scheme_auto = false; // pick frobenius/hypexp from the grid's reach
    enum class Format { csv, json } format = Format::csv;
    double tol = 1e-10;
    // terminate options
    std::string mechanism = "frobenius"; // frobenius|hypexp
    int order = 1;
    MuChoice mu = MuChoice::zero;
    Gamma0Choice g0 = Gamma0Choice::gamma;
};

// Dispatch an already-validated config; returns the process exit code
// (verify reports a failed threshold as 1). Throws heunpot::Error subtypes.
int run(const RunConfig& config, std::ostream& out);

// Parse argv, run, map errors to exit codes (validation 1, numerical 2).
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

} // namespace heunpot
