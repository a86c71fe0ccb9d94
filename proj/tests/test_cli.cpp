#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "heunpot/cli.hpp"
#include "heunpot/solution.hpp"
#include "heunpot/spec_file.hpp"

namespace {

struct CliResult {
    int exit_code;
    std::string out;
    std::string err;
};

CliResult run(std::vector<const char*> args) {
    args.insert(args.begin(), "heunpot");
    std::ostringstream out, err;
    int rc = heunpot::run_cli(static_cast<int>(args.size()), args.data(), out,
                              err);
    return {rc, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

std::vector<double> row_of(const std::string& line) {
    std::vector<double> vals;
    std::istringstream in(line);
    std::string field;
    while (std::getline(in, field, ',')) vals.push_back(std::stod(field));
    return vals;
}

std::string write_temp(const std::string& name, const std::string& text) {
    std::string path = "/tmp/heunpot_cli_" + name;
    std::ofstream(path) << text;
    return path;
}

const char* kSpecText =
    R"({"triad":[2,0,0],"a":[1,0,0.5],"v":[0.3,-0.2,0.1,0.05,0],"sigma":1,"x0":0})";

} // namespace

TEST_CASE("triads listing has the full census") {
    CliResult r = run({"triads"});
    CHECK(r.exit_code == 0);
    auto rows = lines_of(r.out);
    REQUIRE(rows.size() == 36);
    CHECK(rows[0] == "m1,m2,m3,class_m1,class_m2,class_m3,class_index");
    CHECK(rows[1] == "1,1,1,1,1,1,0");
    // class_index stays within the 11 canonical classes
    for (size_t i = 1; i < rows.size(); ++i) {
        auto vals = row_of(rows[i]);
        REQUIRE(vals.size() == 7);
        CHECK(vals[6] >= 0);
        CHECK(vals[6] <= 10);
    }
}

TEST_CASE("catalog json entries are loadable specs") {
    CliResult r = run({"catalog", "--format", "json"});
    CHECK(r.exit_code == 0);
    // every element must round-trip through the spec parser unchanged
    auto doc = nlohmann::json::parse(r.out);
    REQUIRE(doc.is_array());
    REQUIRE(doc.size() == 11);
    int idx = 0;
    for (const auto& el : doc) {
        heunpot::PotentialSpec spec = heunpot::parse_spec_json(el.dump());
        CHECK_NOTHROW(spec.validate());
        CHECK(el.at("class_index").get<int>() == idx++);
        CHECK(el.at("map").is_string());
    }
}

TEST_CASE("catalog csv covers all 11 classes") {
    CliResult r = run({"catalog"});
    CHECK(r.exit_code == 0);
    auto rows = lines_of(r.out);
    REQUIRE(rows.size() == 12);
    CHECK(rows[0] ==
          "class_index,m1,m2,m3,a1,a2,a3,branch_lo,branch_hi,map");
}

TEST_CASE("eval-potential tabulates V along the map") {
    std::string path = write_temp("spec.json", kSpecText);
    CliResult r = run({"eval-potential", "--spec", path.c_str(), "--grid",
                       "0:2:5"});
    CHECK(r.exit_code == 0);
    auto rows = lines_of(r.out);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0] == "x,z,V");
    // z(x) = a1 + e^x for this class; V = v(z)/r(z)
    auto vals = row_of(rows[1]);
    CHECK(vals[0] == 0.0);
    CHECK(vals[1] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("solve reports small residuals inside the series disk") {
    std::string path = write_temp("spec.json", kSpecText);
    CliResult r = run({"solve", "--spec", path.c_str(), "--energy", "0.8",
                       "--grid", "-3:-1.5:4"});
    CHECK(r.exit_code == 0);
    auto rows = lines_of(r.out);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == "x,z,re_psi,im_psi,residual");
    for (size_t i = 1; i < rows.size(); ++i) {
        auto vals = row_of(rows[i]);
        REQUIRE(vals.size() == 5);
        CHECK(vals[4] < 1e-6);
    }
}

TEST_CASE("solve --scheme auto switches when the grid leaves the disk") {
    std::string path = write_temp("spec.json", kSpecText);
    // this grid maps outside the Frobenius disk: the fixed scheme refuses
    CliResult fixed = run({"solve", "--spec", path.c_str(), "--energy", "0.8",
                           "--grid", "0:1:5"});
    CHECK(fixed.exit_code == 1);
    CHECK(fixed.err.find("GridTooCoarse") != std::string::npos);
}

TEST_CASE("verify passes a consistent spec") {
    std::string path = write_temp("spec.json", kSpecText);
    CliResult r = run({"verify", "--spec", path.c_str(), "--energy", "0.8"});
    CHECK(r.exit_code == 0);
    auto rows = lines_of(r.out);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "points,200");
    CHECK(rows[3] == "status,PASS");
}

TEST_CASE("verify rejects a structurally corrupted spec with exit 2") {
    std::string path = write_temp(
        "bad.json",
        R"({"triad":[2,0,0],"a":[1,0,0.5],"v":["oops",-0.2,0.1,0.05,0]})");
    CliResult r = run({"verify", "--spec", path.c_str(), "--energy", "0.8"});
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("BadSpecFile") != std::string::npos);
}

TEST_CASE("domain errors exit 1") {
    std::string path = write_temp(
        "coincident.json",
        R"({"triad":[2,0,0],"a":[1,1,0.5],"v":[0.3,-0.2,0.1,0.05,0]})");
    CliResult r = run({"verify", "--spec", path.c_str(), "--energy", "0.8"});
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("CoincidentSingularities") != std::string::npos);
}

TEST_CASE("unknown command exits 1") {
    CliResult r = run({"frobulate"});
    CHECK(r.exit_code == 1);
    CHECK(!r.err.empty());
}

TEST_CASE("terminate lists accessory roots on an arranged spec") {
    // shift v by a quartic vanishing at every singularity: only alpha*beta
    // moves, and we park the smaller root exactly at -N
    heunpot::PotentialSpec s;
    s.triad.twom = {2, 2, 2};
    s.a = {0.0, 2.0, -1.0};
    s.v = {73.0 / 45, -3827.0 / 11025, 13921.0 / 22050, 0.5, -1.0 / 3};
    const double E = 1.4;
    const std::array<int, 3> signs{+1, -1, +1};
    const int N = 1;
    heunpot::Wavefunction base = heunpot::build_wavefunction(
        s, E, signs, heunpot::Scheme::frobenius);
    double f = (base.heun.alpha + base.heun.beta).real();
    double ab = (base.heun.alpha * base.heun.beta).real();
    double dv4 = (ab + N * (f + N)) / s.km();
    s.v[4] += dv4;
    s.v[3] += dv4 * (-(s.a[1] + s.a[2]));
    s.v[2] += dv4 * (s.a[1] * s.a[2]);
    std::string path = write_temp("qes.json", heunpot::spec_to_json(s));

    CliResult r = run({"terminate", "--spec", path.c_str(), "--energy", "1.4",
                       "--signs", "+-+", "--mechanism", "frobenius",
                       "--order", "1"});
    CHECK(r.exit_code == 0);
    auto rows = lines_of(r.out);
    REQUIRE(rows.size() == 5); // header + 2 roots x 2 coefficients
    CHECK(rows[0] == "root_index,re_q,im_q,coeff_index,re_c,im_c");
    CHECK(row_of(rows[1])[4] == 1.0); // series normalized to c_0 = 1
}

TEST_CASE("terminate without the arrangement exits 1") {
    std::string path = write_temp("spec.json", kSpecText);
    CliResult r = run({"terminate", "--spec", path.c_str(), "--mechanism",
                       "hypexp", "--order", "1"});
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("PreconditionEq32") != std::string::npos);
}

TEST_CASE("fig2 matches the reference samples") {
    CliResult r = run({"fig2"});
    CHECK(r.exit_code == 0);
    auto rows = lines_of(r.out);
    REQUIRE(rows.size() == 401);
    CHECK(rows[0] == "x,a,b,c,d");

    // reference values computed with 50-digit arithmetic
    struct Sample {
        size_t row; // x = -4 + 0.02 (row-1)
        double a, b, c, d;
    };
    const Sample samples[3] = {
        {101, 0.1525748344306473050168, -0.00008087427208910272143286,
         -0.2759318779764246649387, -0.3991271729780238194178},
        {201, 0.02416215869051502528871, -0.06066017177982128660127,
         -0.2153048327204939103812, -0.2851271631908302222712},
        {301, -0.09698587109322220650248, -0.1005524351976659959272,
         -0.107145977107690828036, -0.1101729549132718707199},
    };
    for (const auto& s : samples) {
        auto vals = row_of(rows[s.row]);
        REQUIRE(vals.size() == 5);
        CHECK(vals[1] == doctest::Approx(s.a).epsilon(1e-12));
        CHECK(vals[2] == doctest::Approx(s.b).epsilon(1e-12));
        CHECK(vals[3] == doctest::Approx(s.c).epsilon(1e-12));
        CHECK(vals[4] == doctest::Approx(s.d).epsilon(1e-12));
    }

    // output is byte-deterministic
    CliResult again = run({"fig2"});
    CHECK(again.out == r.out);
}

TEST_CASE("tolerance precedence: flag beats HEUN_TOL beats default") {
    std::string path = write_temp("spec.json", kSpecText);
    std::vector<const char*> base_args = {"solve",   "--spec", path.c_str(),
                                          "--energy", "0.8",   "--grid",
                                          "-3:-2:3"};
    CliResult def = run(base_args);

    setenv("HEUN_TOL", "1e-3", 1);
    CliResult env = run(base_args);
    auto with_tol = base_args;
    with_tol.push_back("--tol");
    with_tol.push_back("1e-10");
    CliResult flag = run(with_tol);
    setenv("HEUN_TOL", "not-a-number", 1);
    CliResult bad = run(base_args);
    unsetenv("HEUN_TOL");

    CHECK(def.exit_code == 0);
    CHECK(env.exit_code == 0);
    CHECK(env.out != def.out);  // coarser series changes the digits
    CHECK(flag.out == def.out); // flag restores the default tolerance
    CHECK(bad.exit_code == 1);
    CHECK(bad.err.find("ParameterOutOfRange") != std::string::npos);
}

TEST_CASE("installed binary agrees with the in-process driver") {
    // the ctest harness points this at the real executable
    std::string cmd = std::string(HEUNPOT_CLI_PATH) + " triads";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[512];
    while (size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    int rc = pclose(pipe);
    CHECK(rc == 0);
    CHECK(out == run({"triads"}).out);
}
