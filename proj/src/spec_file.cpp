#include "heunpot/spec_file.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "heunpot/errors.hpp"

namespace heunpot {

namespace {

using nlohmann::json;

double require_number(const json& j, const std::string& what) {
    if (!j.is_number()) throw BadSpecFile(what + " must be a number");
    return j.get<double>();
}

} // namespace

PotentialSpec parse_spec_json(const std::string& text) {
    json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) throw BadSpecFile("not valid JSON");
    if (!doc.is_object()) throw BadSpecFile("top level must be an object");

    PotentialSpec spec;

    if (!doc.contains("triad") || !doc["triad"].is_array() ||
        doc["triad"].size() != 3)
        throw BadSpecFile("\"triad\" must be an array of 3 doubled integers");
    for (int i = 0; i < 3; ++i) {
        double m2 = require_number(doc["triad"][i], "\"triad\" entry");
        if (!(std::abs(m2) < 1e9) || m2 != std::nearbyint(m2))
            throw BadSpecFile("\"triad\" entries must be integers");
        spec.triad.twom[i] = static_cast<int>(std::lrint(m2));
    }

    if (!doc.contains("a") || !doc["a"].is_array() || doc["a"].size() != 3)
        throw BadSpecFile("\"a\" must be an array of 3 singular positions");
    for (int i = 0; i < 3; ++i)
        spec.a[i] = require_number(doc["a"][i], "\"a\" entry");

    if (!doc.contains("v") || !doc["v"].is_array() || doc["v"].size() != 5)
        throw BadSpecFile("\"v\" must be an array of 5 coefficients");
    for (int i = 0; i < 5; ++i)
        spec.v[i] = require_number(doc["v"][i], "\"v\" entry");

    auto optional = [&doc](const char* key, double fallback) {
        if (!doc.contains(key)) return fallback;
        return require_number(doc.at(key), "\"" + std::string(key) + "\"");
    };
    spec.sigma = optional("sigma", 1.0);
    spec.x0 = optional("x0", 0.0);
    spec.hbar = optional("hbar", 1.0);
    spec.mass = optional("mass", 1.0);
    return spec;
}

PotentialSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadSpecFile("cannot read spec file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_spec_json(buf.str());
}

std::string spec_to_json(const PotentialSpec& spec) {
    nlohmann::ordered_json j;
    j["triad"] = spec.triad.twom;
    j["a"] = spec.a;
    j["v"] = spec.v;
    j["sigma"] = spec.sigma;
    j["x0"] = spec.x0;
    j["hbar"] = spec.hbar;
    j["mass"] = spec.mass;
    return j.dump();
}

} // namespace heunpot
