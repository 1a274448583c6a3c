#include "sidewise/config.hpp"

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace sidewise {

ConfigError::ConfigError(const std::string& field, std::size_t line, const std::string& what)
    : ContractError((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                    (field.empty() ? std::string() : "field '" + field + "': ") + what),
      field_(field), line_(line) {}

namespace {

std::size_t line_of(const YAML::Node& node) {
    const auto mark = node.Mark();
    return mark.is_null() ? 0 : static_cast<std::size_t>(mark.line) + 1;
}

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

// Rejects keys outside `allowed` so typos do not silently fall back to defaults.
void expect_map(const YAML::Node& node, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!node.IsMap()) throw ConfigError(path, line_of(node), "expected a mapping");
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!keys.count(key)) throw ConfigError(join(path, key), line_of(kv.first), "unknown key");
    }
}

template <class T>
void read(const YAML::Node& parent, const std::string& path, const char* key, T& out) {
    const YAML::Node node = parent[key];
    if (!node) return;
    try {
        out = node.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError(join(path, key), line_of(node), "value has the wrong type");
    }
}

void read_profile(const YAML::Node& parent, const std::string& path, const char* key, ProfileSpec& out) {
    const YAML::Node node = parent[key];
    if (!node) return;
    const std::string here = join(path, key);
    expect_map(node, here, {"kind", "amplitude", "frequency", "shift", "start", "stop", "coefficients", "path"});
    read(node, here, "kind", out.kind);
    read(node, here, "amplitude", out.amplitude);
    read(node, here, "frequency", out.frequency);
    read(node, here, "shift", out.shift);
    read(node, here, "start", out.start);
    read(node, here, "stop", out.stop);
    read(node, here, "coefficients", out.coefficients);
    read(node, here, "path", out.path);
    static const std::set<std::string> kinds{"zero", "sine", "smoothstep", "polynomial", "bump", "csv", "factored"};
    if (!kinds.count(out.kind)) throw ConfigError(join(here, "kind"), line_of(node["kind"]), "unknown profile kind '" + out.kind + "'");
    if (out.kind == "csv" && out.path.empty()) throw ConfigError(join(here, "path"), line_of(node), "csv profile needs a path");
}

std::string number(double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    std::string s(buf.data(), res.ptr);
    // keep the scalar typed as a float on re-read
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

void emit_numbers(YAML::Emitter& out, const std::vector<double>& values) {
    out << YAML::Flow << YAML::BeginSeq;
    for (double v : values) out << number(v);
    out << YAML::EndSeq;
}

void emit_profile(YAML::Emitter& out, const char* key, const ProfileSpec& p) {
    out << YAML::Key << key << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "kind" << YAML::Value << p.kind;
    out << YAML::Key << "amplitude" << YAML::Value << number(p.amplitude);
    out << YAML::Key << "frequency" << YAML::Value << number(p.frequency);
    out << YAML::Key << "shift" << YAML::Value << number(p.shift);
    out << YAML::Key << "start" << YAML::Value << number(p.start);
    out << YAML::Key << "stop" << YAML::Value << number(p.stop);
    out << YAML::Key << "coefficients" << YAML::Value;
    emit_numbers(out, p.coefficients);
    out << YAML::Key << "path" << YAML::Value << YAML::DoubleQuoted << p.path;
    out << YAML::EndMap;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError("", e.mark.is_null() ? 0 : static_cast<std::size_t>(e.mark.line) + 1, e.msg);
    }
    RunConfig c;
    if (root.IsNull()) return c;
    expect_map(root, "", {"seed", "coefficients", "grid", "problem", "method", "observability", "output"});
    read(root, "", "seed", c.seed);

    if (const auto n = root["coefficients"]) {
        expect_map(n, "coefficients", {"kind", "length", "rho", "a", "breakpoints", "rho_values", "a_values", "rho_csv", "a_csv"});
        auto& s = c.coefficients;
        read(n, "coefficients", "kind", s.kind);
        read(n, "coefficients", "length", s.length);
        read(n, "coefficients", "rho", s.rho);
        read(n, "coefficients", "a", s.a);
        read(n, "coefficients", "breakpoints", s.breakpoints);
        read(n, "coefficients", "rho_values", s.rho_values);
        read(n, "coefficients", "a_values", s.a_values);
        read(n, "coefficients", "rho_csv", s.rho_csv);
        read(n, "coefficients", "a_csv", s.a_csv);
        if (s.kind != "constant" && s.kind != "piecewise" && s.kind != "csv")
            throw ConfigError("coefficients.kind", line_of(n["kind"]), "expected constant, piecewise or csv");
    }
    if (const auto n = root["grid"]) {
        expect_map(n, "grid", {"cells", "horizon", "cfl_safety"});
        read(n, "grid", "cells", c.grid.cells);
        read(n, "grid", "horizon", c.grid.horizon);
        read(n, "grid", "cfl_safety", c.grid.cfl_safety);
    }
    if (const auto n = root["problem"]) {
        expect_map(n, "problem", {"target", "phi", "q", "y0", "y1", "control", "right", "adjoint"});
        auto& p = c.problem;
        read_profile(n, "problem", "target", p.target);
        read_profile(n, "problem", "phi", p.phi);
        read_profile(n, "problem", "q", p.q);
        read_profile(n, "problem", "y0", p.y0);
        read_profile(n, "problem", "y1", p.y1);
        read_profile(n, "problem", "control", p.control);
        read_profile(n, "problem", "right", p.right);
        read_profile(n, "problem", "adjoint", p.adjoint);
    }
    if (const auto n = root["method"]) {
        expect_map(n, "method", {"name", "tol", "max_iter", "preconditioner", "tracking_tol", "kappa", "t_bar", "datum"});
        auto& m = c.method;
        read(n, "method", "name", m.name);
        read(n, "method", "tol", m.tol);
        read(n, "method", "max_iter", m.max_iter);
        read(n, "method", "preconditioner", m.preconditioner);
        read(n, "method", "tracking_tol", m.tracking_tol);
        read(n, "method", "kappa", m.kappa);
        read(n, "method", "t_bar", m.t_bar);
        read_profile(n, "method", "datum", m.datum);
    }
    if (const auto n = root["observability"]) {
        expect_map(n, "observability", {"samples", "modes", "disc_tol"});
        read(n, "observability", "samples", c.observability.samples);
        read(n, "observability", "modes", c.observability.modes);
        read(n, "observability", "disc_tol", c.observability.disc_tol);
    }
    if (const auto n = root["output"]) {
        expect_map(n, "output", {"dir", "field"});
        read(n, "output", "dir", c.output.dir);
        read(n, "output", "field", c.output.field);
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", 0, "cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string canonical_config(const RunConfig& c) {
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "seed" << YAML::Value << c.seed;

    const auto& s = c.coefficients;
    out << YAML::Key << "coefficients" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "kind" << YAML::Value << s.kind;
    out << YAML::Key << "length" << YAML::Value << number(s.length);
    out << YAML::Key << "rho" << YAML::Value << number(s.rho);
    out << YAML::Key << "a" << YAML::Value << number(s.a);
    out << YAML::Key << "breakpoints" << YAML::Value;
    emit_numbers(out, s.breakpoints);
    out << YAML::Key << "rho_values" << YAML::Value;
    emit_numbers(out, s.rho_values);
    out << YAML::Key << "a_values" << YAML::Value;
    emit_numbers(out, s.a_values);
    out << YAML::Key << "rho_csv" << YAML::Value << YAML::DoubleQuoted << s.rho_csv;
    out << YAML::Key << "a_csv" << YAML::Value << YAML::DoubleQuoted << s.a_csv;
    out << YAML::EndMap;

    out << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "cells" << YAML::Value << c.grid.cells;
    out << YAML::Key << "horizon" << YAML::Value << number(c.grid.horizon);
    out << YAML::Key << "cfl_safety" << YAML::Value << number(c.grid.cfl_safety);
    out << YAML::EndMap;

    const auto& p = c.problem;
    out << YAML::Key << "problem" << YAML::Value << YAML::BeginMap;
    emit_profile(out, "target", p.target);
    emit_profile(out, "phi", p.phi);
    emit_profile(out, "q", p.q);
    emit_profile(out, "y0", p.y0);
    emit_profile(out, "y1", p.y1);
    emit_profile(out, "control", p.control);
    emit_profile(out, "right", p.right);
    emit_profile(out, "adjoint", p.adjoint);
    out << YAML::EndMap;

    const auto& m = c.method;
    out << YAML::Key << "method" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << m.name;
    out << YAML::Key << "tol" << YAML::Value << number(m.tol);
    out << YAML::Key << "max_iter" << YAML::Value << m.max_iter;
    out << YAML::Key << "preconditioner" << YAML::Value << m.preconditioner;
    out << YAML::Key << "tracking_tol" << YAML::Value << number(m.tracking_tol);
    out << YAML::Key << "kappa" << YAML::Value;
    emit_numbers(out, m.kappa);
    out << YAML::Key << "t_bar" << YAML::Value << number(m.t_bar);
    emit_profile(out, "datum", m.datum);
    out << YAML::EndMap;

    out << YAML::Key << "observability" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "samples" << YAML::Value << c.observability.samples;
    out << YAML::Key << "modes" << YAML::Value << c.observability.modes;
    out << YAML::Key << "disc_tol" << YAML::Value << number(c.observability.disc_tol);
    out << YAML::EndMap;

    out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "dir" << YAML::Value << YAML::DoubleQuoted << c.output.dir;
    out << YAML::Key << "field" << YAML::Value << c.output.field;
    out << YAML::EndMap;

    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

std::string config_hash(const RunConfig& config) {
    const std::string body = canonical_config(config);
    const std::string blob = "blob " + std::to_string(body.size()) + '\0' + body;
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int size = 0;
    if (EVP_Digest(blob.data(), blob.size(), digest.data(), &size, EVP_sha1(), nullptr) != 1)
        throw std::runtime_error("SHA-1 digest failed");
    std::string hex;
    char byte[3];
    for (unsigned int i = 0; i < size; ++i) {
        std::snprintf(byte, sizeof byte, "%02x", digest[i]);
        hex += byte;
    }
    return hex;
}

CoefficientField build_field(const CoefficientSpec& spec, std::size_t cells) {
    if (spec.kind == "constant") return CoefficientField::constant(spec.length, spec.rho, spec.a, cells);
    if (spec.kind == "piecewise")
        return CoefficientField::piecewise_constant(spec.length, spec.breakpoints, spec.rho_values, spec.a_values, cells);
    if (spec.kind == "csv") {
        const Table rho = read_table_csv(spec.rho_csv);
        const Table a = read_table_csv(spec.a_csv);
        std::vector<double> r(cells + 1), k(cells + 1);
        for (std::size_t i = 0; i <= cells; ++i) {
            const double x = spec.length * static_cast<double>(i) / static_cast<double>(cells);
            if (x < rho.x.front() || x > rho.x.back() || x < a.x.front() || x > a.x.back())
                throw ConfigError("coefficients", 0, "coefficient tables must cover [0, L]");
            r[i] = interpolate(rho, x);
            k[i] = interpolate(a, x);
        }
        return CoefficientField(spec.length, std::move(r), std::move(k));
    }
    throw ConfigError("coefficients.kind", 0, "expected constant, piecewise or csv");
}

void validate(const RunConfig& c) {
    if (c.grid.cells < 4) throw ConfigError("grid.cells", 0, "need at least 4 cells");
    if (!(c.grid.horizon > 0.0)) throw ConfigError("grid.horizon", 0, "must be positive");
    if (!(c.grid.cfl_safety > 0.0 && c.grid.cfl_safety < 1.0))
        throw ConfigError("grid.cfl_safety", 0, "must lie in (0, 1)");
    if (!(c.coefficients.length > 0.0)) throw ConfigError("coefficients.length", 0, "must be positive");
    static const std::set<std::string> methods{"hum", "characteristics", "penalized", "forward"};
    if (!methods.count(c.method.name))
        throw ConfigError("method.name", 0, "expected hum, characteristics, penalized or forward");
    if (c.method.preconditioner != "none" && c.method.preconditioner != "h1")
        throw ConfigError("method.preconditioner", 0, "expected none or h1");
    if (c.method.max_iter == 0) throw ConfigError("method.max_iter", 0, "must be positive");
    if (c.method.kappa.empty()) throw ConfigError("method.kappa", 0, "need at least one value");
    for (double k : c.method.kappa)
        if (!(k >= 0.0)) throw ConfigError("method.kappa", 0, "values must be nonnegative");
    if (c.problem.target.kind == "factored" && (c.problem.phi.kind == "factored" || c.problem.q.kind == "factored"))
        throw ConfigError("problem.target", 0, "factors phi and q must be plain profiles");
    const auto field = build_field(c.coefficients, c.grid.cells);
    if (c.method.name == "characteristics" && !field.is_unit())
        throw ConfigError("method.name", 0, "the characteristics method requires rho = a = 1");
}

}  // namespace sidewise
