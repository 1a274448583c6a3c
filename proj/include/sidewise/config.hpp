#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sidewise/coefficients.hpp"
#include "sidewise/errors.hpp"
#include "sidewise/profiles.hpp"

namespace sidewise {

/// Malformed configuration; `line` is 1-based (0 when unknown).
class ConfigError : public ContractError {
public:
    ConfigError(const std::string& field, std::size_t line, const std::string& what);
    const std::string& field() const noexcept { return field_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string field_;
    std::size_t line_;
};

struct CoefficientSpec {
    std::string kind = "constant";  ///< constant | piecewise | csv
    double length = 1.0;
    double rho = 1.0;
    double a = 1.0;
    std::vector<double> breakpoints;
    std::vector<double> rho_values;
    std::vector<double> a_values;
    std::string rho_csv;
    std::string a_csv;

    bool operator==(const CoefficientSpec&) const = default;
};

struct GridSpec {
    std::size_t cells = 200;
    double horizon = 2.5;
    double cfl_safety = 0.9;

    bool operator==(const GridSpec&) const = default;
};

struct ProblemSpec {
    ProfileSpec target;   ///< kind "factored" means d/dt(phi q)
    ProfileSpec phi;
    ProfileSpec q;
    ProfileSpec y0;
    ProfileSpec y1;
    ProfileSpec control;  ///< left datum for solve-forward
    ProfileSpec right;    ///< right datum for solve-forward
    ProfileSpec adjoint;  ///< s for solve-adjoint, masked up to L*beta

    bool operator==(const ProblemSpec&) const = default;
};

struct MethodSpec {
    std::string name = "hum";  ///< hum | characteristics | penalized | forward
    double tol = 1e-6;
    std::size_t max_iter = 500;
    std::string preconditioner = "none";  ///< none | h1
    double tracking_tol = 1e-2;
    std::vector<double> kappa{1e1, 1e2, 1e3, 1e4, 1e5, 1e6};
    double t_bar = 1.2;
    ProfileSpec datum;  ///< artificial left datum f of the characteristics method

    bool operator==(const MethodSpec&) const = default;
};

struct ObservabilitySpec {
    std::size_t samples = 50;
    std::size_t modes = 8;
    double disc_tol = -1.0;  ///< negative: refinement-shrinking default

    bool operator==(const ObservabilitySpec&) const = default;
};

struct OutputSpec {
    std::string dir = "out";
    bool field = false;  ///< also write field.bin

    bool operator==(const OutputSpec&) const = default;
};

struct RunConfig {
    std::uint64_t seed = 0;
    CoefficientSpec coefficients;
    GridSpec grid;
    ProblemSpec problem;
    MethodSpec method;
    ObservabilitySpec observability;
    OutputSpec output;

    bool operator==(const RunConfig&) const = default;
};

/// Parses YAML text. Unknown keys and type mismatches raise ConfigError with
/// the offending field and line; missing keys keep their defaults.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Every field in a fixed order, numbers in shortest round-trip form.
/// parse_config(canonical_config(c)) == c.
std::string canonical_config(const RunConfig& config);

/// Git blob hash (SHA-1 of "blob <size>\0" + canonical text), lowercase hex.
std::string config_hash(const RunConfig& config);

/// Validates shapes and cross-field rules (characteristics needs rho = a = 1).
void validate(const RunConfig& config);

/// Coefficient field on `cells` uniform cells.
CoefficientField build_field(const CoefficientSpec& spec, std::size_t cells);

}  // namespace sidewise
