#pragma once

#include <functional>
#include <string>
#include <vector>

namespace sidewise {

/// Named analytic profile of one variable (time for boundary data, space for
/// initial data), or a two-column CSV table read with linear interpolation.
///
///   zero
///   sine        amplitude * sin(pi * frequency * (s - shift))
///   smoothstep  amplitude * (3r^2 - 2r^3), r = (s - start) / (stop - start) clamped to [0, 1]
///   polynomial  sum_k coefficients[k] * (s - shift)^k
///   bump        amplitude * exp(1 - 1 / (1 - r^2)) for |r| < 1, r = (2s - start - stop) / (stop - start)
///   csv         table at `path`, zero outside its range
struct ProfileSpec {
    std::string kind = "zero";
    double amplitude = 1.0;
    double frequency = 1.0;
    double shift = 0.0;
    double start = 0.0;
    double stop = 1.0;
    std::vector<double> coefficients;
    std::string path;

    bool operator==(const ProfileSpec&) const = default;
};

using Profile = std::function<double(double)>;

/// Throws ContractError on unknown kinds, empty ranges or unreadable tables.
Profile make_profile(const ProfileSpec& spec);

/// Reads "x,value" rows (an optional non-numeric header line is skipped).
/// Abscissae must be strictly increasing.
struct Table {
    std::vector<double> x;
    std::vector<double> y;
};
Table read_table_csv(const std::string& path);
double interpolate(const Table& table, double s);

}  // namespace sidewise
