#include "sidewise/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>

#include "sidewise/errors.hpp"

namespace sidewise {

Table read_table_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ContractError("cannot open table '" + path + "'");
    Table table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double x = 0.0, y = 0.0;
        if (!(row >> x >> y)) {
            if (table.x.empty() && line_no == 1) continue;  // header
            throw ContractError(path + ":" + std::to_string(line_no) + ": expected two numbers");
        }
        if (!table.x.empty() && !(x > table.x.back()))
            throw ContractError(path + ":" + std::to_string(line_no) + ": abscissae must increase");
        table.x.push_back(x);
        table.y.push_back(y);
    }
    if (table.x.size() < 2) throw ContractError("table '" + path + "' needs at least two rows");
    return table;
}

double interpolate(const Table& table, double s) {
    if (s < table.x.front() || s > table.x.back()) return 0.0;
    auto hi = std::upper_bound(table.x.begin(), table.x.end(), s);
    if (hi == table.x.end()) return table.y.back();
    const auto j = static_cast<std::size_t>(hi - table.x.begin());
    const double w = (s - table.x[j - 1]) / (table.x[j] - table.x[j - 1]);
    return (1.0 - w) * table.y[j - 1] + w * table.y[j];
}

Profile make_profile(const ProfileSpec& spec) {
    const ProfileSpec p = spec;
    if (p.kind == "zero") return [](double) { return 0.0; };
    if (p.kind == "sine")
        return [p](double s) { return p.amplitude * std::sin(std::numbers::pi * p.frequency * (s - p.shift)); };
    if (p.kind == "polynomial")
        return [p](double s) {
            double v = 0.0;
            for (auto c = p.coefficients.rbegin(); c != p.coefficients.rend(); ++c) v = v * (s - p.shift) + *c;
            return v;
        };
    if (p.kind == "smoothstep" || p.kind == "bump") {
        if (!(p.stop > p.start)) throw ContractError(p.kind + " profile needs start < stop");
        if (p.kind == "smoothstep")
            return [p](double s) {
                const double r = std::clamp((s - p.start) / (p.stop - p.start), 0.0, 1.0);
                return p.amplitude * r * r * (3.0 - 2.0 * r);
            };
        return [p](double s) {
            const double r = (2.0 * s - p.start - p.stop) / (p.stop - p.start);
            if (std::abs(r) >= 1.0) return 0.0;
            return p.amplitude * std::exp(1.0 - 1.0 / (1.0 - r * r));
        };
    }
    if (p.kind == "csv") {
        auto table = std::make_shared<Table>(read_table_csv(p.path));
        return [table](double s) { return interpolate(*table, s); };
    }
    throw ContractError("unknown profile kind '" + p.kind + "'");
}

}  // namespace sidewise
