#include "sidewise/field.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>

#include "sidewise/errors.hpp"

namespace sidewise {

namespace {

static_assert(std::endian::native == std::endian::little,
              "binary field dumps assume a little-endian host");

template <typename T>
void put(std::ostream& out, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.write(buf, sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    char buf[sizeof(T)];
    if (!in.read(buf, sizeof(T))) throw ContractError("binary field: truncated input");
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

void write_number(std::ostream& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

}  // namespace

SpaceTimeField::SpaceTimeField(const Grid1D& grid)
    : grid_(grid), data_(grid.nodes() * grid.levels(), 0.0) {}

SpaceTimeField::SpaceTimeField(const Grid1D& grid, std::vector<double> values)
    : grid_(grid), data_(std::move(values)) {
    if (data_.size() != grid_.nodes() * grid_.levels())
        throw ContractError("space-time field: value count does not match the grid");
}

double SpaceTimeField::at_time(std::size_t i, double t) const noexcept {
    const double s = std::clamp(t / grid_.dt(), 0.0, static_cast<double>(grid_.steps));
    const auto n = std::min(static_cast<std::size_t>(s), grid_.steps - 1);
    const double w = s - static_cast<double>(n);
    return (1.0 - w) * (*this)(i, n) + w * (*this)(i, n + 1);
}

double SpaceTimeField::max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

SpaceTimeField SpaceTimeField::time_reversed() const {
    SpaceTimeField out(grid_);
    for (std::size_t n = 0; n < levels(); ++n) {
        const auto src = level(levels() - 1 - n);
        std::copy(src.begin(), src.end(), out.level(n).begin());
    }
    return out;
}

void SpaceTimeField::write_csv(std::ostream& out) const {
    out << 't';
    for (std::size_t i = 0; i < nodes(); ++i) {
        out << ',';
        write_number(out, grid_.x(i));
    }
    out << '\n';
    for (std::size_t n = 0; n < levels(); ++n) {
        write_number(out, grid_.t(n));
        for (std::size_t i = 0; i < nodes(); ++i) {
            out << ',';
            write_number(out, (*this)(i, n));
        }
        out << '\n';
    }
}

void SpaceTimeField::write_binary(std::ostream& out) const {
    put<double>(out, grid_.length);
    put<double>(out, grid_.horizon);
    put<std::uint64_t>(out, grid_.cells);
    put<std::uint64_t>(out, grid_.steps);
    for (double v : data_) put<double>(out, v);
}

SpaceTimeField SpaceTimeField::read_binary(std::istream& in) {
    Grid1D g;
    g.length = get<double>(in);
    g.horizon = get<double>(in);
    g.cells = static_cast<std::size_t>(get<std::uint64_t>(in));
    g.steps = static_cast<std::size_t>(get<std::uint64_t>(in));
    g.validate();
    std::vector<double> values(g.nodes() * g.levels());
    for (auto& v : values) v = get<double>(in);
    return {g, std::move(values)};
}

}  // namespace sidewise
