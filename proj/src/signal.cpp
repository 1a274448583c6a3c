#include "sidewise/signal.hpp"

#include <algorithm>
#include <cmath>

#include "sidewise/errors.hpp"

namespace sidewise {

namespace {

// Tolerance used when deciding whether a sample time lies at or before the cutoff.
constexpr double kTimeSlack = 1e-9;

}  // namespace

TimeSignal::TimeSignal(double t_start, double dt, std::vector<double> values, double active_from)
    : t_start_(t_start), dt_(dt), values_(std::move(values)), active_from_(active_from) {
    if (!(dt_ > 0.0)) throw ContractError("time signal: dt must be positive");
    const auto cut = cutoff_index();
    if (cut != npos) {
        for (std::size_t n = 0; n <= cut && n < values_.size(); ++n) {
            if (values_[n] != 0.0)
                throw ContractError("time signal: samples before the activity cutoff must vanish");
        }
    }
}

TimeSignal TimeSignal::zeros(const Grid1D& grid, double active_from) {
    return {0.0, grid.dt(), std::vector<double>(grid.levels(), 0.0), active_from};
}

TimeSignal TimeSignal::sample(const Grid1D& grid, const std::function<double(double)>& f,
                              double active_from) {
    std::vector<double> v(grid.levels());
    for (std::size_t n = 0; n < v.size(); ++n) v[n] = f(grid.t(n));
    return TimeSignal(0.0, grid.dt(), std::move(v)).masked(active_from);
}

double TimeSignal::t_end() const noexcept {
    return values_.empty() ? t_start_ : time(values_.size() - 1);
}

double TimeSignal::at(double t) const noexcept {
    if (values_.empty()) return 0.0;
    const double s = (t - t_start_) / dt_;
    const double last = static_cast<double>(values_.size() - 1);
    if (s < -kTimeSlack || s > last + kTimeSlack) return 0.0;
    const double c = std::clamp(s, 0.0, last);
    const auto i = std::min(static_cast<std::size_t>(c), values_.size() - 1);
    if (i + 1 >= values_.size()) return values_.back();
    const double w = c - static_cast<double>(i);
    return (1.0 - w) * values_[i] + w * values_[i + 1];
}

std::size_t TimeSignal::cutoff_index() const noexcept {
    if (!std::isfinite(active_from_)) return npos;
    const double s = (active_from_ - t_start_) / dt_;
    if (s < -kTimeSlack) return npos;
    return static_cast<std::size_t>(std::floor(s + kTimeSlack));
}

TimeSignal TimeSignal::masked(double cutoff) const {
    TimeSignal out = *this;
    out.active_from_ = cutoff;
    const auto cut = out.cutoff_index();
    if (cut != npos) {
        for (std::size_t n = 0; n <= cut && n < out.values_.size(); ++n) out.values_[n] = 0.0;
    }
    return out;
}

TimeSignal TimeSignal::resampled(const Grid1D& grid) const {
    std::vector<double> v(grid.levels());
    for (std::size_t n = 0; n < v.size(); ++n) v[n] = at(grid.t(n));
    return TimeSignal(0.0, grid.dt(), std::move(v)).masked(active_from_);
}

TimeSignal TimeSignal::reversed() const {
    std::vector<double> v(values_.rbegin(), values_.rend());
    return {t_start_, dt_, std::move(v)};
}

double TimeSignal::max_abs() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace sidewise
