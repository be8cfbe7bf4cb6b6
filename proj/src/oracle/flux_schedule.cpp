#include "spinmem/oracle/flux_schedule.hpp"

#include <algorithm>
#include <cmath>

#include "spinmem/error.hpp"

namespace spinmem::oracle {

FluxSchedule::FluxSchedule(double initial, std::vector<FluxSegment> segments)
    : initial_(initial), segments_(std::move(segments)) {
    if (!std::isfinite(initial_)) throw Error(ErrorCode::invalid_parameter, "schedule start must be finite");
    for (const auto& s : segments_) {
        if (!(s.duration > 0.0) || !std::isfinite(s.duration)) {
            throw Error(ErrorCode::invalid_parameter, "schedule segment durations must be positive");
        }
        if (!std::isfinite(s.target)) {
            throw Error(ErrorCode::invalid_parameter, "schedule targets must be finite");
        }
    }
}

double FluxSchedule::duration() const noexcept {
    double total = 0.0;
    for (const auto& s : segments_) total += s.duration;
    return total;
}

double FluxSchedule::final_frequency() const noexcept {
    return segments_.empty() ? initial_ : segments_.back().target;
}

double FluxSchedule::omega_at(double t) const noexcept {
    double start_freq = initial_;
    double start_time = 0.0;
    if (t <= 0.0) return initial_;
    for (const auto& s : segments_) {
        if (t <= start_time + s.duration) {
            const double x = (t - start_time) / s.duration;
            return start_freq + x * (s.target - start_freq);
        }
        start_time += s.duration;
        start_freq = s.target;
    }
    return start_freq;
}

double FluxSchedule::slope_at(double t) const noexcept {
    double start_freq = initial_;
    double start_time = 0.0;
    for (const auto& s : segments_) {
        if (t < start_time + s.duration) return (s.target - start_freq) / s.duration;
        start_time += s.duration;
        start_freq = s.target;
    }
    return 0.0;
}

double FluxSchedule::min_frequency() const noexcept {
    double lo = initial_;
    for (const auto& s : segments_) lo = std::min(lo, s.target);
    return lo;
}

double FluxSchedule::max_frequency() const noexcept {
    double hi = initial_;
    for (const auto& s : segments_) hi = std::max(hi, s.target);
    return hi;
}

void FluxSchedule::check_range(double lo, double hi) const {
    if (min_frequency() < lo || max_frequency() > hi) {
        throw Error(ErrorCode::out_of_range, "flux schedule leaves the bus tuning range");
    }
}

FluxSchedule FluxSchedule::sped_up(double factor) const {
    if (!(factor > 0.0)) throw Error(ErrorCode::invalid_parameter, "speed-up factor must be positive");
    auto segs = segments_;
    for (auto& s : segs) s.duration /= factor;
    return FluxSchedule(initial_, std::move(segs));
}

}  // namespace spinmem::oracle
