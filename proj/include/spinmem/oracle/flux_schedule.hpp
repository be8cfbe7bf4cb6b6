// Piecewise-linear bus-frequency profile omega_B(t)

#pragma once

#include <vector>

namespace spinmem::oracle {

struct FluxSegment {
    double target{0.0};    // bus frequency reached at the end of the ramp, rad/s
    double duration{0.0};  // ramp duration, s
};

class FluxSchedule {
public:
    // Durations must be positive.
    FluxSchedule(double initial, std::vector<FluxSegment> segments);

    double initial() const noexcept { return initial_; }
    const std::vector<FluxSegment>& segments() const noexcept { return segments_; }

    double duration() const noexcept;
    double final_frequency() const noexcept;
    // Linear interpolation; clamps outside [0, duration()].
    double omega_at(double t) const noexcept;
    // Ramp rate of the segment active at t, rad/s^2.
    double slope_at(double t) const noexcept;

    double min_frequency() const noexcept;
    double max_frequency() const noexcept;
    // Throws out_of_range when any node leaves [lo, hi].
    void check_range(double lo, double hi) const;

    // Same targets, every duration divided by `factor`.
    FluxSchedule sped_up(double factor) const;

private:
    double initial_;
    std::vector<FluxSegment> segments_;
};

}  // namespace spinmem::oracle
