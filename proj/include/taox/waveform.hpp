#pragma once

#include <vector>

namespace taox {

/// One segment of an applied-voltage program. The segment's dt is both the
/// sampling interval of the recorded trace and the base step handed to the
/// coupled solver, which subdivides further on its own if a step is too stiff.
/// A ramp advanced this way is a staircase: the bias over each interval is the
/// ramp value at the interval end, so every voltage point gets a full dwell.
struct WaveformSegment {
    enum class Kind { Pulse, Ramp };
    Kind kind = Kind::Pulse;
    double v_start = 0.0;  // V; pulses use v_start as the level
    double v_end = 0.0;    // V; ramps interpolate linearly to this
    double duration = 0.0; // s
    double dt = 2e-5;      // s

    int step_count() const;
    double value(double t_local) const;  // bias at a time within the segment
};

struct Waveform {
    std::vector<WaveformSegment> segments;

    double duration() const;
    double value(double t) const;  // t relative to waveform start, clamped
    void validate() const;         // throws std::invalid_argument
};

Waveform pulse_waveform(double amplitude, double duration, double dt);
Waveform ramp_waveform(double v_start, double v_end, double duration, double dt);

} // namespace taox
