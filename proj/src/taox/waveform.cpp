#include "taox/waveform.hpp"

#include <cmath>
#include <stdexcept>

namespace taox {

int WaveformSegment::step_count() const {
    return std::max(1, static_cast<int>(std::llround(duration / dt)));
}

double WaveformSegment::value(double t_local) const {
    if (kind == Kind::Pulse) return v_start;
    double x = std::min(std::max(t_local / duration, 0.0), 1.0);
    return v_start + (v_end - v_start) * x;
}

double Waveform::duration() const {
    double total = 0.0;
    for (const auto& s : segments) total += s.duration;
    return total;
}

double Waveform::value(double t) const {
    double t0 = 0.0;
    for (const auto& s : segments) {
        if (t <= t0 + s.duration) return s.value(t - t0);
        t0 += s.duration;
    }
    return segments.empty() ? 0.0 : segments.back().value(segments.back().duration);
}

void Waveform::validate() const {
    if (segments.empty()) throw std::invalid_argument("waveform: no segments");
    for (const auto& s : segments) {
        if (!(s.duration > 0.0) || !std::isfinite(s.duration))
            throw std::invalid_argument("waveform: segment duration must be positive");
        if (!(s.dt > 0.0) || s.dt > s.duration)
            throw std::invalid_argument("waveform: segment dt must be in (0, duration]");
        if (!std::isfinite(s.v_start) || !std::isfinite(s.v_end))
            throw std::invalid_argument("waveform: segment voltages must be finite");
    }
}

Waveform pulse_waveform(double amplitude, double duration, double dt) {
    Waveform wf;
    wf.segments.push_back({WaveformSegment::Kind::Pulse, amplitude, amplitude, duration, dt});
    wf.validate();
    return wf;
}

Waveform ramp_waveform(double v_start, double v_end, double duration, double dt) {
    Waveform wf;
    wf.segments.push_back({WaveformSegment::Kind::Ramp, v_start, v_end, duration, dt});
    wf.validate();
    return wf;
}

} // namespace taox
