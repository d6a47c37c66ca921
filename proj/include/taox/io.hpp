#pragma once

#include "taox/analysis.hpp"
#include "taox/protocol.hpp"
#include "taox/state.hpp"

#include <string>
#include <vector>

namespace taox {

/// Shortest round-trip decimal text for a double; the same value always
/// produces the same bytes, which the output comparisons rely on.
std::string format_double(double v);

/// Comma-separated trace table, one row per sample, preceded by "# " metadata
/// lines. No timestamps anywhere: reruns of the same inputs must be
/// byte-identical.
void write_trace_csv(const std::string& path, const TraceResult& trace,
                     const std::vector<std::string>& metadata);

void write_cycles_csv(const std::string& path, const CycleResult& cycles,
                      const std::vector<std::string>& metadata);

std::string sweep_csv_text(const SweepMap& map, const std::vector<std::string>& metadata);
void write_sweep_csv(const std::string& path, const SweepMap& map,
                     const std::vector<std::string>& metadata);

void write_profile_csv(const std::string& path, const std::vector<ProfilePoint>& profile,
                       const std::string& value_name);

/// Legacy-format VTK rectilinear snapshot of the cell fields; one layer of
/// cells in the extrusion direction. Loads in ParaView/VisIt.
void write_snapshot_vtk(const std::string& path, const Mesh& mesh, const FieldState& state);

} // namespace taox
