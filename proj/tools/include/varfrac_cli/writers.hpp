#pragma once

#include <varfrac/assembly.hpp>
#include <varfrac/cylinder_mesh.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace varfrac_cli {

/// Version stamp written into every CSV provenance header; bump on any change
/// to an output format.
inline constexpr const char* kArtifactVersion = "1";

/// Shortest round-trip style formatting ("%.17g"): deterministic bytes for
/// identical doubles on every run.
std::string fmt(double v);
std::string fmt(int v);
std::string fmt(std::uint64_t v);
std::string fmt(bool v);

/// Writes rows under the provenance comments
///   # varfrac artifact_version=...
///   # config_hash=0x...
/// followed by the comma-joined header and one comma-joined line per row.
void write_csv(const std::string& path, std::uint64_t config_hash,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Legacy-ASCII VTK structured grid of the cylinder with point data u (full
/// nodal vector) and the order field replicated along y.
void write_vtk(const std::string& path, const varfrac::CylinderMesh& mesh,
               const varfrac::WeightSpec& spec, const std::vector<double>& u_full);

} // namespace varfrac_cli
