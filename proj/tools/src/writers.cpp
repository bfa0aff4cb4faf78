#include "varfrac_cli/writers.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace varfrac_cli {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt(int v) { return std::to_string(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }

namespace {

std::ofstream open_or_throw(const std::string& path) {
    std::ofstream out(path, std::ios::binary); // binary: no newline translation
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    return out;
}

void provenance(std::ofstream& out, std::uint64_t config_hash) {
    char hash[32];
    std::snprintf(hash, sizeof(hash), "0x%016llx",
                  static_cast<unsigned long long>(config_hash));
    out << "# varfrac artifact_version=" << kArtifactVersion << "\n";
    out << "# config_hash=" << hash << "\n";
}

} // namespace

void write_csv(const std::string& path, std::uint64_t config_hash,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out = open_or_throw(path);
    provenance(out, config_hash);
    for (std::size_t i = 0; i < header.size(); ++i) {
        out << (i ? "," : "") << header[i];
    }
    out << "\n";
    for (const auto& row : rows) {
        if (row.size() != header.size()) {
            throw std::runtime_error("csv row width does not match header");
        }
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << row[i];
        }
        out << "\n";
    }
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

void write_vtk(const std::string& path, const varfrac::CylinderMesh& mesh,
               const varfrac::WeightSpec& spec, const std::vector<double>& u_full) {
    if (static_cast<int>(u_full.size()) != mesh.num_nodes()) {
        throw std::runtime_error("vtk writer: nodal vector does not match the mesh");
    }
    std::ofstream out = open_or_throw(path);
    out << "# vtk DataFile Version 3.0\n";
    out << "extension field on the truncated cylinder\n";
    out << "ASCII\n";
    out << "DATASET STRUCTURED_GRID\n";
    if (mesh.dim() == 1) {
        out << "DIMENSIONS " << mesh.n_x() << " " << mesh.n_y() << " 1\n";
    } else {
        out << "DIMENSIONS " << mesh.n_x() << " " << mesh.n_x() << " " << mesh.n_y() << "\n";
    }
    out << "POINTS " << mesh.num_nodes() << " double\n";
    for (int node = 0; node < mesh.num_nodes(); ++node) {
        varfrac::Point x = mesh.x_of(node);
        double y = mesh.y_of(node);
        if (mesh.dim() == 1) {
            out << fmt(x[0]) << " " << fmt(y) << " 0\n";
        } else {
            out << fmt(x[0]) << " " << fmt(x[1]) << " " << fmt(y) << "\n";
        }
    }
    out << "POINT_DATA " << mesh.num_nodes() << "\n";
    out << "SCALARS u double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (int node = 0; node < mesh.num_nodes(); ++node) {
        out << fmt(u_full[node]) << "\n";
    }
    out << "SCALARS order double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (int node = 0; node < mesh.num_nodes(); ++node) {
        out << fmt(spec.eval_order(mesh.x_of(node))) << "\n";
    }
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

} // namespace varfrac_cli
