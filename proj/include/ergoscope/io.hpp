#pragma once

#include "ergoscope/voxel_grid.hpp"
#include "ergoscope/workspace.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace ergoscope {

/// Origin stamp written into every artifact.
struct Provenance {
    std::string config_hash;
    std::uint64_t seed = 0;

    std::string line() const;
};

/// "%.<digits>g" formatting (C locale).
std::string format_number(double v, int digits = 9);

/**
 * Scatter CSV: provenance comment line(s) starting with '#', then the
 * header `x,y,z,dex_raw,dex_norm` and one row per sample, 9 significant
 * digits.
 */
void write_scatter_csv(std::ostream& out, const ScatterField& field, const Provenance& prov);

/// Positions and dexterities of a scatter CSV (joint vectors are not stored).
ScatterField read_scatter_csv(std::istream& in);

/**
 * Grid text format:
 *
 *     ergoscope-grid 1
 *     # <provenance>
 *     origin <x> <y> <z>
 *     resolution <r>
 *     dims <ni> <nj> <nk>
 *     values
 *     <one value per line, k fastest, 17 significant digits>
 *
 * Indices in the file are 0-based; `origin` is the center of voxel (0,0,0).
 */
void write_grid(std::ostream& out, const VoxelGrid& grid, const Provenance& prov);
VoxelGrid read_grid(std::istream& in);

/// ASCII PLY with float x,y,z vertices and vertex_indices faces.
void write_ply(std::ostream& out, const TriangleMesh& mesh, const Provenance& prov);
TriangleMesh read_ply(std::istream& in);

/// Wavefront OBJ (1-based face indices).
void write_obj(std::ostream& out, const TriangleMesh& mesh, const Provenance& prov);

}  // namespace ergoscope
