#ifndef CUBEKNOT_IO_HPP
#define CUBEKNOT_IO_HPP

#include <string>
#include <vector>

#include "cubeknot/knot.hpp"
#include "cubeknot/project.hpp"
#include "cubeknot/voxel.hpp"

namespace cubeknot {

/// Writes via a temp file + rename, so readers never observe a partial file.
void write_text_atomic(const std::string& path, const std::string& content);

void write_obj_mesh(const std::string& path, const TriMesh& mesh);

/// Cells as OBJ geometry in world units: squares become quad faces, edges
/// become line elements.
void write_obj_cells(const std::string& path, const std::vector<CellKey>& cells, Scale s);

void write_obj_polyline(const std::string& path, const std::vector<Eigen::Vector3d>& points, bool closed);

/// {"m": <int>, "vertices": [[i,j,k], ...]}
std::string cycle_json(const LatticeCycle& cycle);
void write_cycle_json(const std::string& path, const LatticeCycle& cycle);
LatticeCycle read_cycle_json(const std::string& path);

std::string cubeset_json(const CubeSet& set);

} // namespace cubeknot

#endif
