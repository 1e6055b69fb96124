#pragma once

#include "chsplit/fem.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace chsplit {

/// Legacy ASCII VTK unstructured grid with one scalar per vertex.
///
/// A P1 field is written on its own mesh. A P2 field is written on the once
/// refined mesh, whose vertices coincide with the P2 nodes, so every dof value
/// appears exactly once. Values use 17 significant digits.
void write_snapshot(const Field& field, const std::filesystem::path& path, const std::string& name = "phi",
                    const std::string& title = "chsplit");

struct Snapshot {
    std::vector<Point> points;
    std::vector<std::array<int, 3>> cells;
    std::vector<double> values;
};

/// Reads back a file produced by write_snapshot. Throws IoError on malformed input.
Snapshot read_snapshot(const std::filesystem::path& path);

} // namespace chsplit
