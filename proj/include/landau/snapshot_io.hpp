#pragma once

#include <filesystem>

#include "landau/distribution.hpp"

namespace landau {

struct Snapshot {
  GridDistribution f;
  double gamma;
  double time;
};

/// "LANDAU-GRID 1" snapshot: two ASCII header lines ("LANDAU-GRID 1" and
/// "N L gamma time") followed by N^3 little-endian doubles, first axis fastest.
void write_snapshot(const std::filesystem::path& path, const GridDistribution& f, double gamma, double time);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace landau
