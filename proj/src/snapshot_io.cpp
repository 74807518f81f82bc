#include "landau/snapshot_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "landau/error.hpp"

namespace landau {

namespace {

constexpr const char* kMagic = "LANDAU-GRID 1";

std::uint64_t to_little_endian(std::uint64_t x) {
  if constexpr (std::endian::native == std::endian::little) return x;
  return __builtin_bswap64(x);
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const GridDistribution& f, double gamma, double time) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open snapshot for writing: " + path.string());
  char header[256];
  std::snprintf(header, sizeof header, "%s\n%d %.17g %.17g %.17g\n", kMagic, f.grid().points_per_axis(),
                f.grid().half_extent(), gamma, time);
  out << header;
  std::vector<std::uint64_t> raw(f.size());
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = to_little_endian(std::bit_cast<std::uint64_t>(f[i]));
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size() * sizeof(double)));
  if (!out) throw IoError("failed writing snapshot: " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open snapshot: " + path.string());
  std::string magic, dims;
  if (!std::getline(in, magic) || magic != kMagic) throw IoError("not a LANDAU-GRID 1 file: " + path.string());
  if (!std::getline(in, dims)) throw IoError("truncated snapshot header: " + path.string());
  std::istringstream hs(dims);
  int n = 0;
  std::string l_s, g_s, t_s;
  if (!(hs >> n >> l_s >> g_s >> t_s)) throw IoError("malformed snapshot header: " + path.string());
  const double l = std::strtod(l_s.c_str(), nullptr);
  const double gamma = std::strtod(g_s.c_str(), nullptr);
  const double time = std::strtod(t_s.c_str(), nullptr);
  VelocityGrid grid(l, n);
  std::vector<std::uint64_t> raw(grid.size());
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size() * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(raw.size() * sizeof(double))) {
    throw IoError("truncated snapshot payload: " + path.string());
  }
  std::vector<double> values(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) values[i] = std::bit_cast<double>(to_little_endian(raw[i]));
  return Snapshot{GridDistribution(grid, std::move(values)), gamma, time};
}

}  // namespace landau
