#include "spfc/snapshot.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spfc {

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");

void write_snapshot(const std::string& path, const Field& field, double time) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_snapshot: cannot open " + path);

  char header[128];
  std::snprintf(header, sizeof(header), "SPFC1 %d %d %.17g %.17g\n", field.grid().dim,
                field.grid().n, field.grid().length, time);
  out << header;
  out.write(reinterpret_cast<const char*>(field.values().data()),
            static_cast<std::streamsize>(field.size() * sizeof(double)));
  if (!out) throw std::runtime_error("write_snapshot: write failed for " + path);
}

SnapshotData read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_snapshot: cannot open " + path);

  std::string header;
  if (!std::getline(in, header)) {
    throw std::runtime_error("read_snapshot: missing header in " + path);
  }
  std::istringstream hs(header);
  std::string magic;
  int dim = 0, n = 0;
  double length = 0.0, time = 0.0;
  hs >> magic >> dim >> n >> length >> time;
  if (!hs || magic != "SPFC1") {
    throw std::runtime_error("read_snapshot: malformed header in " + path);
  }

  Grid grid(dim, n, length);
  std::vector<double> values(grid.size());
  in.read(reinterpret_cast<char*>(values.data()),
          static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(values.size() * sizeof(double))) {
    throw std::runtime_error("read_snapshot: truncated payload in " + path);
  }
  return SnapshotData{Field(grid, std::move(values)), time};
}

}  // namespace spfc
