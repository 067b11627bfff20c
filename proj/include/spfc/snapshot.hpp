#pragma once

#include <string>

#include "spfc/field.hpp"

namespace spfc {

// Snapshot file format: one ASCII header line
//   "SPFC1 <dim> <n> <length> <time>\n"
// (length and time printed with %.17g, so they round-trip bit-exactly),
// followed by n^dim raw little-endian doubles in field storage order.

struct SnapshotData {
  Field field;
  double time;
};

void write_snapshot(const std::string& path, const Field& field, double time);
SnapshotData read_snapshot(const std::string& path);

}  // namespace spfc
