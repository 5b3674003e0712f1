#pragma once

#include "nlsh/field.hpp"

#include <filesystem>
#include <iosfwd>

namespace nlsh {

// SH2D snapshot layout, all little-endian:
//   "SH2D" | u32 version=1 | u32 nx | u32 ny | f64 lx | f64 ly |
//   u8 bc (0 periodic, 1 clamped) | f64 time | nx*ny f64 values, row-major

struct Snapshot {
    Field field;
    double time = 0.0;
};

void write_snapshot(std::ostream& out, const Field& field, double time);
Snapshot read_snapshot(std::istream& in);

void save_snapshot(const std::filesystem::path& path, const Field& field, double time);
Snapshot load_snapshot(const std::filesystem::path& path);

}  // namespace nlsh
