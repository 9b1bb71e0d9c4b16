#pragma once

#include <filesystem>
#include <string>

#include "hwlab/field.hpp"

namespace hwlab {

// Binary field format, magic "HWF1":
//   bytes 0..3   magic
//   uint32       d
//   uint32       N
//   float64      L
//   then N^d records of (re, im) float64 in row-major node order.
// All integers and floats little-endian.  Readers reject unknown magic.
void save_field(const Field& u, const std::filesystem::path& path);
Field load_field(const std::filesystem::path& path);

// Lossy CSV for plotting: (x, re, im, abs) in 1D, (x, y, re, im, abs) in 2D.
void export_field_csv(const Field& u, const std::filesystem::path& path);

}  // namespace hwlab
