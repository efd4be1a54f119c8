#pragma once

#include <filesystem>

#include "paleyscope/spectral.hpp"

namespace paleyscope {

// PLSF field dump, little-endian:
//   0  char[4]  "PLSF"
//   4  u32      d
//   8  u32      n
//  12  u32      K_H
//  16  f64      L
//  24  u8[8]    reserved, zero
//  32  complex64 values (f32 re, f32 im), channel-major, row-major inside.

void write_plsf(const std::filesystem::path& path, const Field& f);
Field read_plsf(const std::filesystem::path& path);

}  // namespace paleyscope
