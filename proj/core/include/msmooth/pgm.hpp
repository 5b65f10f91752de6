#pragma once

#include <string>

#include "msmooth/field.hpp"

namespace msmooth {

/// Reads a P2 (ASCII) or P5 (binary) grayscale PGM, maxval <= 65535.
/// Intensities are used as stored (no rescaling). Malformed input raises
/// IoError naming the byte offset.
Field read_pgm(const std::string& path);

/// Writes a 2D field as PGM, clamping and rounding to [0, maxval].
/// binary selects P5, otherwise P2.
void write_pgm(const Field& f, const std::string& path, int maxval = 255,
               bool binary = true);

/// One sample per line; used by the 1D evolutions.
Field read_csv_1d(const std::string& path, double h = 1.0);
void write_csv_1d(const Field& f, const std::string& path);

}  // namespace msmooth
