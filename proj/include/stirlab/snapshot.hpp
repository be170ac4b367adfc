#pragma once

#include <string>

#include "stirlab/spectral_field.hpp"

namespace stirlab {

/// Binary snapshot, format "TSL1": magic bytes, u32 version, u8 d, u64 n,
/// f64 time, u16 label length + UTF-8 label, then n^d physical samples as
/// little-endian f64 in row-major order (x1 fastest).
void write_tsl1(const std::string& path, const SpectralField& field, double time);

struct Tsl1Snapshot {
    SpectralField field;
    double time = 0.0;
};

Tsl1Snapshot read_tsl1(const std::string& path);

}  // namespace stirlab
