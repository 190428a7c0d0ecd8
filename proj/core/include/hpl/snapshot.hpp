#pragma once

#include <string>

#include "hpl/field.hpp"

namespace hpl {

/// HPFLD1 binary snapshot: little-endian header
///   magic "HPFLD1", Nx:u32, Ny:u32, Y:f64, Lx:f64, ell:f64
/// followed by row-major f64 samples (Nx rows of Ny+2 values).
void write_field(const std::string& path, const Field& f);
Field read_field(const std::string& path);

/// Checkpoint: the HPFLD1 block for u, a second HPFLD1 block for ut, and a
/// trailing f64 record holding the time t.
struct Checkpoint {
    Field u;
    Field ut;
    double t = 0.0;
};

void write_checkpoint(const std::string& path, const Field& u, const Field& ut,
                      double t);
Checkpoint read_checkpoint(const std::string& path);

}  // namespace hpl
