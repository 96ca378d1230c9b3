#pragma once

#include <string>

#include "klab/field.hpp"

namespace klab {

// Field dump: raw little-endian 64-bit floats, row-major over axes in
// declaration order, next to a JSON sidecar
// {dim_c, periods, resolution, field_name, kind: real|complex}.
// Complex fields interleave (re, im) per node.

void dump_field(const RealField& f, const std::string& dir, const std::string& name);
void dump_field(const ComplexField& f, const std::string& dir, const std::string& name);

RealField load_real_field(const std::string& dir, const std::string& name);
ComplexField load_complex_field(const std::string& dir, const std::string& name);

}  // namespace klab
