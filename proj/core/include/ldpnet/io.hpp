#pragma once

#include <cstdint>
#include <string>

#include "ldpnet/measures.hpp"

namespace ldpnet {

// Write-temp-rename so readers never observe a partial file.
void atomic_write(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// FNV-1a 64 over the raw bytes, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

// Lossless double round trip via %a.
std::string hexfloat(double x);
double parse_hexfloat(const std::string& s);

// Graph-backed nested measure as JSON with hex-float states; import
// reproduces the measure bit for bit.
std::string nested_to_json(const NestedEmpiricalMeasure& m);
NestedEmpiricalMeasure nested_from_json(const std::string& text);

}  // namespace ldpnet
