#pragma once

#include <filesystem>
#include <string>

#include "tmo/grid.hpp"
#include "tmo/linalg.hpp"

namespace tmo {

/// Shortest round-trip decimal form; the one formatter every artifact uses.
std::string format_double(double x);

/// Row-major little-endian (re, im) float64 pairs.
void write_complex_binary(const std::filesystem::path& path, const CMatrix& m);
CMatrix read_complex_binary(const std::filesystem::path& path, Eigen::Index rows, Eigen::Index cols);

/// JSON sidecar describing a binary matrix on a grid.
std::string grid_sidecar(const FrequencyGrid& grid, const std::string& kind, const std::string& binary_name,
                         const std::string& normalization);

/// 16-bit binary PGM, rows along axis a, scaled to the maximum.
void write_pgm16(const std::filesystem::path& path, const RMatrix& intensity);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// Nested arrays of [re, im] pairs.
std::string complex_matrix_json(const CMatrix& m);
CMatrix complex_matrix_from_json(const std::string& text);

}  // namespace tmo
