#include "tmo/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "tmo/errors.hpp"

namespace tmo {

namespace {

static_assert(std::endian::native == std::endian::little, "binary writers assume a little-endian host");

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw ConfigError(fmt::format("cannot write {}", path.string()));
  return out;
}

}  // namespace

std::string format_double(double x) { return fmt::format("{}", x); }

void write_complex_binary(const std::filesystem::path& path, const CMatrix& m) {
  auto out = open_out(path, std::ios::binary);
  std::vector<double> row(static_cast<std::size_t>(2 * m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row[static_cast<std::size_t>(2 * c)] = m(r, c).real();
      row[static_cast<std::size_t>(2 * c + 1)] = m(r, c).imag();
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(double)));
  }
}

CMatrix read_complex_binary(const std::filesystem::path& path, Eigen::Index rows, Eigen::Index cols) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot read {}", path.string()));
  CMatrix m(rows, cols);
  std::vector<double> row(static_cast<std::size_t>(2 * cols));
  for (Eigen::Index r = 0; r < rows; ++r) {
    in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(double)));
    if (!in) throw ConfigError(fmt::format("{} is shorter than {}x{}", path.string(), rows, cols));
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = cdouble(row[static_cast<std::size_t>(2 * c)], row[static_cast<std::size_t>(2 * c + 1)]);
    }
  }
  return m;
}

std::string grid_sidecar(const FrequencyGrid& grid, const std::string& kind, const std::string& binary_name,
                         const std::string& normalization) {
  nlohmann::ordered_json j;
  j["kind"] = kind;
  j["file"] = binary_name;
  j["layout"] = "row-major little-endian float64 (re, im)";
  j["rows"] = grid.a.points;
  j["cols"] = grid.b.points;
  auto axis = [](const FrequencyAxis& a) {
    nlohmann::ordered_json x;
    x["center_rad_s"] = a.center;
    x["span_rad_s"] = a.span;
    x["points"] = a.points;
    x["step_rad_s"] = a.step();
    x["first_detuning_rad_s"] = a.detuning(0);
    return x;
  };
  j["axis_rows"] = axis(grid.a);
  j["axis_cols"] = axis(grid.b);
  j["normalization"] = normalization;
  return j.dump(1) + "\n";
}

void write_pgm16(const std::filesystem::path& path, const RMatrix& intensity) {
  auto out = open_out(path, std::ios::binary);
  const double peak = intensity.maxCoeff();
  out << "P5\n" << intensity.cols() << " " << intensity.rows() << "\n65535\n";
  for (Eigen::Index r = 0; r < intensity.rows(); ++r) {
    for (Eigen::Index c = 0; c < intensity.cols(); ++c) {
      const double v = peak > 0.0 ? intensity(r, c) / peak : 0.0;
      const auto q = static_cast<std::uint16_t>(std::lround(std::clamp(v, 0.0, 1.0) * 65535.0));
      const unsigned char bytes[2] = {static_cast<unsigned char>(q >> 8), static_cast<unsigned char>(q & 0xFF)};
      out.write(reinterpret_cast<const char*>(bytes), 2);
    }
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string complex_matrix_json(const CMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows.dump();
}

CMatrix complex_matrix_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows ? static_cast<Eigen::Index>(j[0].size()) : 0;
    CMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (static_cast<Eigen::Index>(j[r].size()) != cols) throw ConfigError("ragged complex matrix");
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = cdouble(j[r][c].at(0).get<double>(), j[r][c].at(1).get<double>());
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("complex matrix JSON: {}", e.what()));
  }
}

}  // namespace tmo
