#pragma once

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <sys/wait.h>

#include "tmo/dispersion.hpp"
#include "tmo/grid.hpp"

namespace tmo::test {

inline const std::filesystem::path kConfigs = TMO_CONFIGS_DIR;
inline const std::filesystem::path kMaterials = TMO_MATERIALS_DIR;
inline const std::string kBinary = TMO_BINARY;

// Symmetric group-velocity-matched PDC with u = 2 / (|D| L) = 2e12 rad/s.
inline TaylorProcess sgvm_pdc(double length = 0.01, double walkoff = 1e-10) {
  TaylorProcess t;
  t.kind = ProcessKind::kPdc;
  t.length = length;
  t.walkoff_a = walkoff;
  t.walkoff_b = -walkoff;
  t.center_pump = 2.43e15;
  t.center_a = 1.215e15;
  t.center_b = 1.215e15;
  return t;
}

inline TaylorProcess sfg(double walkoff_a, double walkoff_b, double length = 0.01) {
  TaylorProcess t;
  t.kind = ProcessKind::kSfg;
  t.length = length;
  t.walkoff_a = walkoff_a;
  t.walkoff_b = walkoff_b;
  t.center_pump = 2.19e15;
  t.center_a = 1.215e15;
  t.center_b = t.center_a + t.center_pump;
  return t;
}

inline FrequencyGrid square_grid(double center_a, double center_b, double span, std::size_t n) {
  return {{center_a, span, n}, {center_b, span, n}};
}

// Runs the CLI; returns its exit status.
inline int run_tool(const std::string& args) {
  const std::string cmd = kBinary + " " + args + " > /dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

}  // namespace tmo::test
