#include "tmo/poling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <json.hpp>

#include "tmo/constants.hpp"
#include "tmo/errors.hpp"

namespace tmo {

namespace {

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

// int_{z0}^{z1} exp(i dk z) dz, stable through dk -> 0.
cdouble domain_integral(double z0, double z1, double dk) {
  const double w = z1 - z0;
  return w * std::polar(1.0, dk * (z0 + 0.5 * w)) * sinc(0.5 * dk * w);
}

cdouble direct_sum(const PolingPattern& p, double dk) {
  cdouble acc = 0.0;
  for (std::size_t j = 0; j < p.signs.size(); ++j) {
    acc += static_cast<double>(p.signs[j]) * domain_integral(p.boundaries[j], p.boundaries[j + 1], dk);
  }
  return acc / p.length();
}

}  // namespace

void PolingPattern::validate() const {
  if (signs.empty()) throw StructureError("poling pattern has no domains");
  if (boundaries.size() != signs.size() + 1) {
    throw StructureError(fmt::format("poling pattern has {} boundaries for {} domains",
                                     boundaries.size(), signs.size()));
  }
  if (boundaries.front() != 0.0) throw StructureError("first domain boundary must be 0");
  for (std::size_t j = 1; j < boundaries.size(); ++j) {
    if (!(boundaries[j] > boundaries[j - 1])) {
      throw StructureError(fmt::format("domain boundaries not strictly increasing at index {}", j));
    }
  }
  for (int s : signs) {
    if (s != 1 && s != -1) throw StructureError(fmt::format("domain sign {} is not +-1", s));
  }
}

PolingPattern uniform_pattern(double length) {
  if (!(length > 0.0)) throw StructureError("pattern length must be positive");
  return PolingPattern{{0.0, length}, {1}};
}

PolingPattern periodic_pattern(double period, double length, double duty) {
  if (!(duty > 0.0 && duty < 1.0)) {
    throw PreconditionError(fmt::format("duty cycle must lie in (0, 1), got {}", duty));
  }
  if (!(period > 0.0) || period > length) {
    throw PreconditionError(
        fmt::format("poling period {} m must be positive and not exceed the length {} m", period, length));
  }
  const auto periods = static_cast<std::size_t>(std::floor(length / period + 1e-9));
  PolingPattern p;
  p.boundaries.reserve(2 * periods + 1);
  p.boundaries.push_back(0.0);
  for (std::size_t k = 0; k < periods; ++k) {
    const double z0 = static_cast<double>(k) * period;
    p.boundaries.push_back(z0 + duty * period);
    p.signs.push_back(+1);
    p.boundaries.push_back(z0 + period);
    p.signs.push_back(-1);
  }
  return p;
}

PolingPattern flipped(const PolingPattern& p) {
  PolingPattern out = p;
  for (int& s : out.signs) s = -s;
  return out;
}

PolingPattern enforce_min_domain(const PolingPattern& p, double floor) {
  p.validate();
  PolingPattern out;
  out.boundaries.push_back(0.0);
  for (std::size_t j = 0; j < p.signs.size(); ++j) {
    const double end = p.boundaries[j + 1];
    const double width = end - p.boundaries[j];
    if (!out.signs.empty() && (out.signs.back() == p.signs[j] || width < floor)) {
      out.boundaries.back() = end;
      continue;
    }
    out.signs.push_back(p.signs[j]);
    out.boundaries.push_back(end);
  }
  // A short leading domain has nothing to merge into until its neighbour exists.
  if (out.signs.size() > 1 && out.boundaries[1] < floor) {
    out.boundaries.erase(out.boundaries.begin() + 1);
    out.signs.erase(out.signs.begin());
  }
  return out;
}

cdouble phasematching_amplitude(const PolingPattern& p, double dk) {
  p.validate();
  return direct_sum(p, dk);
}

PatternEvaluator::PatternEvaluator(const PolingPattern& p) : pattern_(p) {
  p.validate();
  double w = p.length();
  for (std::size_t j = 0; j < p.signs.size(); ++j) w = std::min(w, p.boundaries[j + 1] - p.boundaries[j]);
  const auto sites = static_cast<std::size_t>(std::llround(p.length() / w));
  for (double z : p.boundaries) {
    const double x = z / w;
    if (std::abs(x - std::round(x)) > 1e-6) return;
  }
  if (sites < 2) return;
  std::vector<double> cell(sites, 0.0);
  for (std::size_t j = 0; j < p.signs.size(); ++j) {
    const auto b0 = static_cast<std::size_t>(std::llround(p.boundaries[j] / w));
    const auto b1 = static_cast<std::size_t>(std::llround(p.boundaries[j + 1] / w));
    for (std::size_t b = b0; b < b1; ++b) cell[b] = p.signs[j];
  }
  jumps_.assign(sites + 1, 0.0);
  for (std::size_t b = 0; b <= sites; ++b) {
    const double left = b == 0 ? 0.0 : cell[b - 1];
    const double right = b == sites ? 0.0 : cell[b];
    jumps_[b] = left - right;
  }
  lattice_step_ = w;
}

cdouble PatternEvaluator::operator()(double dk) const {
  const double L = pattern_.length();
  if (!on_lattice() || std::abs(dk * L) < 1e-2) return direct_sum(pattern_, dk);
  const cdouble r = std::polar(1.0, dk * lattice_step_);
  cdouble acc = 0.0;
  for (std::size_t b = jumps_.size(); b-- > 0;) acc = acc * r + jumps_[b];
  return acc / (kI * dk * L);
}

double TargetEnvelope::gaussian_peak(double length) const {
  return 2.0 / kPi * std::sqrt(kTwoPi) / (width * length);
}

void TargetEnvelope::validate() const {
  if (kind == Kind::kGaussian && !(width > 0.0)) {
    throw PreconditionError(fmt::format("target width must be positive, got {}", width));
  }
  if (kind == Kind::kCustom) {
    if (samples.empty()) throw PreconditionError("custom target has no samples");
    for (const auto& [dk, v] : samples) {
      if (v < 0.0) throw PreconditionError(fmt::format("custom target sample at {} is negative", dk));
    }
  }
}

double sidelobe_suppression(const PolingPattern& p, double period, const SidelobeWindow& w) {
  if (w.points == 0 || !(w.outer > w.inner) || w.inner < 0.0) {
    throw PreconditionError("side-lobe window is empty");
  }
  const PolingPattern ref = periodic_pattern(period, p.length(), 0.5);
  const PatternEvaluator ep(p);
  const PatternEvaluator er(ref);
  double max_p = 0.0;
  double max_r = 0.0;
  for (int side : {-1, +1}) {
    for (std::size_t m = 0; m < w.points; ++m) {
      const double off = w.inner + (w.outer - w.inner) * static_cast<double>(m) /
                                       static_cast<double>(std::max<std::size_t>(w.points - 1, 1));
      const double dk = w.center + side * off;
      max_p = std::max(max_p, std::norm(ep(dk)));
      max_r = std::max(max_r, std::norm(er(dk)));
    }
  }
  if (max_p == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(max_r / max_p);
}

std::string pattern_to_json(const PolingPattern& p) {
  nlohmann::ordered_json j;
  j["length_m"] = p.length();
  j["boundaries_m"] = p.boundaries;
  j["signs"] = p.signs;
  return j.dump(1);
}

PolingPattern pattern_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("pattern file is not valid JSON: {}", e.what()));
  }
  PolingPattern p;
  try {
    p.boundaries = j.at("boundaries_m").get<std::vector<double>>();
    p.signs = j.at("signs").get<std::vector<int>>();
    const double length = j.at("length_m").get<double>();
    p.validate();
    if (std::abs(p.length() - length) > 1e-12 * length) {
      throw StructureError("pattern length_m disagrees with the last boundary");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("pattern file: {}", e.what()));
  }
  return p;
}

}  // namespace tmo
