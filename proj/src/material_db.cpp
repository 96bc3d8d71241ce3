#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "tmo/dispersion.hpp"
#include "tmo/errors.hpp"

#ifndef TMO_MATERIALS_DIR
#define TMO_MATERIALS_DIR "materials"
#endif

namespace tmo {

std::filesystem::path default_materials_dir() {
  if (const char* env = std::getenv("TMO_MATERIALS")) return env;
  return TMO_MATERIALS_DIR;
}

Material parse_material(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("material file is not valid JSON: {}", e.what()));
  }
  try {
    const auto name = j.at("name").get<std::string>();
    const auto range = j.at("valid_range_um").get<std::vector<double>>();
    if (range.size() != 2) throw ConfigError(fmt::format("material {}: valid_range_um needs [lo, hi]", name));
    std::map<std::string, SellmeierAxis> axes;
    for (const auto& [label, ax] : j.at("axes").items()) {
      const auto form_id = ax.at("form").get<std::string>();
      const auto form = parse_sellmeier_form(form_id);
      if (!form) {
        throw ConfigError(fmt::format("material {} axis {}: unknown form '{}'", name, label, form_id));
      }
      axes[label] = SellmeierAxis{*form, ax.at("coefficients").get<std::vector<double>>()};
    }
    if (axes.empty()) throw ConfigError(fmt::format("material {} declares no axes", name));
    return Material(name, std::move(axes), range[0], range[1], j.value("source", std::string{}));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("material file malformed: {}", e.what()));
  } catch (const StructureError& e) {
    throw ConfigError(e.what());
  }
}

Material load_material(const std::filesystem::path& dir, const std::string& name) {
  if (name == "vacuum") return Material::vacuum();
  const auto path = dir / (name + ".json");
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("material '{}' not found at {}", name, path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_material(ss.str());
}

}  // namespace tmo
