#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spdc/biphoton.hpp"
#include "spdc/hom.hpp"

namespace spdc {

// Invalid configuration; the message starts with the offending field path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct RunConfig {
  struct Pump {
    int p = 0;
    int l = 1;
    double wavelength_nm = 351.1;
    double waist_mm = 1.0;
  } pump;
  struct Crystal {
    double length_mm = 7.0;
  } crystal;
  struct Detection {
    double Z_m = 1.0;
    bool thin_crystal = true;
  } detection;
  struct Beamsplitter {
    double t = 0.81853527718724499700;  // sqrt(0.67)
    double r = 0.57445626465380286598;  // sqrt(0.33)
  } beamsplitter;
  // Unset extents fall back to the command's default grid.
  struct Scan {
    std::optional<double> x_min_mm, x_max_mm, y_min_mm, y_max_mm;
    int nx = 201;
    int ny = 201;
  } scan;
  struct D2 {
    double x_mm = 0.0;
    double y_mm = 0.0;
  } d2;
  Regime regime = Regime::balanced;
  struct Decomposition {
    int n_max = 8;
  } decomposition;
  struct Apertures {
    double d1_radius_mm = 0.25;
    double d2_radius_mm = 0.5;
    bool enabled = false;
  } apertures;
  struct Output {
    std::string directory = "out";
    std::vector<std::string> formats = {"csv", "pgm"};
  } output;

  void validate() const;

  PumpSpec pump_spec() const;
  CrystalParams crystal_params() const;
  BiphotonModel model() const;
  BeamSplitterSpec beamsplitter_spec() const;
  TransversePoint d2_point() const;
  ApertureSpec aperture_spec(std::uint64_t seed) const;
  ScanGrid scan_grid(const ScanGrid& fallback) const;
  bool wants(const std::string& format) const;
};

// Largest accepted node count per scan axis.
inline constexpr int kMaxScanNodes = 4001;
// Largest accepted decomposition order.
inline constexpr int kMaxDecompositionOrder = 40;

/// Strict parse: unknown keys, wrong types and out-of-range values raise
/// ConfigError naming the field path.  Omitted fields keep their defaults.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& config);

/// FNV-1a 64 of the canonical JSON of the resolved config, output directory
/// excluded, as 16 hex digits.
std::string config_hash(const RunConfig& config);

}  // namespace spdc
