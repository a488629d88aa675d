#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "spdc/config.hpp"
#include "spdc/hom.hpp"

namespace spdc {

struct CommandContext {
  RunConfig config;
  std::filesystem::path out_dir;  // created on demand
  int threads = 0;                // 0 = hardware concurrency
  std::uint64_t seed = 0;         // aperture sampling
};

struct CommandResult {
  std::vector<std::filesystem::path> written;
  // One-line human summary printed by the front end.
  std::string summary;
};

struct ModesEvalOptions {
  std::string family = "lg";        // "lg" or "hg"
  std::optional<int> p, l;          // LG; default to the config pump
  int m = 0, n = 1;                 // HG
  std::string converter = "none";   // HG only: "none", "plus45", "minus45"
  double z_m = 0.0;                 // plane relative to the waist
};

struct ThinCrystalOptions {
  std::vector<int> orders = {4, 16, 64, 100};
  double plane_z = kFarField;  // metres; kFarField selects the far-field limit
};

/// ±3 effective pattern waists (sqrt2 times the rescaled pump width at Z)
/// around -d2, 201 x 201 unless the config overrides it.
ScanGrid default_pattern_grid(const BiphotonModel& model, TransversePoint d2);

CommandResult cmd_modes_eval(const CommandContext& ctx, const ModesEvalOptions& options);
CommandResult cmd_biphoton_map(const CommandContext& ctx);
CommandResult cmd_hom_scan(const CommandContext& ctx);
CommandResult cmd_decompose(const CommandContext& ctx);
/// deltas in metres; empty selects the default displacement set.
CommandResult cmd_witness(const CommandContext& ctx, const std::vector<TransversePoint>& deltas);
CommandResult cmd_validate_thin_crystal(const CommandContext& ctx, const ThinCrystalOptions& options);

}  // namespace spdc
