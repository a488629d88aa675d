#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spdc/commands.hpp"
#include "spdc/io_error.hpp"

namespace {

enum ExitCode { kOk = 0, kConfigError = 2, kConvergence = 3, kIoError = 4 };

spdc::TransversePoint parse_delta(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw std::domain_error("--delta expects x_mm,y_mm, got '" + text + "'");
  try {
    std::size_t ux = 0, uy = 0;
    const std::string xs = text.substr(0, comma), ys = text.substr(comma + 1);
    const double x = std::stod(xs, &ux);
    const double y = std::stod(ys, &uy);
    if (ux != xs.size() || uy != ys.size() || !std::isfinite(x) || !std::isfinite(y)) throw 0;
    return {spdc::from_mm(x), spdc::from_mm(y)};
  } catch (...) {
    throw std::domain_error("--delta expects x_mm,y_mm, got '" + text + "'");
  }
}

double parse_plane(const std::string& text) {
  if (text == "inf" || text == "far") return spdc::kFarField;
  try {
    std::size_t used = 0;
    const double z = std::stod(text, &used);
    if (used == text.size()) return z;
  } catch (...) {
  }
  throw std::domain_error("--plane-z expects metres or 'inf', got '" + text + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SPDC biphoton, OAM decomposition and HOM coincidence maps"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  int threads = 0;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "JSON run configuration (defaults when omitted)");
  app.add_option("--out", out_dir, "Output directory (overrides output.directory)");
  app.add_option("--threads", threads, "Worker threads, 0 = auto")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", seed, "Seed for aperture sampling");

  auto* modes = app.add_subcommand("modes", "Mode fields");
  modes->require_subcommand(1);
  auto* modes_eval = modes->add_subcommand("eval", "Magnitude and phase grids of one mode");
  spdc::ModesEvalOptions mode_opts;
  int p = 0, l = 0;
  auto* p_opt = modes_eval->add_option("--p", p, "LG radial index (default: config pump)");
  auto* l_opt = modes_eval->add_option("--l", l, "LG azimuthal index (default: config pump)");
  modes_eval->add_option("--family", mode_opts.family, "lg or hg")->check(CLI::IsMember({"lg", "hg"}));
  modes_eval->add_option("--m", mode_opts.m, "HG x index");
  modes_eval->add_option("--n", mode_opts.n, "HG y index");
  modes_eval->add_option("--converter", mode_opts.converter, "HG: none, plus45 or minus45")
      ->check(CLI::IsMember({"none", "plus45", "minus45"}));
  modes_eval->add_option("--z", mode_opts.z_m, "Plane relative to the waist, metres");

  auto* biphoton = app.add_subcommand("biphoton", "Biphoton amplitude");
  biphoton->require_subcommand(1);
  auto* biphoton_map = biphoton->add_subcommand("map", "Coincidence map without interference");

  auto* hom = app.add_subcommand("hom", "Hong-Ou-Mandel interferometer");
  hom->require_subcommand(1);
  auto* hom_scan = hom->add_subcommand("scan", "Coincidence map in the configured regime");

  auto* decompose = app.add_subcommand("decompose", "LG coefficient table and spiral spectrum");

  auto* witness = app.add_subcommand("witness", "Classical-correlation witness");
  std::vector<std::string> delta_text;
  witness->add_option("--delta", delta_text, "Displacement x_mm,y_mm (repeatable)");

  auto* validate = app.add_subcommand("validate", "Model checks");
  validate->require_subcommand(1);
  auto* thin = validate->add_subcommand("thin-crystal", "Thin-crystal error over mode orders");
  spdc::ThinCrystalOptions thin_opts;
  std::string plane_text = "inf";
  thin->add_option("--orders", thin_opts.orders, "Mode orders N")->delimiter(',');
  thin->add_option("--plane-z", plane_text, "Detection plane in metres, or inf for the far field");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    spdc::CommandContext ctx;
    ctx.config = config_path.empty() ? spdc::parse_config(nlohmann::json::object())
                                     : spdc::load_config(config_path);
    ctx.out_dir = out_dir.empty() ? std::filesystem::path(ctx.config.output.directory) : std::filesystem::path(out_dir);
    ctx.threads = threads;
    ctx.seed = seed;

    spdc::CommandResult result;
    if (*modes_eval) {
      if (*p_opt) mode_opts.p = p;
      if (*l_opt) mode_opts.l = l;
      result = spdc::cmd_modes_eval(ctx, mode_opts);
    } else if (*biphoton_map) {
      result = spdc::cmd_biphoton_map(ctx);
    } else if (*hom_scan) {
      result = spdc::cmd_hom_scan(ctx);
    } else if (*decompose) {
      result = spdc::cmd_decompose(ctx);
    } else if (*witness) {
      std::vector<spdc::TransversePoint> deltas;
      for (const auto& t : delta_text) deltas.push_back(parse_delta(t));
      result = spdc::cmd_witness(ctx, deltas);
    } else if (*thin) {
      thin_opts.plane_z = parse_plane(plane_text);
      result = spdc::cmd_validate_thin_crystal(ctx, thin_opts);
    }
    std::cout << result.summary << '\n';
    for (const auto& path : result.written) std::cout << "wrote " << path.string() << '\n';
    return kOk;
  } catch (const spdc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const spdc::ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << '\n';
    return kConvergence;
  } catch (const spdc::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
}
