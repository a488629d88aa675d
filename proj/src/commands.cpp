#include "spdc/commands.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <system_error>

#include "spdc/decomposition.hpp"
#include "spdc/grid_io.hpp"
#include "spdc/parallel.hpp"

namespace spdc {

using nlohmann::json;

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

// Upper bound on the order used for the selection-rule scan in `decompose`;
// each forbidden key costs a full two-dimensional quadrature.
constexpr int kDefectMaxOrder = 6;

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

std::string mm_pair(TransversePoint p) {
  return format_double(to_mm(p.x)) + "," + format_double(to_mm(p.y));
}

void common_metadata(GridFile& g, const CommandContext& ctx, const std::string& quantity) {
  g.metadata.insert(g.metadata.begin(), {{"format", "spdc-grid-1"},
                                         {"quantity", quantity},
                                         {"config_hash", config_hash(ctx.config)},
                                         {"units", "mm"},
                                         {"x_axis", "x_mm"},
                                         {"y_axis", "y_mm"}});
}

void emit_grid(const CommandContext& ctx, const GridFile& g, const std::string& stem,
               CommandResult& result, std::optional<std::pair<double, double>> pgm_range = {}) {
  if (ctx.config.wants("csv")) {
    const auto path = ctx.out_dir / (stem + ".csv");
    save_csv(g, path);
    result.written.push_back(path);
  }
  if (ctx.config.wants("pgm")) {
    const auto path = ctx.out_dir / (stem + ".pgm");
    if (pgm_range) {
      save_pgm(g, path, pgm_range->first, pgm_range->second);
    } else {
      save_pgm(g, path);
    }
    result.written.push_back(path);
  }
}

std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

GridFile map_file(const CommandContext& ctx, const CoincidenceMap& map, const std::string& quantity) {
  GridFile g = grid_file(map);
  common_metadata(g, ctx, quantity);
  g.metadata.push_back({"regime", to_string(map.regime)});
  g.metadata.push_back({"fixed_detector_mm", mm_pair(map.fixed_detector)});
  g.metadata.push_back({"normalization", "max"});
  g.metadata.push_back({"raw_max", format_double(map.raw_max)});
  g.metadata.push_back({"apertures", ctx.config.apertures.enabled ? "enabled" : "disabled"});
  if (ctx.config.apertures.enabled) g.metadata.push_back({"seed", std::to_string(ctx.seed)});
  return g;
}

CoincidenceMap run_map(const CommandContext& ctx, Regime regime) {
  const BiphotonModel model = ctx.config.model();
  const TransversePoint d2 = ctx.config.d2_point();
  const ScanGrid grid = ctx.config.scan_grid(default_pattern_grid(model, d2));
  const BeamSplitterSpec bs = ctx.config.beamsplitter_spec();
  const ApertureSpec ap = ctx.config.aperture_spec(ctx.seed);
  return regime == Regime::balanced ? balanced_map(model, bs, grid, d2, ctx.threads, ap)
                                    : unbalanced_map(model, bs, grid, d2, ctx.threads, ap);
}

}  // namespace

ScanGrid default_pattern_grid(const BiphotonModel& model, TransversePoint d2) {
  const double w = kSqrt2 * model.rescaled_beam().width_at(model.detection_plane_z());
  return ScanGrid::centred({-d2.x, -d2.y}, 3.0 * w, 201);
}

CommandResult cmd_modes_eval(const CommandContext& ctx, const ModesEvalOptions& options) {
  const BeamSpec beam = ctx.config.pump_spec().beam;
  const double z = options.z_m;
  if (!std::isfinite(z)) throw std::domain_error("modes eval: z must be finite");

  std::function<complex(TransversePoint)> field;
  std::string label;
  int order = 0;
  if (options.family == "lg") {
    const LGIndex index{options.p.value_or(ctx.config.pump.p), options.l.value_or(ctx.config.pump.l)};
    index.validate();
    const LgMode mode(index, beam, z);
    field = [mode](TransversePoint pt) { return mode(pt); };
    label = "LG p=" + std::to_string(index.p) + " l=" + std::to_string(index.l);
    order = index.order();
  } else if (options.family == "hg") {
    const HGIndex index{options.m, options.n};
    index.validate();
    if (options.converter == "none") {
      const HgMode mode(index, beam, z);
      field = [mode](TransversePoint pt) { return mode(pt); };
    } else if (options.converter == "plus45" || options.converter == "minus45") {
      const auto orientation = options.converter == "plus45" ? ConverterOrientation::plus45
                                                             : ConverterOrientation::minus45;
      field = [=](TransversePoint pt) { return converted_field(index, orientation, beam, pt, z); };
    } else {
      throw std::domain_error("modes eval: converter must be none, plus45 or minus45");
    }
    label = "HG m=" + std::to_string(index.m) + " n=" + std::to_string(index.n) +
            " converter=" + options.converter;
    order = index.order();
  } else {
    throw std::domain_error("modes eval: family must be lg or hg");
  }

  const double half = 3.0 * beam.width_at(z) * std::sqrt(order / 2.0 + 1.0);
  const ScanGrid grid = ctx.config.scan_grid(ScanGrid::centred({0.0, 0.0}, half, 201));
  grid.validate();

  GridFile magnitude, phase;
  magnitude.grid = phase.grid = grid;
  const std::size_t count = static_cast<std::size_t>(grid.nx) * grid.ny;
  magnitude.values.resize(count);
  phase.values.resize(count);
  parallel_for(static_cast<std::size_t>(grid.ny), ctx.threads, [&](std::size_t j) {
    for (int i = 0; i < grid.nx; ++i) {
      // Field in mm^-1 so that int |u|^2 dx dy = 1 with lengths in mm.
      const complex v = field({grid.x(i), grid.y(static_cast<int>(j))}) * 1e-3;
      magnitude.values[j * grid.nx + i] = std::abs(v);
      phase.values[j * grid.nx + i] = std::arg(v);
    }
  });

  ensure_dir(ctx.out_dir);
  CommandResult result;
  common_metadata(magnitude, ctx, "field_magnitude");
  common_metadata(phase, ctx, "field_phase");
  for (GridFile* g : {&magnitude, &phase}) {
    g->metadata.push_back({"mode", label});
    g->metadata.push_back({"z_m", format_double(z)});
  }
  magnitude.metadata.push_back({"value_units", "mm^-1"});
  phase.metadata.push_back({"value_units", "rad"});
  emit_grid(ctx, magnitude, "modes_magnitude", result);
  emit_grid(ctx, phase, "modes_phase", result, std::pair{-kPi, kPi});
  result.summary = label + " on " + std::to_string(grid.nx) + "x" + std::to_string(grid.ny);
  return result;
}

CommandResult cmd_biphoton_map(const CommandContext& ctx) {
  const CoincidenceMap map = run_map(ctx, Regime::unbalanced);
  ensure_dir(ctx.out_dir);
  CommandResult result;
  emit_grid(ctx, map_file(ctx, map, "coincidence"), "biphoton_map", result);
  const MapPeak peak = find_peak(map);
  result.summary = "unbalanced map, max at (" + mm_pair(peak.location) + ") mm";
  return result;
}

CommandResult cmd_hom_scan(const CommandContext& ctx) {
  const CoincidenceMap map = run_map(ctx, ctx.config.regime);
  ensure_dir(ctx.out_dir);
  CommandResult result;
  emit_grid(ctx, map_file(ctx, map, "coincidence"), "hom_map", result);

  const int lobes = count_lobes(map);
  const MapPeak peak = find_peak(map);
  json summary = {
      {"config_hash", config_hash(ctx.config)},
      {"regime", to_string(map.regime)},
      {"lobes", lobes},
      {"lobe_threshold", 0.5},
      {"max_location_mm", {to_mm(peak.location.x), to_mm(peak.location.y)}},
      {"raw_max", map.raw_max},
      {"fixed_detector_mm", {to_mm(map.fixed_detector.x), to_mm(map.fixed_detector.y)}},
      {"grid",
       {{"nx", map.grid.nx},
        {"ny", map.grid.ny},
        {"x_min_mm", to_mm(map.grid.x_min)},
        {"x_max_mm", to_mm(map.grid.x_max)},
        {"y_min_mm", to_mm(map.grid.y_min)},
        {"y_max_mm", to_mm(map.grid.y_max)}}},
  };
  const auto path = ctx.out_dir / "hom_summary.json";
  write_text(path, dump_json(summary));
  result.written.push_back(path);
  result.summary = std::string(to_string(map.regime)) + " map, lobes=" + std::to_string(lobes);
  return result;
}

CommandResult cmd_decompose(const CommandContext& ctx) {
  const PumpSpec pump = ctx.config.pump_spec();
  const int n_max = ctx.config.decomposition.n_max;
  const CoefficientTable table = spiral_spectrum(pump, n_max, {}, ctx.threads);
  const int defect_order = std::min(n_max, kDefectMaxOrder);
  const SelectionDefect defect = selection_defect(pump, defect_order, {}, ctx.threads);

  const std::string hash = config_hash(ctx.config);
  std::ostringstream coeffs;
  coeffs << "# format: spdc-coefficients-1\n"
         << "# config_hash: " << hash << '\n'
         << "# pump: p=" << pump.mode.p << " l=" << pump.mode.l << '\n'
         << "# n_max: " << n_max << '\n'
         << "# raw_normalization: " << format_double(table.raw_normalization()) << '\n'
         << "# normalization: " << format_double(table.normalization()) << '\n'
         << "# selection_defect_order: " << defect_order << '\n'
         << "# selection_defect: " << format_double(defect.relative()) << '\n'
         << "ls,ps,li,pi,re,im,abs2\n";
  for (const auto& [key, c] : table.entries()) {
    coeffs << key.ls << ',' << key.ps << ',' << key.li << ',' << key.pi << ','
           << format_double(c.real()) << ',' << format_double(c.imag()) << ','
           << format_double(std::norm(c)) << '\n';
  }
  std::ostringstream spectrum;
  spectrum << "# format: spdc-spectrum-1\n"
           << "# config_hash: " << hash << '\n'
           << "# n_max: " << n_max << '\n'
           << "m,P\n";
  for (const auto& [m, P] : table.marginal()) spectrum << m << ',' << format_double(P) << '\n';

  ensure_dir(ctx.out_dir);
  CommandResult result;
  for (const auto& [name, text] : {std::pair{"coefficients.csv", coeffs.str()},
                                   std::pair{"spiral_spectrum.csv", spectrum.str()}}) {
    const auto path = ctx.out_dir / name;
    write_text(path, text);
    result.written.push_back(path);
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu coefficients, selection defect %.3g",
                table.entries().size(), defect.relative());
  result.summary = buf;
  return result;
}

CommandResult cmd_witness(const CommandContext& ctx, const std::vector<TransversePoint>& deltas) {
  const PumpSpec pump = ctx.config.pump_spec();
  const auto samples = deltas.empty() ? default_witness_deltas(pump) : deltas;
  const WitnessReport report = classical_witness(pump, samples, ctx.config.decomposition.n_max);

  json rows = json::array();
  for (std::size_t k = 0; k < samples.size(); ++k) {
    rows.push_back({{"delta_mm", {to_mm(samples[k].x), to_mm(samples[k].y)}},
                    {"quantum_P", report.quantum_P_values[k]},
                    {"classical_Pcc", report.classical_Pcc_values[k]}});
  }
  json components = json::array();
  for (const auto& c : report.components) {
    components.push_back({{"idler_l", c.idler_l},
                          {"weight", c.weight},
                          {"signal", {{"p", c.signal.p}, {"l", c.signal.l}}},
                          {"idler", {{"p", c.idler.p}, {"l", c.idler.l}}}});
  }
  const json doc = {
      {"config_hash", config_hash(ctx.config)},
      {"pump", {{"p", pump.mode.p}, {"l", pump.mode.l}}},
      {"zero_signal_mm", {to_mm(report.zero_signal.x), to_mm(report.zero_signal.y)}},
      {"zero_idler_mm", {to_mm(report.zero_idler.x), to_mm(report.zero_idler.y)}},
      {"quantum_scale", report.quantum_scale},
      {"classical_scale", report.classical_scale},
      {"null_fraction", report.null_fraction},
      {"visible_fraction", report.visible_fraction},
      {"samples", rows},
      {"components", components},
      {"verdict", to_string(report.verdict)},
  };
  ensure_dir(ctx.out_dir);
  const auto path = ctx.out_dir / "witness.json";
  write_text(path, dump_json(doc));
  return {{path}, std::string("verdict ") + to_string(report.verdict)};
}

CommandResult cmd_validate_thin_crystal(const CommandContext& ctx, const ThinCrystalOptions& options) {
  if (options.orders.empty()) throw std::domain_error("validate thin-crystal: no orders given");
  if (!(options.plane_z > 0.0)) {
    throw std::domain_error("validate thin-crystal: plane must be positive or far field");
  }
  const CrystalParams crystal = ctx.config.crystal_params();
  const BeamSpec beam = ctx.config.pump_spec().beam;
  std::vector<ThinCrystalError> rows(options.orders.size());
  for (int n : options.orders) {
    if (n < 0 || n > kMaxPolynomialDegree / 2) {
      throw std::domain_error("validate thin-crystal: orders must lie in [0, " +
                              std::to_string(kMaxPolynomialDegree / 2) + "]");
    }
  }
  parallel_for(rows.size(), ctx.threads, [&](std::size_t k) {
    rows[k] = thin_crystal_error(crystal, beam, options.orders[k], options.plane_z);
  });

  std::ostringstream os;
  os << "# format: spdc-thin-crystal-1\n"
     << "# config_hash: " << config_hash(ctx.config) << '\n'
     << "# crystal_length_mm: " << format_double(ctx.config.crystal.length_mm) << '\n'
     << "# wavelength_nm: " << format_double(ctx.config.pump.wavelength_nm) << '\n'
     << "# waist_mm: " << format_double(ctx.config.pump.waist_mm) << '\n'
     << "# plane_z_m: " << (std::isinf(options.plane_z) ? "far_field" : format_double(options.plane_z))
     << '\n'
     << "N,epsilon,p,l\n";
  for (const auto& r : rows) {
    os << r.order << ',' << format_double(r.epsilon) << ',' << r.p << ',' << r.l << '\n';
  }
  ensure_dir(ctx.out_dir);
  const auto path = ctx.out_dir / "thin_crystal.csv";
  write_text(path, os.str());
  char buf[96];
  std::snprintf(buf, sizeof buf, "epsilon(N=%d) = %.3g", rows.back().order, rows.back().epsilon);
  return {{path}, buf};
}

}  // namespace spdc
