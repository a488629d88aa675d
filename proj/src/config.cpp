#include "spdc/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "spdc/io_error.hpp"

namespace spdc {

using nlohmann::json;

namespace {

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  void finish(std::initializer_list<const char*> known) const {
    std::set<std::string> names(known.begin(), known.end());
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!names.count(it.key())) throw ConfigError(join(path_, it.key()), "unknown field");
    }
  }

  const json* find(const char* key) const {
    auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }
  std::string path(const char* key) const { return join(path_, key); }

  void real(const char* key, double& out) const {
    if (const json* v = find(key)) {
      if (!v->is_number()) throw ConfigError(path(key), "expected a number");
      out = v->get<double>();
      if (!std::isfinite(out)) throw ConfigError(path(key), "must be finite");
    }
  }
  void real(const char* key, std::optional<double>& out) const {
    if (find(key)) {
      double v = 0.0;
      real(key, v);
      out = v;
    }
  }
  void integer(const char* key, int& out) const {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) throw ConfigError(path(key), "expected an integer");
      const auto wide = v->get<std::int64_t>();
      if (wide < -1000000 || wide > 1000000) throw ConfigError(path(key), "out of range");
      out = static_cast<int>(wide);
    }
  }
  void boolean(const char* key, bool& out) const {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) throw ConfigError(path(key), "expected true or false");
      out = v->get<bool>();
    }
  }
  void string(const char* key, std::string& out) const {
    if (const json* v = find(key)) {
      if (!v->is_string()) throw ConfigError(path(key), "expected a string");
      out = v->get<std::string>();
    }
  }
  template <class Fn>
  void object(const char* key, Fn&& fn) const {
    if (const json* v = find(key)) fn(Reader(*v, path(key)));
  }

 private:
  const json& node_;
  std::string path_;
};

void require(bool ok, const char* field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

}  // namespace

RunConfig parse_config(const json& doc) {
  RunConfig c;
  Reader root(doc, "");
  root.finish({"pump", "crystal", "detection", "beamsplitter", "scan", "d2", "regime",
               "decomposition", "apertures", "output"});
  root.object("pump", [&](const Reader& r) {
    r.finish({"p", "l", "wavelength_nm", "waist_mm"});
    r.integer("p", c.pump.p);
    r.integer("l", c.pump.l);
    r.real("wavelength_nm", c.pump.wavelength_nm);
    r.real("waist_mm", c.pump.waist_mm);
  });
  root.object("crystal", [&](const Reader& r) {
    r.finish({"length_mm"});
    r.real("length_mm", c.crystal.length_mm);
  });
  root.object("detection", [&](const Reader& r) {
    r.finish({"Z_m", "thin_crystal"});
    r.real("Z_m", c.detection.Z_m);
    r.boolean("thin_crystal", c.detection.thin_crystal);
  });
  root.object("beamsplitter", [&](const Reader& r) {
    r.finish({"t", "r"});
    r.real("t", c.beamsplitter.t);
    r.real("r", c.beamsplitter.r);
  });
  root.object("scan", [&](const Reader& r) {
    r.finish({"x_min_mm", "x_max_mm", "y_min_mm", "y_max_mm", "nx", "ny"});
    r.real("x_min_mm", c.scan.x_min_mm);
    r.real("x_max_mm", c.scan.x_max_mm);
    r.real("y_min_mm", c.scan.y_min_mm);
    r.real("y_max_mm", c.scan.y_max_mm);
    r.integer("nx", c.scan.nx);
    r.integer("ny", c.scan.ny);
  });
  root.object("d2", [&](const Reader& r) {
    r.finish({"x_mm", "y_mm"});
    r.real("x_mm", c.d2.x_mm);
    r.real("y_mm", c.d2.y_mm);
  });
  if (root.find("regime")) {
    std::string regime;
    root.string("regime", regime);
    if (regime == "balanced") {
      c.regime = Regime::balanced;
    } else if (regime == "unbalanced") {
      c.regime = Regime::unbalanced;
    } else {
      throw ConfigError("regime", "expected \"balanced\" or \"unbalanced\"");
    }
  }
  root.object("decomposition", [&](const Reader& r) {
    r.finish({"n_max"});
    r.integer("n_max", c.decomposition.n_max);
  });
  root.object("apertures", [&](const Reader& r) {
    r.finish({"d1_radius_mm", "d2_radius_mm", "enabled"});
    r.real("d1_radius_mm", c.apertures.d1_radius_mm);
    r.real("d2_radius_mm", c.apertures.d2_radius_mm);
    r.boolean("enabled", c.apertures.enabled);
  });
  root.object("output", [&](const Reader& r) {
    r.finish({"directory", "formats"});
    r.string("directory", c.output.directory);
    if (const json* f = r.find("formats")) {
      if (!f->is_array()) throw ConfigError("output.formats", "expected an array of strings");
      c.output.formats.clear();
      for (std::size_t k = 0; k < f->size(); ++k) {
        const std::string path = "output.formats[" + std::to_string(k) + "]";
        if (!(*f)[k].is_string()) throw ConfigError(path, "expected a string");
        c.output.formats.push_back((*f)[k].get<std::string>());
      }
    }
  });
  c.validate();
  return c;
}

void RunConfig::validate() const {
  require(pump.p >= 0, "pump.p", "must be nonnegative");
  require(2 * pump.p + std::abs(pump.l) <= kMaxPolynomialDegree, "pump.l",
          "mode order 2p+|l| must not exceed " + std::to_string(kMaxPolynomialDegree));
  require(pump.wavelength_nm > 0.0, "pump.wavelength_nm", "must be positive");
  require(pump.waist_mm > 0.0, "pump.waist_mm", "must be positive");
  require(crystal.length_mm > 0.0, "crystal.length_mm", "must be positive");
  require(detection.Z_m >= 0.0, "detection.Z_m", "must be nonnegative");
  require(detection.thin_crystal || detection.Z_m > 0.0, "detection.Z_m",
          "must be positive when thin_crystal is false");
  require(beamsplitter.t >= 0.0 && beamsplitter.t <= 1.0, "beamsplitter.t", "must lie in [0, 1]");
  require(beamsplitter.r >= 0.0 && beamsplitter.r <= 1.0, "beamsplitter.r", "must lie in [0, 1]");
  require(std::abs(beamsplitter.t * beamsplitter.t + beamsplitter.r * beamsplitter.r - 1.0) <= 1e-9,
          "beamsplitter", "t^2 + r^2 must equal 1");
  require(scan.nx >= 2 && scan.nx <= kMaxScanNodes, "scan.nx",
          "must lie in [2, " + std::to_string(kMaxScanNodes) + "]");
  require(scan.ny >= 2 && scan.ny <= kMaxScanNodes, "scan.ny",
          "must lie in [2, " + std::to_string(kMaxScanNodes) + "]");
  if (scan.x_min_mm && scan.x_max_mm) {
    require(*scan.x_max_mm > *scan.x_min_mm, "scan.x_max_mm", "must exceed scan.x_min_mm");
  }
  if (scan.y_min_mm && scan.y_max_mm) {
    require(*scan.y_max_mm > *scan.y_min_mm, "scan.y_max_mm", "must exceed scan.y_min_mm");
  }
  require(decomposition.n_max >= 0 && decomposition.n_max <= kMaxDecompositionOrder,
          "decomposition.n_max", "must lie in [0, " + std::to_string(kMaxDecompositionOrder) + "]");
  require(apertures.d1_radius_mm >= 0.0, "apertures.d1_radius_mm", "must be nonnegative");
  require(apertures.d2_radius_mm >= 0.0, "apertures.d2_radius_mm", "must be nonnegative");
  require(!output.directory.empty(), "output.directory", "must not be empty");
  require(!output.formats.empty(), "output.formats", "must name at least one format");
  std::set<std::string> seen;
  for (std::size_t k = 0; k < output.formats.size(); ++k) {
    const std::string path = "output.formats[" + std::to_string(k) + "]";
    const std::string& f = output.formats[k];
    if (f != "csv" && f != "pgm") throw ConfigError(path, "expected \"csv\" or \"pgm\"");
    if (!seen.insert(f).second) throw ConfigError(path, "duplicate format");
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

PumpSpec RunConfig::pump_spec() const {
  return {{pump.p, pump.l}, {from_nm(pump.wavelength_nm), from_mm(pump.waist_mm), 0.0}};
}

CrystalParams RunConfig::crystal_params() const {
  return CrystalParams::for_pump(from_mm(crystal.length_mm), from_nm(pump.wavelength_nm));
}

BiphotonModel RunConfig::model() const {
  return BiphotonModel(pump_spec(), crystal_params(), detection.Z_m, detection.thin_crystal);
}

BeamSplitterSpec RunConfig::beamsplitter_spec() const { return {beamsplitter.t, beamsplitter.r}; }

TransversePoint RunConfig::d2_point() const { return {from_mm(d2.x_mm), from_mm(d2.y_mm)}; }

ApertureSpec RunConfig::aperture_spec(std::uint64_t seed) const {
  ApertureSpec a;
  a.enabled = apertures.enabled;
  a.d1_radius = from_mm(apertures.d1_radius_mm);
  a.d2_radius = from_mm(apertures.d2_radius_mm);
  a.seed = seed;
  return a;
}

ScanGrid RunConfig::scan_grid(const ScanGrid& fallback) const {
  ScanGrid g = fallback;
  if (scan.x_min_mm) g.x_min = from_mm(*scan.x_min_mm);
  if (scan.x_max_mm) g.x_max = from_mm(*scan.x_max_mm);
  if (scan.y_min_mm) g.y_min = from_mm(*scan.y_min_mm);
  if (scan.y_max_mm) g.y_max = from_mm(*scan.y_max_mm);
  g.nx = scan.nx;
  g.ny = scan.ny;
  if (!(g.x_max > g.x_min)) throw ConfigError("scan", "resolved x range is empty");
  if (!(g.y_max > g.y_min)) throw ConfigError("scan", "resolved y range is empty");
  return g;
}

bool RunConfig::wants(const std::string& format) const {
  for (const auto& f : output.formats) {
    if (f == format) return true;
  }
  return false;
}

json to_json(const RunConfig& c) {
  json scan = {{"nx", c.scan.nx}, {"ny", c.scan.ny}};
  if (c.scan.x_min_mm) scan["x_min_mm"] = *c.scan.x_min_mm;
  if (c.scan.x_max_mm) scan["x_max_mm"] = *c.scan.x_max_mm;
  if (c.scan.y_min_mm) scan["y_min_mm"] = *c.scan.y_min_mm;
  if (c.scan.y_max_mm) scan["y_max_mm"] = *c.scan.y_max_mm;
  return {
      {"pump",
       {{"p", c.pump.p},
        {"l", c.pump.l},
        {"wavelength_nm", c.pump.wavelength_nm},
        {"waist_mm", c.pump.waist_mm}}},
      {"crystal", {{"length_mm", c.crystal.length_mm}}},
      {"detection", {{"Z_m", c.detection.Z_m}, {"thin_crystal", c.detection.thin_crystal}}},
      {"beamsplitter", {{"t", c.beamsplitter.t}, {"r", c.beamsplitter.r}}},
      {"scan", scan},
      {"d2", {{"x_mm", c.d2.x_mm}, {"y_mm", c.d2.y_mm}}},
      {"regime", to_string(c.regime)},
      {"decomposition", {{"n_max", c.decomposition.n_max}}},
      {"apertures",
       {{"d1_radius_mm", c.apertures.d1_radius_mm},
        {"d2_radius_mm", c.apertures.d2_radius_mm},
        {"enabled", c.apertures.enabled}}},
      {"output", {{"directory", c.output.directory}, {"formats", c.output.formats}}},
  };
}

std::string config_hash(const RunConfig& config) {
  json doc = to_json(config);
  doc["output"].erase("directory");
  const std::string text = doc.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace spdc
