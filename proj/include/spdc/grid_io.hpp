#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "spdc/hom.hpp"
#include "spdc/io_error.hpp"

namespace spdc {

// A value matrix on a ScanGrid plus ordered `key: value` metadata.
struct GridFile {
  std::vector<std::pair<std::string, std::string>> metadata;
  ScanGrid grid;
  std::vector<double> values;  // row-major as in CoincidenceMap

  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * grid.nx + i]; }
  const std::string* find(const std::string& key) const;
};

GridFile grid_file(const CoincidenceMap& map);

std::string format_double(double v);

/// `# key: value` lines, then `x_mm,y_mm,value` rows ordered by y then x.
/// Grid geometry is carried in the header so it survives a round trip.
void save_csv(const GridFile& grid, const std::filesystem::path& path);
GridFile load_csv(const std::filesystem::path& path);

/// P2 text PGM, maxval 65535, first image row at y_max.  Values are mapped
/// linearly from [lo, hi] and clamped.
void save_pgm(const GridFile& grid, const std::filesystem::path& path, double lo, double hi);
/// As above with [lo, hi] = [0, max value].
void save_pgm(const GridFile& grid, const std::filesystem::path& path);

/// Writes text to path, replacing any existing file.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace spdc
