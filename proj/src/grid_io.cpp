#include "spdc/grid_io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace spdc {

namespace {

constexpr const char* kColumns = "x_mm,y_mm,value";

double parse_double(const std::string& text, const std::filesystem::path& path, std::size_t line) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE) {
    // Subnormals set ERANGE on some libcs yet parse correctly.
    if (!(errno == ERANGE && end != begin && *end == '\0' && std::abs(v) < 1.0)) {
      throw IoError(path.string() + ":" + std::to_string(line) + ": bad number '" + text + "'");
    }
  }
  return v;
}

int parse_int(const std::string& text, const std::filesystem::path& path, const char* key) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw IoError(path.string() + ": header '" + key + "' is not an integer");
}

}  // namespace

const std::string* GridFile::find(const std::string& key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

GridFile grid_file(const CoincidenceMap& map) {
  GridFile g;
  g.grid = map.grid;
  g.values = map.values;
  return g;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

void save_csv(const GridFile& grid, const std::filesystem::path& path) {
  grid.grid.validate();
  if (grid.values.size() != static_cast<std::size_t>(grid.grid.nx) * grid.grid.ny) {
    throw std::invalid_argument("save_csv: value count does not match the grid");
  }
  std::ostringstream os;
  for (const auto& [k, v] : grid.metadata) os << "# " << k << ": " << v << '\n';
  os << "# nx: " << grid.grid.nx << '\n';
  os << "# ny: " << grid.grid.ny << '\n';
  os << "# x_min_mm: " << format_double(to_mm(grid.grid.x_min)) << '\n';
  os << "# x_max_mm: " << format_double(to_mm(grid.grid.x_max)) << '\n';
  os << "# y_min_mm: " << format_double(to_mm(grid.grid.y_min)) << '\n';
  os << "# y_max_mm: " << format_double(to_mm(grid.grid.y_max)) << '\n';
  os << kColumns << '\n';
  for (int j = 0; j < grid.grid.ny; ++j) {
    const std::string y = format_double(to_mm(grid.grid.y(j)));
    for (int i = 0; i < grid.grid.nx; ++i) {
      os << format_double(to_mm(grid.grid.x(i))) << ',' << y << ',' << format_double(grid.at(i, j))
         << '\n';
    }
  }
  write_text(path, os.str());
}

GridFile load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  GridFile g;
  std::vector<std::pair<std::string, std::string>> header;
  std::string line;
  std::size_t line_no = 0;
  bool columns_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.rfind("# ", 0) == 0) {
      const auto colon = line.find(": ", 2);
      if (colon == std::string::npos) throw IoError(path.string() + ": malformed header line");
      header.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
      continue;
    }
    if (line != kColumns) throw IoError(path.string() + ": missing column header");
    columns_seen = true;
    break;
  }
  if (!columns_seen) throw IoError(path.string() + ": missing column header");

  const char* geometry[] = {"nx", "ny", "x_min_mm", "x_max_mm", "y_min_mm", "y_max_mm"};
  auto take = [&](const char* key) -> std::string {
    for (const auto& [k, v] : header) {
      if (k == key) return v;
    }
    throw IoError(path.string() + ": header '" + key + "' missing");
  };
  g.grid.nx = parse_int(take("nx"), path, "nx");
  g.grid.ny = parse_int(take("ny"), path, "ny");
  g.grid.x_min = from_mm(parse_double(take("x_min_mm"), path, 0));
  g.grid.x_max = from_mm(parse_double(take("x_max_mm"), path, 0));
  g.grid.y_min = from_mm(parse_double(take("y_min_mm"), path, 0));
  g.grid.y_max = from_mm(parse_double(take("y_max_mm"), path, 0));
  try {
    g.grid.validate();
  } catch (const std::domain_error& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  for (auto& kv : header) {
    if (std::find_if(std::begin(geometry), std::end(geometry),
                     [&](const char* k) { return kv.first == k; }) == std::end(geometry)) {
      g.metadata.push_back(std::move(kv));
    }
  }

  const std::size_t count = static_cast<std::size_t>(g.grid.nx) * g.grid.ny;
  g.values.reserve(count);
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto c2 = line.rfind(',');
    if (c2 == std::string::npos || line.find(',') == c2) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected three columns");
    }
    g.values.push_back(parse_double(line.substr(c2 + 1), path, line_no));
  }
  if (g.values.size() != count) {
    throw IoError(path.string() + ": expected " + std::to_string(count) + " rows, found " +
                  std::to_string(g.values.size()));
  }
  return g;
}

void save_pgm(const GridFile& grid, const std::filesystem::path& path, double lo, double hi) {
  constexpr int kMaxval = 65535;
  std::ostringstream os;
  os << "P2\n";
  for (const auto& [k, v] : grid.metadata) os << "# " << k << ": " << v << '\n';
  os << grid.grid.nx << ' ' << grid.grid.ny << '\n' << kMaxval << '\n';
  const double span = hi - lo;
  for (int j = grid.grid.ny - 1; j >= 0; --j) {
    for (int i = 0; i < grid.grid.nx; ++i) {
      const double f = span > 0.0 ? std::clamp((grid.at(i, j) - lo) / span, 0.0, 1.0) : 0.0;
      os << static_cast<int>(std::lround(f * kMaxval)) << (i + 1 < grid.grid.nx ? ' ' : '\n');
    }
  }
  write_text(path, os.str());
}

void save_pgm(const GridFile& grid, const std::filesystem::path& path) {
  double hi = 0.0;
  for (double v : grid.values) hi = std::max(hi, v);
  save_pgm(grid, path, 0.0, hi);
}

}  // namespace spdc
