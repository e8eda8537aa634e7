#include "ci2d/field_io.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace ci2d {

static_assert(std::endian::native == std::endian::little,
              "field dump assumes a little-endian host");

namespace {

void write_header(std::ostream& os, int n, int components, Real time) {
  char tbuf[64];
  std::snprintf(tbuf, sizeof(tbuf), "%.17g", time);
  os << "{\"grid\":" << n << ",\"components\":" << components
     << ",\"time\":" << tbuf << ",\"endianness\":\"little\"}\n";
}

void write_plane(std::ostream& os, const ArrayXXr& p) {
  const int n = static_cast<int>(p.rows());
  std::vector<double> row(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) row[static_cast<size_t>(j)] = p(i, j);
    os.write(reinterpret_cast<const char*>(row.data()),
             static_cast<std::streamsize>(sizeof(double) * row.size()));
  }
}

}  // namespace

void dump_field(std::ostream& os, const ScalarField& f, Real time) {
  write_header(os, f.grid.n, 1, time);
  write_plane(os, to_physical(f));
}

void dump_field(std::ostream& os, const VectorField& v, Real time) {
  write_header(os, v.grid.n, 2, time);
  auto s = to_physical(v);
  write_plane(os, s[0]);
  write_plane(os, s[1]);
}

void dump_field(std::ostream& os, const SymTensorField& t, Real time) {
  write_header(os, t.grid.n, 3, time);
  auto s = to_physical(t);
  for (const auto& p : s) write_plane(os, p);
}

void dump_field_file(const std::string& path, const VectorField& v, Real time) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  dump_field(os, v, time);
}

FieldDump load_field(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw std::runtime_error("missing dump header");
  nlohmann::json j = nlohmann::json::parse(header);
  FieldDump d;
  d.grid_n = j.at("grid").get<int>();
  d.components = j.at("components").get<int>();
  d.time = j.at("time").get<Real>();
  if (j.at("endianness").get<std::string>() != "little")
    throw std::runtime_error("unsupported endianness tag");
  d.planes.resize(static_cast<size_t>(d.components));
  std::vector<double> row(static_cast<size_t>(d.grid_n));
  for (auto& p : d.planes) {
    p.resize(d.grid_n, d.grid_n);
    for (int i = 0; i < d.grid_n; ++i) {
      is.read(reinterpret_cast<char*>(row.data()),
              static_cast<std::streamsize>(sizeof(double) * row.size()));
      if (!is) throw std::runtime_error("truncated dump payload");
      for (int jcol = 0; jcol < d.grid_n; ++jcol)
        p(i, jcol) = row[static_cast<size_t>(jcol)];
    }
  }
  return d;
}

}  // namespace ci2d
