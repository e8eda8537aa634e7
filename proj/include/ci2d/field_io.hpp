#ifndef CI2D_FIELD_IO_HPP
#define CI2D_FIELD_IO_HPP

#include <iosfwd>
#include <string>

#include "ci2d/field.hpp"

namespace ci2d {

/// Binary field dump: one UTF-8 JSON header line followed by row-major
/// little-endian float64 physical samples, one plane per component.
/// Round trips bit-exactly.
void dump_field(std::ostream& os, const ScalarField& f, Real time);
void dump_field(std::ostream& os, const VectorField& v, Real time);
void dump_field(std::ostream& os, const SymTensorField& t, Real time);
void dump_field_file(const std::string& path, const VectorField& v, Real time);

struct FieldDump {
  int grid_n = 0;
  int components = 0;
  Real time = 0;
  std::vector<ArrayXXr> planes;
};

FieldDump load_field(std::istream& is);

}  // namespace ci2d

#endif  // CI2D_FIELD_IO_HPP
