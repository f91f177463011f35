#include "llg/field_io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace llg {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  if (res.ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

void write_field_csv(const VectorField& f, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_field_csv: cannot open " + path.string());
  const Grid& g = f.grid();
  if (g.dim == 1)
    os << "x,m1,m2,m3\n";
  else
    os << "x,y,z,m1,m2,m3\n";
  for (std::int64_t c = 0; c < f.cells(); ++c) {
    const Vec3 p = g.cell_center(c);
    const Vec3 m = f.at(c);
    os << format_double(p.x) << ',';
    if (g.dim == 3) os << format_double(p.y) << ',' << format_double(p.z) << ',';
    os << format_double(m.x) << ',' << format_double(m.y) << ',' << format_double(m.z) << '\n';
  }
  if (!os) throw std::runtime_error("write_field_csv: write failed for " + path.string());
}

}  // namespace llg
