#include "hmvm/snapshot.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace hmvm {

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ostream& out, double x) {
  std::uint64_t v;
  std::memcpy(&v, &x, 8);
  put_u64(out, v);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in) {
  const std::uint64_t v = get_u64(in);
  double x;
  std::memcpy(&x, &v, 8);
  return x;
}

constexpr std::uint32_t kMomentMagic = 0x4d4f4d31; // "MOM1"
constexpr std::uint32_t kFieldMagic = 0x464c4431;  // "FLD1"

} // namespace

void write_moment_snapshot(const std::string& path, const MomentBasis& basis,
                           const std::vector<CellMomentState>& cells) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open snapshot file " + path);
  put_u32(out, kMomentMagic);
  put_u32(out, static_cast<std::uint32_t>(basis.order()));
  put_u32(out, static_cast<std::uint32_t>(basis.dim()));
  put_u32(out, static_cast<std::uint32_t>(basis.size()));
  put_u64(out, cells.size());
  const int D = basis.dim();
  for (const CellMomentState& c : cells) {
    put_f64(out, c.rho());
    for (int d = 0; d < D; ++d) put_f64(out, c.u[d]);
    put_f64(out, c.T);
    for (double v : c.coef) put_f64(out, v);
  }
  if (!out) throw std::runtime_error("snapshot write failed: " + path);
}

MomentSnapshot read_moment_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open snapshot file " + path);
  if (get_u32(in) != kMomentMagic) throw std::runtime_error("bad moment snapshot: " + path);
  MomentSnapshot s;
  s.M = static_cast<int>(get_u32(in));
  s.D = static_cast<int>(get_u32(in));
  const std::uint32_t n = get_u32(in);
  const std::uint64_t ncell = get_u64(in);
  s.cells.resize(ncell);
  for (CellMomentState& c : s.cells) {
    get_f64(in); // rho duplicates coef[0] in the record
    for (int d = 0; d < s.D; ++d) c.u[d] = get_f64(in);
    c.T = get_f64(in);
    c.coef.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) c.coef[i] = get_f64(in);
  }
  if (!in) throw std::runtime_error("snapshot read failed: " + path);
  return s;
}

void write_field_snapshot(const std::string& path, const Grid& grid, const EmField& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open snapshot file " + path);
  put_u32(out, kFieldMagic);
  put_u32(out, static_cast<std::uint32_t>(grid.sdim));
  put_u32(out, static_cast<std::uint32_t>(grid.n[0]));
  put_u32(out, static_cast<std::uint32_t>(grid.n[1]));
  put_f64(out, grid.length[0]);
  put_f64(out, grid.length[1]);
  put_u64(out, grid.ncell());
  for (std::size_t c = 0; c < grid.ncell(); ++c) {
    for (int i = 0; i < 3; ++i) put_f64(out, field.E[c][i]);
    for (int i = 0; i < 3; ++i) put_f64(out, field.B[c][i]);
  }
  if (!out) throw std::runtime_error("snapshot write failed: " + path);
}

FieldSnapshot read_field_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open snapshot file " + path);
  if (get_u32(in) != kFieldMagic) throw std::runtime_error("bad field snapshot: " + path);
  FieldSnapshot s;
  const int sdim = static_cast<int>(get_u32(in));
  const int nx = static_cast<int>(get_u32(in));
  const int ny = static_cast<int>(get_u32(in));
  const double lx = get_f64(in);
  const double ly = get_f64(in);
  s.grid = sdim == 1 ? Grid::make_1d(nx, lx) : Grid::make_2d(nx, ny, lx, ly);
  const std::uint64_t ncell = get_u64(in);
  s.E.resize(ncell);
  s.B.resize(ncell);
  for (std::uint64_t c = 0; c < ncell; ++c) {
    for (int i = 0; i < 3; ++i) s.E[c][i] = get_f64(in);
    for (int i = 0; i < 3; ++i) s.B[c][i] = get_f64(in);
  }
  if (!in) throw std::runtime_error("snapshot read failed: " + path);
  return s;
}

} // namespace hmvm
