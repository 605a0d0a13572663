#include "afpk/field_io.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "afpk/errors.hpp"

namespace afpk {
namespace {

constexpr char kMagic[5] = {'A', 'F', 'P', 'K', '1'};

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
void put(std::ostream& os, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw ParameterError("read_field: truncated file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace

void write_field(const std::filesystem::path& path, const ScalarField& field) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw ParameterError("write_field: cannot open " + path.string());
  os.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(field.axes()));
  for (std::size_t n : field.sizes) put<std::uint32_t>(os, static_cast<std::uint32_t>(n));
  for (double h : field.spacing) put<double>(os, h);
  if constexpr (std::endian::native == std::endian::little) {
    os.write(reinterpret_cast<const char*>(field.values.data()),
             static_cast<std::streamsize>(field.values.size() * sizeof(double)));
  } else {
    for (double v : field.values) put<double>(os, v);
  }
  if (!os) throw ParameterError("write_field: write failed for " + path.string());
}

ScalarField read_field(const std::filesystem::path& path, const OperatorSpec& spec) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParameterError("read_field: cannot open " + path.string());
  char magic[sizeof(kMagic)];
  if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw ParameterError("read_field: bad magic in " + path.string());
  const std::uint32_t axes = get<std::uint32_t>(is);
  if (axes != static_cast<std::uint32_t>(spec.total_dim())) throw ParameterError("read_field: axis count does not match the operator");
  std::vector<std::size_t> sizes(axes);
  std::vector<double> spacing(axes), half(axes);
  for (auto& n : sizes) n = get<std::uint32_t>(is);
  for (std::uint32_t a = 0; a < axes; ++a) {
    spacing[a] = get<double>(is);
    half[a] = 0.5 * static_cast<double>(sizes[a]) * spacing[a];
  }
  ScalarField f = ScalarField::zeros(spec, sizes, half);
  f.spacing = spacing;  // verbatim, so the round trip is bit-exact
  for (auto& v : f.values) v = get<double>(is);
  if (is.peek() != std::char_traits<char>::eof()) throw ParameterError("read_field: trailing bytes in " + path.string());
  return f;
}

std::vector<std::filesystem::path> write_space_time(const std::filesystem::path& dir, const std::string& prefix,
                                                    const SpaceTimeField& field) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> out;
  for (std::size_t k = 0; k < field.slices.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof(name), "_%04zu.afpk", k);
    out.push_back(dir / (prefix + name));
    write_field(out.back(), field.slices[k]);
  }
  return out;
}

}  // namespace afpk
