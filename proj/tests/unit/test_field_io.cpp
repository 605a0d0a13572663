#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>

#include "afpk/field_io.hpp"

using namespace afpk;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "afpk_unit_io";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE("field_io") {
  TEST_CASE("bit-exact round trip") {
    const OperatorSpec spec({{1, BernsteinSpec::power(0.5)}, {2, BernsteinSpec::brownian()}});
    auto f = ScalarField::zeros(spec, {4, 8, 2}, {1.0, 3.3, 0.7});
    for (std::size_t i = 0; i < f.size(); ++i) f.values[i] = std::sin(1e3 * i) * std::pow(10.0, int(i % 40) - 20);
    f.values[3] = -0.0;
    f.values[5] = std::numeric_limits<double>::denorm_min();
    const auto path = scratch("rt.afpk");
    write_field(path, f);
    CHECK(fs::file_size(path) == 5 + 4 + 3 * 4 + 3 * 8 + f.size() * 8);
    const auto g = read_field(path, spec);
    CHECK(g.sizes == f.sizes);
    CHECK(std::memcmp(g.spacing.data(), f.spacing.data(), 3 * sizeof(double)) == 0);
    CHECK(std::memcmp(g.values.data(), f.values.data(), f.size() * sizeof(double)) == 0);
  }

  TEST_CASE("header layout") {
    const OperatorSpec spec({{1, BernsteinSpec::brownian()}});
    auto f = ScalarField::zeros(spec, {2}, {1.0});
    f.values = {1.5, -2.0};
    const auto path = scratch("hdr.afpk");
    write_field(path, f);
    std::ifstream in(path, std::ios::binary);
    char magic[5];
    in.read(magic, 5);
    CHECK(std::string(magic, 5) == "AFPK1");
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    CHECK(b[0] == 1);
    CHECK((b[1] | b[2] | b[3]) == 0);
    in.read(reinterpret_cast<char*>(b), 4);
    CHECK(b[0] == 2);
  }

  TEST_CASE("malformed files") {
    const OperatorSpec spec({{1, BernsteinSpec::brownian()}});
    auto f = ScalarField::zeros(spec, {4}, {1.0});
    const auto path = scratch("bad.afpk");
    write_field(path, f);
    CHECK_THROWS(read_field(path, OperatorSpec({{2, BernsteinSpec::brownian()}})));
    fs::resize_file(path, fs::file_size(path) - 3);
    CHECK_THROWS(read_field(path, spec));
    write_field(path, f);
    { std::ofstream(path, std::ios::app | std::ios::binary) << 'x'; }
    CHECK_THROWS(read_field(path, spec));
    { std::ofstream(path, std::ios::trunc | std::ios::binary) << "AFPK2"; }
    CHECK_THROWS(read_field(path, spec));
    CHECK_THROWS(read_field(scratch("missing.afpk"), spec));
  }

  TEST_CASE("space-time series") {
    const OperatorSpec spec({{1, BernsteinSpec::brownian()}});
    const auto g = ScalarField::zeros(spec, {8}, {1.0});
    const auto u = SpaceTimeField::zeros(TimeGrid(0.5, 2), g);
    const auto dir = scratch("series");
    const auto paths = write_space_time(dir, "u", u);
    REQUIRE(paths.size() == 3);
    CHECK(paths[2].filename() == "u_0002.afpk");
    for (const auto& p : paths) CHECK(fs::exists(p));
  }
}
