#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "afpk/grid.hpp"
#include "afpk/solver.hpp"

namespace afpk {

// Binary layout: "AFPK1", u32 axis count, u32 size per axis, f64 spacing per axis,
// then the row-major values; all little-endian.
void write_field(const std::filesystem::path& path, const ScalarField& field);
// The file carries no operator; `spec` must have total_dim equal to the axis count.
ScalarField read_field(const std::filesystem::path& path, const OperatorSpec& spec);

// prefix_0000.afpk, prefix_0001.afpk, ... one file per time node; returns the paths.
std::vector<std::filesystem::path> write_space_time(const std::filesystem::path& dir, const std::string& prefix,
                                                    const SpaceTimeField& field);

}  // namespace afpk
