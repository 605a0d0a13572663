#include "csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "config.hpp"

namespace afpk::tool {

CsvReport::CsvReport(std::string name, std::vector<std::string> columns)
    : name_(std::move(name)), width_(columns.size()) {
  for (std::size_t i = 0; i < columns.size(); ++i) body_ += (i ? "," : "") + columns[i];
  body_ += '\n';
}

void CsvReport::row(const std::vector<double>& values) {
  if (values.size() != width_) throw std::logic_error("csv: row width mismatch in " + name_);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) body_ += ',';
    body_ += format_number(values[i]);
  }
  body_ += '\n';
}

void CsvReport::save(const std::filesystem::path& dir, const std::string& effective_config,
                     const std::string& version) const {
  std::ofstream out(dir / name_, std::ios::trunc | std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (dir / name_).string());
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(fnv1a(effective_config)));
  out << body_ << "# config_hash: " << hash << '\n' << "# version: " << version << '\n';
  if (!out) throw std::runtime_error("write failed for " + (dir / name_).string());
}

}  // namespace afpk::tool
