#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace afpk::tool {

// Header, numeric rows (17 significant digits, locale-free), then footer
// comments with the config hash and code version. Rows are buffered and the
// file is written by save().
class CsvReport {
 public:
  CsvReport(std::string name, std::vector<std::string> columns);

  void row(const std::vector<double>& values);
  void save(const std::filesystem::path& dir, const std::string& effective_config, const std::string& version) const;
  const std::string& name() const { return name_; }
  const std::string& body() const { return body_; }

 private:
  std::string name_;
  std::string body_;
  std::size_t width_;
};

}  // namespace afpk::tool
