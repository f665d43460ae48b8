#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace subseg::testing {

// A scratch directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::string write(const std::string& name, const std::string& content) const;

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::string& path);

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

// In-process CLI invocation.
CliResult run_cli(const std::vector<std::string>& args, const std::string& input = {});

}  // namespace subseg::testing
