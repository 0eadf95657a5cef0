#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "spinprobe/linalg.hpp"

namespace spinprobe::cli {

// Effective configuration, echoed as comment lines at the top of every output.
class ConfigEcho {
 public:
  explicit ConfigEcho(std::string_view command);

  ConfigEcho& add(std::string_view key, std::string_view value);
  ConfigEcho& add(std::string_view key, const char* value) { return add(key, std::string_view(value)); }
  ConfigEcho& add(std::string_view key, double value);
  ConfigEcho& add(std::string_view key, long long value);
  ConfigEcho& add(std::string_view key, int value) { return add(key, static_cast<long long>(value)); }
  ConfigEcho& add(std::string_view key, std::size_t value) { return add(key, static_cast<long long>(value)); }
  ConfigEcho& add(std::string_view key, bool value);
  ConfigEcho& add(std::string_view key, const Vec3& value);

  const std::vector<std::string>& lines() const { return lines_; }
  std::vector<std::string> with(std::string_view extra) const;

 private:
  std::vector<std::string> lines_;
};

std::string format_vec(const Vec3& v);

}  // namespace spinprobe::cli
