#include "config_echo.hpp"

#include "spinprobe/text.hpp"

namespace spinprobe::cli {

ConfigEcho::ConfigEcho(std::string_view command) { lines_.push_back("spinprobe " + std::string(command)); }

ConfigEcho& ConfigEcho::add(std::string_view key, std::string_view value) {
  lines_.push_back(std::string(key) + " = " + std::string(value));
  return *this;
}

ConfigEcho& ConfigEcho::add(std::string_view key, double value) { return add(key, text::format_exact(value)); }

ConfigEcho& ConfigEcho::add(std::string_view key, long long value) { return add(key, std::to_string(value)); }

ConfigEcho& ConfigEcho::add(std::string_view key, bool value) {
  return add(key, std::string_view(value ? "true" : "false"));
}

ConfigEcho& ConfigEcho::add(std::string_view key, const Vec3& value) { return add(key, format_vec(value)); }

std::vector<std::string> ConfigEcho::with(std::string_view extra) const {
  auto out = lines_;
  out.emplace_back(extra);
  return out;
}

std::string format_vec(const Vec3& v) {
  return text::format_exact(v.x()) + "," + text::format_exact(v.y()) + "," + text::format_exact(v.z());
}

}  // namespace spinprobe::cli
