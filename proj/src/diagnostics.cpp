#include "spinprobe/diagnostics.hpp"

#include <iostream>
#include <mutex>
#include <set>

namespace spinprobe::diag {
namespace {

std::mutex& mutex() {
  static std::mutex m;
  return m;
}

WarningHandler& handler() {
  static WarningHandler h;
  return h;
}

std::set<std::string, std::less<>>& seen_keys() {
  static std::set<std::string, std::less<>> keys;
  return keys;
}

}  // namespace

WarningHandler set_warning_handler(WarningHandler h) {
  std::lock_guard lock(mutex());
  auto previous = std::move(handler());
  handler() = std::move(h);
  return previous;
}

void warn(std::string_view message) {
  std::lock_guard lock(mutex());
  if (handler()) {
    handler()(message);
  } else {
    std::cerr << "warning: " << message << '\n';
  }
}

void warn_once(std::string_view key, std::string_view message) {
  {
    std::lock_guard lock(mutex());
    if (!seen_keys().emplace(key).second) return;
  }
  warn(message);
}

void reset_once() {
  std::lock_guard lock(mutex());
  seen_keys().clear();
}

ScopedCapture::ScopedCapture() {
  reset_once();
  previous_ = set_warning_handler([this](std::string_view m) { messages_.emplace_back(m); });
}

ScopedCapture::~ScopedCapture() { set_warning_handler(std::move(previous_)); }

bool ScopedCapture::contains(std::string_view needle) const {
  for (const auto& m : messages_) {
    if (m.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace spinprobe::diag
