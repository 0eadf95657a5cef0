#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

// Non-fatal warnings.  Library code reports through here instead of writing
// to stderr directly so callers (CLI, tests) can capture or silence them.
namespace spinprobe::diag {

using WarningHandler = std::function<void(std::string_view)>;

/// Install a handler; returns the previous one.  An empty handler restores stderr output.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(std::string_view message);

/// Emit `message` only the first time `key` is seen in this process (until reset_once()).
void warn_once(std::string_view key, std::string_view message);

void reset_once();

/// RAII capture of warnings into a string list, for tests.
class ScopedCapture {
 public:
  ScopedCapture();
  ~ScopedCapture();
  ScopedCapture(const ScopedCapture&) = delete;
  ScopedCapture& operator=(const ScopedCapture&) = delete;

  const std::vector<std::string>& messages() const { return messages_; }
  bool contains(std::string_view needle) const;

 private:
  std::vector<std::string> messages_;
  WarningHandler previous_;
};

}  // namespace spinprobe::diag
