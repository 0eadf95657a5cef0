#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spinprobe {

/// Malformed input file.  Carries the 1-based line number when known (0 otherwise).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A numerical routine failed (non-finite result, failed convergence that cannot be recovered).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A per-pixel computation failed during a raster; reports the pixel.
class PixelError : public NumericalError {
 public:
  PixelError(std::size_t ix, std::size_t iy, const std::string& what)
      : NumericalError("pixel (" + std::to_string(ix) + ", " + std::to_string(iy) + "): " + what), ix_(ix), iy_(iy) {}
  std::size_t ix() const noexcept { return ix_; }
  std::size_t iy() const noexcept { return iy_; }

 private:
  std::size_t ix_, iy_;
};

}  // namespace spinprobe
