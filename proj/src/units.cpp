#include "spinprobe/units.hpp"

namespace spinprobe::units {

const ConstantsTable& constants() noexcept {
  static const ConstantsTable table{};
  return table;
}

}  // namespace spinprobe::units
