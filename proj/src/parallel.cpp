#include "volpol/parallel.hpp"

#include <cstdlib>
#include <string>

namespace volpol {

unsigned defaultWorkerCount() {
  if (const char* env = std::getenv("VOLPOL_WORKERS"); env != nullptr && *env != '\0') {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

namespace detail {
bool& insideParallelRegion() {
  thread_local bool inside = false;
  return inside;
}
}  // namespace detail

}  // namespace volpol
