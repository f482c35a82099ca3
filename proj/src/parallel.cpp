#include "piclab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace piclab {

unsigned worker_count() {
  if (const char* env = std::getenv("PICLAB_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (...) {
      // fall through to hardware default
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace piclab
