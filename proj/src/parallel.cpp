#include "qaida/parallel.hpp"

#include <cstdlib>
#include <string>

namespace qaida {

int default_worker_count() {
  if (const char* env = std::getenv("QAIDA_FORGE_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : int(hw);
}

}  // namespace qaida
