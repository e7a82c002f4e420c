#include "topopump/parallel.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace topopump {

int default_jobs() {
  if (const char* env = std::getenv("TOPOPUMP_JOBS")) {
    try {
      const int j = std::stoi(env);
      if (j >= 1) return j;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("TOPOPUMP_JOBS must be a positive integer");
  }
  return 1;
}

}  // namespace topopump
