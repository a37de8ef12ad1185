#include "concentra/parallel.hpp"

#include <cstdlib>
#include <string>

namespace concentra {

namespace {
std::atomic<unsigned> g_override{0};
}

void set_thread_cap(unsigned threads) { g_override.store(threads); }

unsigned thread_cap() {
  if (unsigned v = g_override.load(); v != 0) return v;
  if (const char* env = std::getenv("CONCENTRA_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace concentra
