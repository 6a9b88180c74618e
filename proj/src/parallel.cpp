#include "coupled_fp/parallel.hpp"

#include <cstdlib>
#include <string>

namespace cfp {

std::size_t default_thread_count() {
    if (const char* env = std::getenv("COUPLED_FP_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (...) {
            // ignore unparsable values
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace cfp
