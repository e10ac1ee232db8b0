#include "lpbm/parallel.hpp"

#include <cstdlib>
#include <string>

namespace lpbm {

int worker_count() {
    static const int n = [] {
        if (const char* env = std::getenv("LPBM_THREADS")) {
            try {
                int v = std::stoi(env);
                if (v >= 1) return v;
            } catch (...) {
                // fall through to the hardware default
            }
        }
        unsigned hc = std::thread::hardware_concurrency();
        return hc > 0 ? static_cast<int>(hc) : 1;
    }();
    return n;
}

}  // namespace lpbm
