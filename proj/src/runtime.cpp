#include "hilfer/runtime.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>

namespace hilfer {

namespace {

int default_threads() {
    if (const char* env = std::getenv("HILFER_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    return static_cast<int>(hw > 8 ? 8 : hw);
}

std::atomic<int> configured{0};  // 0 means "not set yet"

} // namespace

int thread_count() {
    int n = configured.load(std::memory_order_relaxed);
    return n >= 1 ? n : default_threads();
}

void set_thread_count(int n) {
    configured.store(n >= 1 ? n : 0, std::memory_order_relaxed);
}

} // namespace hilfer
