#include "activeft/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace activeft::parallel {

namespace {

int resolve_from_env() {
    const char* env = std::getenv("ACTIVEFT_THREADS");
    if (env == nullptr || *env == '\0') return 1;
    int v = 0;
    try {
        v = std::stoi(env);
    } catch (...) {
        return 1;
    }
    if (v < 0) return 1;
    if (v == 0) {
        const unsigned hc = std::thread::hardware_concurrency();
        return hc == 0 ? 1 : int(hc);
    }
    return v;
}

std::atomic<int> g_num_threads{-1};  // -1: not yet resolved

}  // namespace

int num_threads() {
    int v = g_num_threads.load(std::memory_order_relaxed);
    if (v < 0) {
        v = resolve_from_env();
        g_num_threads.store(v, std::memory_order_relaxed);
    }
    return v;
}

void set_num_threads(int n) {
    if (n == 0) {
        const unsigned hc = std::thread::hardware_concurrency();
        n = hc == 0 ? 1 : int(hc);
    }
    g_num_threads.store(n < 1 ? 1 : n, std::memory_order_relaxed);
}

}  // namespace activeft::parallel
