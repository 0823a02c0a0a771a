#include "activeft/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace activeft::kernels {

#if !(defined(__x86_64__) || defined(_M_X64))
const Ops* avx2_ops() { return nullptr; }
#endif

namespace {

const Ops* resolve_auto() {
    if (const Ops* a = avx2_ops()) return a;
    return &scalar_ops();
}

const Ops* resolve_from_env() {
    const char* env = std::getenv("ACTIVEFT_KERNEL");
    if (env != nullptr) {
        if (std::strcmp(env, "scalar") == 0) return &scalar_ops();
        if (std::strcmp(env, "avx2") == 0) {
            if (const Ops* a = avx2_ops()) return a;
        }
    }
    return resolve_auto();
}

std::atomic<const Ops*> g_active{nullptr};

}  // namespace

const Ops& ops() {
    const Ops* p = g_active.load(std::memory_order_acquire);
    if (p == nullptr) {
        p = resolve_from_env();
        g_active.store(p, std::memory_order_release);
    }
    return *p;
}

bool set_variant(Variant v) {
    switch (v) {
        case Variant::automatic:
            g_active.store(resolve_auto(), std::memory_order_release);
            return true;
        case Variant::scalar:
            g_active.store(&scalar_ops(), std::memory_order_release);
            return true;
        case Variant::avx2:
            if (const Ops* a = avx2_ops()) {
                g_active.store(a, std::memory_order_release);
                return true;
            }
            return false;
    }
    return false;
}

std::string active_name() { return ops().name; }

}  // namespace activeft::kernels
