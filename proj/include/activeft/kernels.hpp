#pragma once

#include <cstddef>
#include <string>

// Inner-loop kernels over contiguous rows.  Every variant accumulates in
// double with a reduction order fixed by the variant alone, so any given
// build/CPU produces bit-identical results regardless of thread count.  The
// scalar variant is the reference: strict left-to-right accumulation.  The
// AVX2 variant keeps four running lanes and folds them in a fixed order; it
// is equivalence-tested against the reference.

namespace activeft::kernels {

struct Ops {
    double (*dot_ff)(const float* a, const float* b, size_t n);
    double (*dot_fd)(const float* a, const double* b, size_t n);
    double (*dot_dd)(const double* a, const double* b, size_t n);
    // y[i] += alpha * x[i]; elementwise, bit-identical across variants.
    void (*axpy_f)(double alpha, const float* x, double* y, size_t n);
    void (*axpy_d)(double alpha, const double* x, double* y, size_t n);
    const char* name;
};

enum class Variant { automatic, scalar, avx2 };

const Ops& scalar_ops();
const Ops* avx2_ops();  // nullptr when not compiled in or not supported by the CPU

// Active kernel table.  Resolution order: explicit set_variant(), else the
// ACTIVEFT_KERNEL environment variable (scalar|avx2|auto), else the widest
// variant the CPU supports.
const Ops& ops();
bool set_variant(Variant v);  // false if the variant is unavailable
std::string active_name();

}  // namespace activeft::kernels
