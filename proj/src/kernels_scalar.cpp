#include "activeft/kernels.hpp"

namespace activeft::kernels {

namespace {

double dot_ff_scalar(const float* a, const float* b, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += double(a[i]) * double(b[i]);
    return acc;
}

double dot_fd_scalar(const float* a, const double* b, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += double(a[i]) * b[i];
    return acc;
}

double dot_dd_scalar(const double* a, const double* b, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy_f_scalar(double alpha, const float* x, double* y, size_t n) {
    for (size_t i = 0; i < n; ++i) y[i] += alpha * double(x[i]);
}

void axpy_d_scalar(double alpha, const double* x, double* y, size_t n) {
    for (size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops table{dot_ff_scalar, dot_fd_scalar, dot_dd_scalar,
                           axpy_f_scalar, axpy_d_scalar, "scalar"};
    return table;
}

}  // namespace activeft::kernels
