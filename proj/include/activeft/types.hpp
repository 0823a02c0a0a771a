#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace activeft {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad arguments, malformed content, violated preconditions.  CLI exit code 2.
struct validation_error : error {
    using error::error;
};

// Filesystem / stream failures.  CLI exit code 1.
struct io_error : error {
    using error::error;
};

// Pool of N unit-normalized C-dimensional feature vectors, row-major float32.
struct FeaturePool {
    uint32_t n = 0;
    uint32_t dim = 0;
    std::vector<float> features;  // n * dim

    const float* row(uint32_t i) const { return features.data() + size_t(i) * dim; }
    float* row(uint32_t i) { return features.data() + size_t(i) * dim; }
};

// B continuous selection parameters on the unit sphere.  Rows are kept in
// double precision: they are the optimization variable and the gradient
// checks demand more head-room than the float32 feature storage.
struct SelectionParams {
    uint32_t b = 0;
    uint32_t dim = 0;
    std::vector<double> theta;  // b * dim, every row unit-norm within 1e-6

    const double* row(uint32_t j) const { return theta.data() + size_t(j) * dim; }
    double* row(uint32_t j) { return theta.data() + size_t(j) * dim; }
};

// Nearest-parameter index per pool item plus the winning similarity.
// Ties resolve to the lowest parameter index.
struct Assignment {
    std::vector<uint32_t> c;
    std::vector<double> top1_sim;
};

// Temperature scale for exponential similarities.
struct Temperature {
    double tau = 0.07;
};

struct MixtureDiagnostics {
    // Entry k: mean over the pool of exp(sim to the (k+1)-th nearest parameter / tau).
    std::vector<double> topk_mean_exp_sim;
};

// A materialized selection: B distinct pool indices, stored ascending.
struct SelectionResult {
    std::vector<uint32_t> indices;
    std::string method;
    uint64_t seed = 0;
    std::string config_digest;
};

}  // namespace activeft
