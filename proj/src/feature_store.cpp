#include "activeft/feature_store.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "activeft/kernels.hpp"
#include "activeft/rng.hpp"

namespace activeft::feature_store {

namespace {

constexpr char kMagic[4] = {'F', 'P', 'L', '1'};
constexpr double kNormTolerance = 1e-4;

void put_u32_le(std::string& out, uint32_t v) {
    out.push_back(char(v & 0xff));
    out.push_back(char((v >> 8) & 0xff));
    out.push_back(char((v >> 16) & 0xff));
    out.push_back(char((v >> 24) & 0xff));
}

uint32_t get_u32_le(const unsigned char* p) {
    return uint32_t(p[0]) | uint32_t(p[1]) << 8 | uint32_t(p[2]) << 16 | uint32_t(p[3]) << 24;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw io_error("read failure on " + path.string());
    return std::move(buf).str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open " + path.string() + " for writing");
    out.write(bytes.data(), std::streamsize(bytes.size()));
    out.flush();
    if (!out) throw io_error("write failure on " + path.string());
}

FeaturePool parse_binary(const std::string& bytes, const std::string& origin) {
    if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw validation_error(origin + ": not an FPL1 file (bad magic)");
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    FeaturePool pool;
    pool.n = get_u32_le(p + 4);
    pool.dim = get_u32_le(p + 8);
    if (pool.n < 1 || pool.dim < 2)
        throw validation_error(origin + ": header requires n >= 1 and dim >= 2");
    const size_t expected = 12 + size_t(pool.n) * pool.dim * 4;
    if (bytes.size() != expected)
        throw validation_error(origin + ": payload size does not match header (expected " +
                               std::to_string(expected) + " bytes, got " +
                               std::to_string(bytes.size()) + ")");
    pool.features.resize(size_t(pool.n) * pool.dim);
    for (size_t i = 0; i < pool.features.size(); ++i)
        pool.features[i] = std::bit_cast<float>(get_u32_le(p + 12 + 4 * i));
    return pool;
}

FeaturePool parse_csv(const std::string& text, const std::string& origin) {
    FeaturePool pool;
    std::vector<float> values;
    uint32_t dim = 0;
    uint32_t rows = 0;
    size_t pos = 0;
    size_t lineno = 0;
    while (pos < text.size()) {
        size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        ++lineno;
        std::string_view line(text.data() + pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = eol + 1;
        if (line.empty()) continue;
        uint32_t fields = 0;
        size_t fpos = 0;
        while (true) {
            size_t comma = line.find(',', fpos);
            const std::string field(line.substr(fpos, comma == std::string_view::npos
                                                          ? std::string_view::npos
                                                          : comma - fpos));
            char* end = nullptr;
            const float v = std::strtof(field.c_str(), &end);
            if (end == field.c_str() || (end && *end != '\0'))
                throw validation_error(origin + ": line " + std::to_string(lineno) +
                                       ": unparseable field '" + field + "'");
            values.push_back(v);
            ++fields;
            if (comma == std::string_view::npos) break;
            fpos = comma + 1;
        }
        if (dim == 0) {
            dim = fields;
        } else if (fields != dim) {
            throw validation_error(origin + ": line " + std::to_string(lineno) + " has " +
                                   std::to_string(fields) + " fields, expected " +
                                   std::to_string(dim));
        }
        ++rows;
    }
    if (rows < 1 || dim < 2)
        throw validation_error(origin + ": pool requires n >= 1 rows and dim >= 2 columns");
    pool.n = rows;
    pool.dim = dim;
    pool.features = std::move(values);
    return pool;
}

void check_finite(const FeaturePool& pool, const std::string& origin) {
    for (size_t i = 0; i < pool.features.size(); ++i) {
        if (!std::isfinite(pool.features[i]))
            throw validation_error(origin + ": non-finite value at row " +
                                   std::to_string(i / pool.dim) + ", column " +
                                   std::to_string(i % pool.dim));
    }
}

}  // namespace

PoolFormat format_from_path(const std::filesystem::path& path) {
    return path.extension() == ".csv" ? PoolFormat::csv : PoolFormat::binary;
}

void normalize_rows(FeaturePool& pool) {
    const auto& k = kernels::ops();
    for (uint32_t i = 0; i < pool.n; ++i) {
        float* r = pool.row(i);
        const double norm = std::sqrt(k.dot_ff(r, r, pool.dim));
        if (!(norm > 0.0) || !std::isfinite(norm))
            throw validation_error("row " + std::to_string(i) + " has zero norm, cannot normalize");
        const float inv = float(1.0 / norm);
        for (uint32_t c = 0; c < pool.dim; ++c) r[c] *= inv;
    }
}

void validate_pool(const FeaturePool& pool) {
    if (pool.n < 1 || pool.dim < 2)
        throw validation_error("pool requires n >= 1 and dim >= 2");
    if (pool.features.size() != size_t(pool.n) * pool.dim)
        throw validation_error("pool storage does not match n * dim");
    check_finite(pool, "pool");
    const auto& k = kernels::ops();
    for (uint32_t i = 0; i < pool.n; ++i) {
        const float* r = pool.row(i);
        const double norm = std::sqrt(k.dot_ff(r, r, pool.dim));
        if (std::abs(norm - 1.0) > kNormTolerance)
            throw validation_error("row " + std::to_string(i) + " has L2 norm " +
                                   std::to_string(norm) + ", outside 1 +/- 1e-4");
    }
}

FeaturePool load_pool(const std::filesystem::path& path, PoolFormat format, bool normalize) {
    const std::string bytes = read_file(path);
    FeaturePool pool = format == PoolFormat::binary ? parse_binary(bytes, path.string())
                                                    : parse_csv(bytes, path.string());
    check_finite(pool, path.string());
    if (normalize) normalize_rows(pool);
    validate_pool(pool);
    return pool;
}

void save_pool(const FeaturePool& pool, const std::filesystem::path& path, PoolFormat format) {
    std::string out;
    if (format == PoolFormat::binary) {
        out.reserve(12 + pool.features.size() * 4);
        out.append(kMagic, 4);
        put_u32_le(out, pool.n);
        put_u32_le(out, pool.dim);
        for (float v : pool.features) put_u32_le(out, std::bit_cast<uint32_t>(v));
    } else {
        char buf[48];
        for (uint32_t i = 0; i < pool.n; ++i) {
            const float* r = pool.row(i);
            for (uint32_t c = 0; c < pool.dim; ++c) {
                // %.9g round-trips float32 exactly through strtof.
                std::snprintf(buf, sizeof buf, "%.9g", double(r[c]));
                if (c > 0) out.push_back(',');
                out.append(buf);
            }
            out.push_back('\n');
        }
    }
    write_file(path, out);
}

FeaturePool make_synthetic_pool(const SyntheticSpec& spec) {
    if (spec.n_clusters < 1 || spec.points_per_cluster < 1)
        throw validation_error("synthetic spec requires n_clusters >= 1 and points_per_cluster >= 1");
    if (spec.dim < 2) throw validation_error("synthetic spec requires dim >= 2");
    if (!(spec.spread > 0.0)) throw validation_error("synthetic spec requires spread > 0");

    rng::Engine engine(spec.seed);
    const uint32_t dim = spec.dim;
    std::vector<double> center(dim), point(dim), noise(dim);

    FeaturePool pool;
    pool.n = spec.n_clusters * spec.points_per_cluster;
    pool.dim = dim;
    pool.features.resize(size_t(pool.n) * dim);

    auto unit_normalize = [&](std::vector<double>& v) -> bool {
        double s = 0.0;
        for (double x : v) s += x * x;
        if (s < 1e-24) return false;
        const double inv = 1.0 / std::sqrt(s);
        for (double& x : v) x *= inv;
        return true;
    };

    // Per-coordinate sigma chosen so the expected angular deviation of a
    // perturbed point is about `spread` radians.
    const double sigma = spec.spread / std::sqrt(double(dim));
    uint32_t row = 0;
    for (uint32_t c = 0; c < spec.n_clusters; ++c) {
        do {
            rng::fill_gaussian(center, engine);
        } while (!unit_normalize(center));
        for (uint32_t p = 0; p < spec.points_per_cluster; ++p, ++row) {
            do {
                rng::fill_gaussian(noise, engine);
                for (uint32_t d = 0; d < dim; ++d) point[d] = center[d] + sigma * noise[d];
            } while (!unit_normalize(point));
            float* dst = pool.row(row);
            for (uint32_t d = 0; d < dim; ++d) dst[d] = float(point[d]);
        }
    }
    return pool;
}

}  // namespace activeft::feature_store
