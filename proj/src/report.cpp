#include "activeft/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace activeft::report {

using nlohmann::json;

json config_json(const optimizer::OptimizerConfig& c) {
    json j;
    j["tau"] = c.tau;
    j["lambda"] = c.lambda;
    j["lr"] = c.lr;
    j["iterations"] = c.iterations;
    if (c.subsample_m)
        j["subsample_m"] = *c.subsample_m;
    else
        j["subsample_m"] = "all";
    j["ci_update"] = optimizer::to_string(c.ci_update);
    j["regularizer"] = optimizer::to_string(c.regularizer);
    j["adam_beta1"] = c.adam_beta1;
    j["adam_beta2"] = c.adam_beta2;
    j["adam_eps"] = c.adam_eps;
    return j;
}

json loss_json(const optimizer::LossBreakdown& loss) {
    return json{{"total", loss.total}, {"d_term", loss.d_term}, {"r_term", loss.r_term}};
}

json diagnostics_json(const metrics::DiagnosticsReport& report) {
    json j;
    j["metrics"]["emd"] = report.emd;
    j["metrics"]["mean_nearest"] = report.mean_nearest;
    if (report.min_pairwise)
        j["metrics"]["min_pairwise"] = *report.min_pairwise;
    else
        j["metrics"]["min_pairwise"] = nullptr;
    if (report.initial_loss && report.final_loss) {
        j["loss"]["initial"] = loss_json(*report.initial_loss);
        j["loss"]["final"] = loss_json(*report.final_loss);
    }
    if (report.assumption_stats)
        j["assumption"]["topk_mean_exp_sim"] = report.assumption_stats->topk_mean_exp_sim;
    return j;
}

namespace {

json run_json(const experiments::MethodRun& run) {
    json j;
    j["method"] = run.method;
    j["seed"] = run.seed;
    j["emd"] = run.emd;
    j["mean_nearest"] = run.mean_nearest;
    if (run.min_pairwise)
        j["min_pairwise"] = *run.min_pairwise;
    else
        j["min_pairwise"] = nullptr;
    return j;
}

json spec_json(const feature_store::SyntheticSpec& spec) {
    json j;
    j["n_clusters"] = spec.n_clusters;
    j["points_per_cluster"] = spec.points_per_cluster;
    j["dim"] = spec.dim;
    j["spread"] = spec.spread;
    j["seed"] = spec.seed;
    return j;
}

}  // namespace

json comparison_json(const experiments::ComparisonTable& table) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["mode"] = "comparison";
    j["pool_spec"] = spec_json(table.pool_spec);
    j["b"] = table.b;
    j["rows"] = json::array();
    for (const auto& row : table.rows) {
        json r;
        r["method"] = row.method;
        r["mean_emd"] = row.mean_emd;
        r["std_emd"] = row.std_emd;
        r["mean_min_pairwise"] = row.mean_min_pairwise;
        r["mean_nearest"] = row.mean_nearest;
        r["runs"] = json::array();
        for (const auto& run : row.runs) r["runs"].push_back(run_json(run));
        j["rows"].push_back(std::move(r));
    }
    return j;
}

json ablation_json(const experiments::AblationTable& table) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["mode"] = "ablation";
    j["pool_spec"] = spec_json(table.pool_spec);
    j["b"] = table.b;
    j["axis"] = experiments::to_string(table.axis);
    j["rows"] = json::array();
    for (const auto& row : table.rows) {
        json r;
        r["value"] = row.value;
        r["mean_emd"] = row.mean_emd;
        r["std_emd"] = row.std_emd;
        r["mean_min_pairwise"] = row.mean_min_pairwise;
        r["mean_assumption_ratio"] = row.mean_assumption_ratio;
        r["runs"] = json::array();
        for (const auto& run : row.runs) r["runs"].push_back(run_json(run));
        j["rows"].push_back(std::move(r));
    }
    return j;
}

std::string config_digest(const std::string& method, uint32_t b,
                          const optimizer::OptimizerConfig& config) {
    std::ostringstream canon;
    canon << method << '|' << b << '|' << config_json(config).dump() << '|' << config.seed;
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : canon.str()) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open " + path.string() + " for writing");
    out.write(text.data(), std::streamsize(text.size()));
    out.flush();
    if (!out) throw io_error("write failure on " + path.string());
}

void write_json(const std::filesystem::path& path, const json& doc) {
    write_text(path, doc.dump(2) + "\n");
}

void write_indices(const std::filesystem::path& path, const std::vector<uint32_t>& indices) {
    std::string out;
    for (uint32_t idx : indices) {
        out += std::to_string(idx);
        out += '\n';
    }
    write_text(path, out);
}

std::vector<uint32_t> read_indices(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path.string());
    std::vector<uint32_t> indices;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        char* end = nullptr;
        const unsigned long long v = std::strtoull(line.c_str(), &end, 10);
        if (end == line.c_str() || *end != '\0')
            throw validation_error(path.string() + ": line " + std::to_string(lineno) +
                                   ": expected a nonnegative integer, got '" + line + "'");
        indices.push_back(uint32_t(v));
    }
    if (in.bad()) throw io_error("read failure on " + path.string());
    if (indices.empty()) throw validation_error(path.string() + ": no indices found");
    return indices;
}

}  // namespace activeft::report
