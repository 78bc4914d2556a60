#include "tabclust/benchcli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>

#include "tabclust/errors.hpp"

namespace tabclust::bench {

using nlohmann::json;

namespace {

const std::set<std::string> kKnownKeys{
    "datasets",         "methods",          "gamma_grid",    "epochs",         "pretrain_epochs",
    "seed",             "parallelism",      "output_dir",    "batch_size",     "learning_rate",
    "p_update_interval", "dkm_inv_temperature", "dkm_anneal", "kmeans_restarts", "depict_pad_to",
    "stratified_folds", "allow_size_mismatch", "write_histories"};

const std::set<std::string> kUnsupportedMethods{"aecm", "ae-cm", "dynae"};

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config: field '") + key + "' has the wrong type");
    }
}

DatasetSource parse_dataset(const json& j, const std::filesystem::path& base_dir) {
    DatasetSource src;
    if (j.is_string()) {
        std::filesystem::path p = j.get<std::string>();
        if (p.is_relative()) p = base_dir / p;
        src.manifest = data::load_manifest(p);
        src.name = src.manifest->name;
        return src;
    }
    if (!j.is_object()) throw ConfigError("config: dataset entries must be paths or objects");
    if (j.contains("synthetic")) {
        for (const auto& [key, value] : j.items()) {
            if (key != "name" && key != "synthetic") throw ConfigError("config: unknown dataset field '" + key + "'");
        }
        if (!j.contains("name") || !j.at("name").is_string()) {
            throw ConfigError("config: synthetic dataset needs a name");
        }
        src.name = j.at("name").get<std::string>();
        const json& s = j.at("synthetic");
        static const std::set<std::string> keys{"n", "dim", "k", "separation", "sigma", "seed"};
        for (const auto& [key, value] : s.items()) {
            if (!keys.contains(key)) throw ConfigError("config: unknown synthetic field '" + key + "'");
        }
        SynthSource syn;
        try {
            syn.n = s.at("n").get<std::size_t>();
            syn.dim = s.at("dim").get<std::size_t>();
            syn.k = s.at("k").get<std::size_t>();
            syn.separation = s.at("separation").get<double>();
            if (s.contains("sigma")) syn.sigma = s.at("sigma").get<double>();
            if (s.contains("seed")) syn.seed = s.at("seed").get<std::uint64_t>();
        } catch (const json::exception& e) {
            throw ConfigError("config: synthetic dataset '" + src.name + "': " + e.what());
        }
        src.synth = syn;
        return src;
    }
    src.manifest = data::manifest_from_json(j, base_dir);
    src.name = src.manifest->name;
    return src;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

void BenchmarkConfig::validate() const {
    if (datasets.empty()) throw ConfigError("config: no datasets");
    if (methods.empty()) throw ConfigError("config: no methods");
    std::set<std::string> names;
    for (const auto& d : datasets) {
        if (d.name.empty()) throw ConfigError("config: dataset without a name");
        if (!names.insert(d.name).second) throw ConfigError("config: duplicate dataset name '" + d.name + "'");
        if (d.name.find_first_of(",\"\n/\\") != std::string::npos) {
            throw ConfigError("config: dataset name '" + d.name + "' contains a reserved character");
        }
    }
    std::set<eval::MethodId> seen;
    for (auto m : methods) {
        if (!seen.insert(m).second) {
            throw ConfigError("config: method '" + std::string(eval::to_string(m)) + "' listed twice");
        }
    }
    if (epochs < 1) throw ConfigError("config: epochs must be at least 1");
    const bool any_deep = std::any_of(methods.begin(), methods.end(), eval::is_deep);
    if (any_deep && gamma_grid.empty()) throw ConfigError("config: gamma_grid must not be empty");
    for (double g : gamma_grid) {
        if (!(g >= 0.0) || !std::isfinite(g)) throw ConfigError("config: gamma values must be finite and >= 0");
    }
    if (parallelism < 1) throw ConfigError("config: parallelism must be positive");
    if (batch_size < 1) throw ConfigError("config: batch_size must be positive");
    if (!(learning_rate > 0.0)) throw ConfigError("config: learning_rate must be positive");
    if (p_update_interval < 1) throw ConfigError("config: p_update_interval must be positive");
    if (!(dkm_inv_temperature > 0.0)) throw ConfigError("config: dkm_inv_temperature must be positive");
    if (kmeans_restarts < 1) throw ConfigError("config: kmeans_restarts must be positive");
}

json BenchmarkConfig::to_json() const {
    json ds = json::array();
    for (const auto& d : datasets) {
        if (d.synth) {
            ds.push_back({{"name", d.name},
                          {"synthetic",
                           {{"n", d.synth->n},
                            {"dim", d.synth->dim},
                            {"k", d.synth->k},
                            {"separation", d.synth->separation},
                            {"sigma", d.synth->sigma},
                            {"seed", d.synth->seed}}}});
        } else {
            ds.push_back(data::manifest_to_json(*d.manifest));
        }
    }
    json ms = json::array();
    for (auto m : methods) ms.push_back(std::string(eval::to_string(m)));
    return {{"datasets", ds},
            {"methods", ms},
            {"gamma_grid", gamma_grid},
            {"epochs", epochs},
            {"pretrain_epochs", pretrain_epochs},
            {"seed", seed},
            {"batch_size", batch_size},
            {"learning_rate", learning_rate},
            {"p_update_interval", p_update_interval},
            {"dkm_inv_temperature", dkm_inv_temperature},
            {"dkm_anneal", dkm_anneal},
            {"kmeans_restarts", kmeans_restarts},
            {"depict_pad_to", depict_pad_to},
            {"stratified_folds", stratified_folds},
            {"allow_size_mismatch", allow_size_mismatch}};
}

std::string BenchmarkConfig::fingerprint() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(to_json().dump())));
    return buf;
}

BenchmarkConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (!kKnownKeys.contains(key)) throw ConfigError("config: unknown field '" + key + "'");
    }
    if (!j.contains("datasets") || !j.at("datasets").is_array()) throw ConfigError("config: 'datasets' must be a list");
    if (!j.contains("methods") || !j.at("methods").is_array()) throw ConfigError("config: 'methods' must be a list");

    BenchmarkConfig c;
    for (const auto& d : j.at("datasets")) c.datasets.push_back(parse_dataset(d, base_dir));
    for (const auto& m : j.at("methods")) {
        if (!m.is_string()) throw ConfigError("config: method names must be strings");
        const auto name = m.get<std::string>();
        std::string lower;
        for (char ch : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        if (kUnsupportedMethods.contains(lower)) {
            throw ConfigError("config: method '" + name + "' is unsupported: objective not specified");
        }
        const auto id = eval::parse_method(lower);
        if (!id) throw ConfigError("config: unknown method '" + name + "'");
        c.methods.push_back(*id);
    }
    read_opt(j, "gamma_grid", c.gamma_grid);
    read_opt(j, "epochs", c.epochs);
    read_opt(j, "pretrain_epochs", c.pretrain_epochs);
    read_opt(j, "seed", c.seed);
    read_opt(j, "parallelism", c.parallelism);
    if (j.contains("output_dir")) {
        std::string out;
        read_opt(j, "output_dir", out);
        c.output_dir = out;
        if (c.output_dir.is_relative()) c.output_dir = base_dir / c.output_dir;
    } else {
        c.output_dir = base_dir / c.output_dir;
    }
    read_opt(j, "batch_size", c.batch_size);
    read_opt(j, "learning_rate", c.learning_rate);
    read_opt(j, "p_update_interval", c.p_update_interval);
    read_opt(j, "dkm_inv_temperature", c.dkm_inv_temperature);
    read_opt(j, "dkm_anneal", c.dkm_anneal);
    read_opt(j, "kmeans_restarts", c.kmeans_restarts);
    read_opt(j, "depict_pad_to", c.depict_pad_to);
    read_opt(j, "stratified_folds", c.stratified_folds);
    read_opt(j, "allow_size_mismatch", c.allow_size_mismatch);
    read_opt(j, "write_histories", c.write_histories);
    c.validate();
    return c;
}

BenchmarkConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path.string() + "': " + e.what());
    }
    return parse_config(j, path.parent_path());
}

std::size_t effective_parallelism(const BenchmarkConfig& config) {
    const char* env = std::getenv("BENCH_THREADS");
    if (env == nullptr || *env == '\0') return config.parallelism;
    const std::string_view s(env);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v == 0) {
        throw ConfigError("BENCH_THREADS must be a positive integer, got '" + std::string(s) + "'");
    }
    return v;
}

std::vector<embed::MethodConfig> candidate_grid(const BenchmarkConfig& config, eval::MethodId method) {
    embed::MethodConfig base;
    base.epochs = config.epochs;
    base.pretrain_epochs = config.pretrain_epochs;
    base.lr = config.learning_rate;
    base.batch_size = config.batch_size;
    base.p_update_interval = config.p_update_interval;
    base.dkm_inv_temperature = config.dkm_inv_temperature;
    base.dkm_anneal = config.dkm_anneal;
    base.kmeans_restarts = config.kmeans_restarts;
    if (eval::is_deep(method)) base.method = eval::deep_method(method);
    if (!eval::uses_gamma(method)) return {base};
    std::vector<embed::MethodConfig> grid;
    for (double g : config.gamma_grid) {
        auto c = base;
        c.gamma = g;
        grid.push_back(c);
    }
    return grid;
}

eval::ProtocolOptions protocol_options(const BenchmarkConfig& config) {
    eval::ProtocolOptions o;
    o.stratified_folds = config.stratified_folds;
    o.depict_pad_to = config.depict_pad_to;
    o.kmeans_restarts = config.kmeans_restarts;
    return o;
}

}  // namespace tabclust::bench
