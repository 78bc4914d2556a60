#include "tabclust/benchcli/ledger.hpp"

#include <json.hpp>

#include "tabclust/errors.hpp"

namespace tabclust::bench {

using nlohmann::json;

std::string to_string(UnitStatus s) {
    switch (s) {
        case UnitStatus::pending: return "pending";
        case UnitStatus::done: return "done";
        case UnitStatus::failed: return "failed";
    }
    return "pending";
}

namespace {

UnitStatus parse_status(const std::string& s) {
    if (s == "done") return UnitStatus::done;
    if (s == "failed") return UnitStatus::failed;
    return UnitStatus::pending;
}

json record_to_json(const UnitRecord& r) {
    json j{{"type", "unit"},
           {"dataset", r.dataset},
           {"method", r.method},
           {"fold", r.fold},
           {"candidate", r.candidate},
           {"status", to_string(r.status)},
           {"train_accuracy", r.train_accuracy},
           {"test_accuracy", r.test_accuracy},
           {"seed", r.seed},
           {"depict_fallback", r.depict_fallback}};
    j["gamma"] = r.gamma ? json(*r.gamma) : json(nullptr);
    if (!r.error.empty()) j["error"] = r.error;
    return j;
}

UnitRecord record_from_json(const json& j) {
    UnitRecord r;
    r.dataset = j.at("dataset").get<std::string>();
    r.method = j.at("method").get<std::string>();
    r.fold = j.at("fold").get<std::size_t>();
    r.candidate = j.at("candidate").get<std::size_t>();
    r.status = parse_status(j.at("status").get<std::string>());
    r.train_accuracy = j.at("train_accuracy").get<double>();
    r.test_accuracy = j.at("test_accuracy").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.depict_fallback = j.value("depict_fallback", false);
    if (j.contains("gamma") && !j.at("gamma").is_null()) r.gamma = j.at("gamma").get<double>();
    r.error = j.value("error", std::string());
    return r;
}

RunLedger::NameKey key_of(const UnitRecord& r) { return {r.dataset, r.method, r.fold, r.candidate}; }

}  // namespace

RunLedger::RunLedger(RunLedger&& other) noexcept
    : path_(std::move(other.path_)), out_(std::move(other.out_)), records_(std::move(other.records_)) {}

RunLedger RunLedger::create(const std::filesystem::path& path, const std::string& fingerprint) {
    RunLedger ledger;
    ledger.path_ = path;
    ledger.out_.open(path, std::ios::trunc);
    if (!ledger.out_) throw ConfigError("cannot write ledger '" + path.string() + "'");
    ledger.out_ << json{{"type", "header"}, {"fingerprint", fingerprint}}.dump() << '\n';
    ledger.out_.flush();
    return ledger;
}

RunLedger RunLedger::resume(const std::filesystem::path& path, const std::string& fingerprint) {
    if (!std::filesystem::exists(path)) return create(path, fingerprint);
    RunLedger ledger;
    ledger.path_ = path;
    {
        std::ifstream in(path);
        std::string line;
        bool header = false;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json j;
            try {
                j = json::parse(line);
            } catch (const json::exception&) {
                continue;  // torn write from an interrupted run
            }
            if (j.value("type", "") == "header") {
                if (j.value("fingerprint", "") != fingerprint) {
                    throw ConfigError("ledger '" + path.string() +
                                      "' was written by a different configuration; use run to start over");
                }
                header = true;
            } else if (j.value("type", "") == "unit") {
                const UnitRecord r = record_from_json(j);
                ledger.records_[key_of(r)] = r;
            }
        }
        if (!header) throw ConfigError("ledger '" + path.string() + "' has no header line");
    }
    ledger.out_.open(path, std::ios::app);
    if (!ledger.out_) throw ConfigError("cannot append to ledger '" + path.string() + "'");
    return ledger;
}

void RunLedger::append(const UnitRecord& record) {
    std::lock_guard lock(mutex_);
    out_ << record_to_json(record).dump() << '\n';
    out_.flush();
    records_[key_of(record)] = record;
}

std::optional<UnitRecord> RunLedger::find(const std::string& dataset, const std::string& method, std::size_t fold,
                                          std::size_t candidate) const {
    std::lock_guard lock(mutex_);
    const auto it = records_.find({dataset, method, fold, candidate});
    if (it == records_.end()) return std::nullopt;
    return it->second;
}

}  // namespace tabclust::bench
