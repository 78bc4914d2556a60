#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>

namespace tabclust::bench {

enum class UnitStatus { pending, done, failed };

struct UnitKey {
    std::size_t dataset = 0;  // index in config order
    std::size_t method = 0;   // index in config order
    std::size_t fold = 0;
    std::size_t candidate = 0;

    friend auto operator<=>(const UnitKey&, const UnitKey&) = default;
};

struct UnitRecord {
    std::string dataset;
    std::string method;
    std::size_t fold = 0;
    std::size_t candidate = 0;
    UnitStatus status = UnitStatus::pending;
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
    std::optional<double> gamma;
    std::uint64_t seed = 0;
    bool depict_fallback = false;
    std::string error;
};

/// Append-only JSON-lines log of run units.
///
/// Line 1 is {"type": "header", "fingerprint": ...}; every further line is
/// one finished unit. A later line for the same unit supersedes earlier ones.
/// Appends are serialised and flushed, so a killed run leaves a readable file
/// (a torn final line is ignored on load).
class RunLedger {
public:
    // Starts a new ledger, truncating any existing file.
    static RunLedger create(const std::filesystem::path& path, const std::string& fingerprint);
    // Reopens an existing ledger for appending. Throws ConfigError when the
    // fingerprint differs; creates the file when it does not exist.
    static RunLedger resume(const std::filesystem::path& path, const std::string& fingerprint);

    // Records are keyed by (dataset, method, fold, candidate) names.
    using NameKey = std::tuple<std::string, std::string, std::size_t, std::size_t>;

    void append(const UnitRecord& record);
    std::optional<UnitRecord> find(const std::string& dataset, const std::string& method, std::size_t fold,
                                   std::size_t candidate) const;
    const std::map<NameKey, UnitRecord>& records() const noexcept { return records_; }

    RunLedger(RunLedger&& other) noexcept;

private:
    RunLedger() = default;

    std::filesystem::path path_;
    std::ofstream out_;
    std::map<NameKey, UnitRecord> records_;
    mutable std::mutex mutex_;
};

std::string to_string(UnitStatus s);

}  // namespace tabclust::bench
