#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

#include "alq/numerics.hpp"

namespace alq::checkpoint {

// 64-bit FNV-1a of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

// One file per (verb, configuration hash, block range). Values are stored as
// hex floats so a reload is bit-exact.
class Directory {
public:
    Directory(std::filesystem::path dir, std::string verb, std::string hash);

    std::optional<numerics::BlockResult> load(std::int64_t lo, std::int64_t hi) const;
    void save(std::int64_t lo, std::int64_t hi, const numerics::BlockResult& r) const;

    std::filesystem::path file_for(std::int64_t lo, std::int64_t hi) const;
    const std::string& hash() const { return hash_; }

private:
    std::filesystem::path dir_;
    std::string verb_;
    std::string hash_;
};

std::string to_hex(double x);
double from_hex(const std::string& s);

}  // namespace alq::checkpoint
