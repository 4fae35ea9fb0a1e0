#include "alq/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "alq/errors.hpp"

namespace alq::checkpoint {

std::string config_hash(const nlohmann::json& config) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : config.dump()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string to_hex(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", x);
    return buf;
}

double from_hex(const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad hex float '" + s + "'");
    return v;
}

Directory::Directory(std::filesystem::path dir, std::string verb, std::string hash)
    : dir_(std::move(dir)), verb_(std::move(verb)), hash_(std::move(hash)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw ResourceError("cannot create checkpoint directory " + dir_.string() + ": " + ec.message());
}

std::filesystem::path Directory::file_for(std::int64_t lo, std::int64_t hi) const {
    return dir_ / (verb_ + "-" + hash_ + "-" + std::to_string(lo) + "-" + std::to_string(hi) + ".json");
}

std::optional<numerics::BlockResult> Directory::load(std::int64_t lo, std::int64_t hi) const {
    std::ifstream in(file_for(lo, hi));
    if (!in) return std::nullopt;
    try {
        const auto doc = nlohmann::json::parse(in);
        if (doc.at("config_hash") != hash_ || doc.at("lo") != lo || doc.at("hi") != hi) return std::nullopt;
        numerics::BlockResult r;
        for (const auto& c : doc.at("channels"))
            r.push_back({from_hex(c.at("value")), from_hex(c.at("error_radius"))});
        return r;
    } catch (const std::exception&) {
        return std::nullopt;  // truncated or foreign file: recompute the block
    }
}

void Directory::save(std::int64_t lo, std::int64_t hi, const numerics::BlockResult& r) const {
    nlohmann::json channels = nlohmann::json::array();
    for (const auto& c : r) channels.push_back({{"value", to_hex(c.value)}, {"error_radius", to_hex(c.error_radius)}});
    const nlohmann::json doc{{"verb", verb_}, {"config_hash", hash_}, {"lo", lo}, {"hi", hi}, {"channels", channels}};
    const auto target = file_for(lo, hi);
    auto tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        out << doc.dump() << '\n';
        if (!out) throw ResourceError("cannot write checkpoint " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

}  // namespace alq::checkpoint
