#include "bloch/cache.hpp"

#include "bloch/version.hpp"

#include <json.hpp>

#include <cctype>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

namespace fs = std::filesystem;

namespace bloch {

ResultCache::ResultCache(std::string dir) : dir_(std::move(dir)) {
    if (dir_.empty()) return;
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) {
        std::cerr << "warning: cache directory '" << dir_
                  << "' is not usable; falling back to in-memory cache\n";
        return;
    }
    // probe writability
    fs::path probe = fs::path(dir_) / ".probe";
    std::ofstream f(probe);
    if (!f) {
        std::cerr << "warning: cache directory '" << dir_
                  << "' is not writable; falling back to in-memory cache\n";
        return;
    }
    f.close();
    fs::remove(probe, ec);
    persistent_ = true;
}

std::string ResultCache::path_for(const std::string& ring, const std::string& object) const {
    std::string name;
    for (char c : ring + "__" + object)
        name.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
    return (fs::path(dir_) / (name + ".json")).string();
}

std::optional<Structure> ResultCache::get(const std::string& ring, const std::string& object) {
    auto mem = memory_.find({ring, object});
    if (mem != memory_.end()) return mem->second;
    if (!persistent_) return std::nullopt;
    std::string path = path_for(ring, object);
    std::ifstream f(path);
    if (!f) return std::nullopt;
    try {
        nlohmann::json j = nlohmann::json::parse(f);
        if (j.at("schema").get<int>() != kSchemaVersion ||
            j.at("code_version").get<std::string>() != kCodeVersion ||
            j.at("ring").get<std::string>() != ring ||
            j.at("object").get<std::string>() != object) {
            return std::nullopt;  // stale or colliding entry: ignore, will be overwritten
        }
        Structure s;
        s.free_rank = j.at("free_rank").get<std::size_t>();
        for (const auto& t : j.at("torsion")) s.torsion.push_back(Int(t.get<std::string>()));
        memory_[{ring, object}] = s;
        return s;
    } catch (const std::exception&) {
        // corrupt entry: evict
        std::error_code ec;
        fs::remove(path, ec);
        return std::nullopt;
    }
}

void ResultCache::put(const std::string& ring, const std::string& object, const Structure& s) {
    memory_[{ring, object}] = s;
    if (!persistent_) return;
    nlohmann::json j;
    j["schema"] = kSchemaVersion;
    j["code_version"] = kCodeVersion;
    j["ring"] = ring;
    j["object"] = object;
    j["free_rank"] = s.free_rank;
    nlohmann::json tor = nlohmann::json::array();
    for (const auto& d : s.torsion) {
        std::ostringstream os;
        os << d;
        tor.push_back(os.str());
    }
    j["torsion"] = std::move(tor);
    j["created"] = static_cast<long long>(std::time(nullptr));

    std::string path = path_for(ring, object);
    std::string tmp = path + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp);
        if (!f) {
            std::cerr << "warning: cache write failed; continuing without persistence\n";
            return;
        }
        f << j.dump(2) << "\n";
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        std::cerr << "warning: cache rename failed; continuing without persistence\n";
    }
}

}  // namespace bloch
