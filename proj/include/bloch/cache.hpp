#pragma once

#include "bloch/presented_module.hpp"

#include <map>
#include <optional>
#include <string>

namespace bloch {

// Read-through cache of computed structures, keyed by
// (schema version, code version, ring descriptor, object name).
// Entries are single JSON files written via temp-file + atomic rename;
// stale or corrupt entries are evicted and recomputed. If the directory is
// unwritable the cache downgrades to memory-only with a warning on stderr.
class ResultCache {
public:
    explicit ResultCache(std::string dir);  // empty = memory-only

    std::optional<Structure> get(const std::string& ring, const std::string& object);
    void put(const std::string& ring, const std::string& object, const Structure& s);

    bool persistent() const { return persistent_; }
    const std::string& directory() const { return dir_; }

private:
    std::string path_for(const std::string& ring, const std::string& object) const;

    std::string dir_;
    bool persistent_ = false;
    std::map<std::pair<std::string, std::string>, Structure> memory_;
};

}  // namespace bloch
