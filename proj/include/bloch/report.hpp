#pragma once

#include <string>
#include <vector>

namespace bloch {

struct CheckResult {
    std::string id;
    std::string args;
    bool pass = false;
    bool hypothesis_met = true;
};

struct Report {
    std::string suite;
    std::string ring;
    std::vector<CheckResult> checks;

    bool all_pass() const;
    std::size_t failed_count() const;
    // {"suite": ..., "ring": ..., "checks": [{"id", "args", "pass", "hypothesis_met"}...]}
    std::string to_json() const;
};

std::string json_escape(const std::string& s);

}  // namespace bloch
