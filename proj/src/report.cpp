#include "bloch/report.hpp"

#include <sstream>

namespace bloch {

bool Report::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::size_t Report::failed_count() const {
    std::size_t n = 0;
    for (const auto& c : checks)
        if (!c.pass) ++n;
    return n;
}

std::string json_escape(const std::string& s) {
    std::ostringstream os;
    for (char c : s) {
        switch (c) {
            case '"': os << "\\\""; break;
            case '\\': os << "\\\\"; break;
            case '\n': os << "\\n"; break;
            case '\t': os << "\\t"; break;
            default: os << c;
        }
    }
    return os.str();
}

std::string Report::to_json() const {
    std::ostringstream os;
    os << "{\"suite\": \"" << json_escape(suite) << "\", \"ring\": \"" << json_escape(ring)
       << "\", \"checks\": [";
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const auto& c = checks[i];
        if (i) os << ", ";
        os << "{\"id\": \"" << json_escape(c.id) << "\", \"args\": \"" << json_escape(c.args)
           << "\", \"pass\": " << (c.pass ? "true" : "false")
           << ", \"hypothesis_met\": " << (c.hypothesis_met ? "true" : "false") << "}";
    }
    os << "]}";
    return os.str();
}

}  // namespace bloch
