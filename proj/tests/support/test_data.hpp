#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "smartperm/capability_kb.hpp"
#include "smartperm/lexicon.hpp"

namespace smartperm::testing {

inline std::string data_path(const std::string& name) {
    return std::string(SMARTPERM_DATA_DIR) + "/" + name;
}

inline std::string fixture_path(const std::string& name) {
    return std::string(SMARTPERM_FIXTURE_DIR) + "/" + name;
}

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string fixture(const std::string& name) {
    return read_text(fixture_path(name));
}

inline const CapabilityKB& bundled_kb() {
    static const CapabilityKB kb = load_kb(data_path("capabilities.kb"));
    return kb;
}

inline const Lexicon& bundled_lexicon() {
    static const Lexicon lex = load_lexicon(data_path("lexicon.txt"), bundled_kb());
    return lex;
}

}  // namespace smartperm::testing
