#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "vaceuler/dynamics.hpp"

namespace vaceuler {

// Plain-text `key = value` configuration, one pair per line, `#` comments.
// Versioned schema (`schema = 1` required); unknown keys are rejected with
// the offending line number. See README for the key reference.
struct Config {
    SimulationSpec sim;
    std::string output_prefix = "run";
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> entries; // parse order

    static Config parse(const std::string& text);
    static Config load(const std::string& path);

    // applies one key=value pair (same validation as the file parser)
    void set(const std::string& key, const std::string& value);
    // consistency checks that need the whole config (required keys, ranges)
    void finalize() const;
};

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace vaceuler
