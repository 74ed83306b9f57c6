#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

namespace qjump {

inline constexpr const char* kVersion = "0.1.0";

// Shortest round-trip decimal form of a double (17 significant digits),
// locale independent.
std::string fmt17(double v);

// Provenance record written next to every output file. The flat key-value
// format keeps it greppable; replaying the recorded command line reproduces
// the outputs byte for byte.
struct RunManifest {
    std::string command_line;
    std::uint64_t master_seed = 0;
    double wall_seconds = 0.0;
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<std::string> outputs;

    void add(const std::string& key, const std::string& value);
    void add(const std::string& key, double value);
    void add(const std::string& key, long value);
    void write(const std::filesystem::path& path) const;
};

// CSV writer pinned to the classic locale; all floats go through fmt17.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::string& header);

    void field(const std::string& value);
    void field(double value);
    void end_row();

private:
    std::ofstream out_;
    bool row_started_ = false;
};

}  // namespace qjump
