#include "qjump/manifest.hpp"

#include <cstdio>
#include <locale>
#include <stdexcept>

namespace qjump {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void RunManifest::add(const std::string& key, const std::string& value) {
    config.emplace_back(key, value);
}

void RunManifest::add(const std::string& key, double value) { add(key, fmt17(value)); }

void RunManifest::add(const std::string& key, long value) { add(key, std::to_string(value)); }

void RunManifest::write(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open manifest file " + path.string());
    out.imbue(std::locale::classic());
    out << "command_line = " << command_line << "\n";
    out << "version = " << kVersion << "\n";
    out << "master_seed = " << master_seed << "\n";
    out << "wall_seconds = " << fmt17(wall_seconds) << "\n";
    for (const auto& [key, value] : config) out << key << " = " << value << "\n";
    for (const auto& file : outputs) out << "output = " << file << "\n";
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::string& header) {
    out_.open(path);
    if (!out_) throw std::runtime_error("cannot open output file " + path.string());
    out_.imbue(std::locale::classic());
    out_ << header << "\n";
}

void CsvWriter::field(const std::string& value) {
    if (row_started_) out_ << ",";
    out_ << value;
    row_started_ = true;
}

void CsvWriter::field(double value) { field(fmt17(value)); }

void CsvWriter::end_row() {
    out_ << "\n";
    row_started_ = false;
}

}  // namespace qjump
