#include <charconv>
#include <fstream>
#include <sstream>

#include "pcbfeat/pipeline.hpp"

namespace pcbfeat::pipeline {
namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_feature_csv(const fs::path& path, const FeatureBlock& block, const std::vector<RegionLabel>& labels) {
    if (labels.size() != block.rows) throw DimensionMismatch("one label per feature row expected");
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::string text;
    for (const auto& n : block.names) {
        text += n;
        text += ',';
    }
    text += "label\n";
    for (std::size_t r = 0; r < block.rows; ++r) {
        for (double v : block.row(r)) {
            text += format_number(v);
            text += ',';
        }
        text += std::to_string(labels[r].decile);
        text += '\n';
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
}

selection::FeatureMatrix read_feature_csv(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty feature file " + path.string());
    auto header = split_commas(line);
    if (header.size() < 2 || header.back() != "label") {
        throw FormatError(path.string() + ": header must end with a 'label' column");
    }
    selection::FeatureMatrix m;
    for (std::size_t i = 0; i + 1 < header.size(); ++i) m.feature_names.emplace_back(header[i]);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto cells = split_commas(line);
        if (cells.size() != header.size()) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                              std::to_string(header.size()) + " cells, found " + std::to_string(cells.size()));
        }
        for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
            double v = 0.0;
            const auto res = std::from_chars(cells[i].data(), cells[i].data() + cells[i].size(), v);
            if (res.ec != std::errc{} || res.ptr != cells[i].data() + cells[i].size()) {
                throw FormatError(path.string() + ":" + std::to_string(line_no) + ": bad number '" +
                                  std::string(cells[i]) + "'");
            }
            m.values.push_back(v);
        }
        int label = 0;
        const auto& lc = cells.back();
        const auto res = std::from_chars(lc.data(), lc.data() + lc.size(), label);
        if (res.ec != std::errc{}) throw FormatError(path.string() + ":" + std::to_string(line_no) + ": bad label");
        m.labels.push_back(label);
        ++m.rows;
    }
    return m;
}

}  // namespace pcbfeat::pipeline
