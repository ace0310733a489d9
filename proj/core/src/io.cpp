#include "lesieve/io.hpp"

#include <charconv>

#include <nlohmann/json.hpp>

namespace lesieve {

std::string format_double(double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ResourceError("cannot open output file: " + path);
    out << content;
    if (!out) throw ResourceError("write failed: " + path);
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header,
                     const std::string& comment)
    : out_(path, std::ios::binary) {
    if (!out_) throw ResourceError("cannot open output file: " + path);
    if (!comment.empty()) out_ << "# " << comment << '\n';
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
    if (!out_) throw ResourceError("CSV write failed");
}

void CsvWriter::close() {
    out_.close();
}

} // namespace lesieve
