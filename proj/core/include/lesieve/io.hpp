#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lesieve/errors.hpp"

namespace lesieve {

// Round-trip decimal formatting with '.' separator, locale-independent.
std::string format_double(double x);

nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// CSV with a header row, '\n' line endings, '.' decimals.
class CsvWriter {
public:
    // If `comment` is nonempty it is written first as a "# ..." line (used to
    // record the seed of entropy-seeded runs).
    CsvWriter(const std::string& path, const std::vector<std::string>& header,
              const std::string& comment = "");
    void row(const std::vector<std::string>& cells);
    void close();

private:
    std::ofstream out_;
};

} // namespace lesieve
