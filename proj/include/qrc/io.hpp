// io.hpp: CSV emission and content digests.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

namespace qrc {

using CsvField = std::variant<std::string, double, std::int64_t>;

// RFC-4180 writer: '\n' line ends, fields quoted only when needed, doubles in
// %.17e so values round-trip exactly.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    void row(const std::vector<CsvField>& fields);
    void close();
    std::size_t rows() const { return rows_; }
    const std::filesystem::path& path() const { return path_; }

    static std::string format(const CsvField& field);
    static std::string quote(const std::string& text);

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t width_;
    std::size_t rows_ = 0;
};

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace qrc
