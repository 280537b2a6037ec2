#include "whittle/csv.hpp"

#include <charconv>
#include <filesystem>
#include <stdexcept>

namespace whittle {

namespace {

template <typename T>
std::string to_chars_string(T value) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string csv_number(double x) { return to_chars_string(x); }
std::string csv_number(long x) { return to_chars_string(x); }
std::string csv_number(std::uint64_t x) { return to_chars_string(x); }

CsvWriter::CsvWriter(const std::string& path) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_) throw std::runtime_error("cannot open output file: " + path);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        const std::string& c = cells[i];
        if (c.find_first_of(",\"\n") != std::string::npos) {
            out_ << '"';
            for (char ch : c) {
                if (ch == '"') out_ << '"';
                out_ << ch;
            }
            out_ << '"';
        } else {
            out_ << c;
        }
    }
    out_ << '\n';
}

}  // namespace whittle
