#include "dualring/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace dualring {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::string& header)
    : out_(path) {
    if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
    out_ << header << '\n';
}

void CsvWriter::row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
        if (!first) out_ << ',';
        out_ << format_double(v);
        first = false;
    }
    out_ << '\n';
}

std::vector<std::vector<double>> read_csv(const std::string& path,
                                          const std::string& expected_header,
                                          std::size_t n_fields) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected_header)
        throw std::runtime_error(path + ": expected header '" + expected_header +
                                 "', got '" + line + "'");
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> fields;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str())
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": bad numeric field '" + cell + "'");
            fields.push_back(v);
        }
        if (fields.size() != n_fields)
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected " + std::to_string(n_fields) +
                                     " fields");
        rows.push_back(std::move(fields));
    }
    return rows;
}

}  // namespace dualring
