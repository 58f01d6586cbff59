#pragma once

#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

namespace dualring {

// Minimal numeric CSV writer; values carry 12 significant digits.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& header);
    void row(std::initializer_list<double> values);

private:
    std::ofstream out_;
};

// Reads a numeric CSV, checks the header, returns one vector per row.
// Throws std::runtime_error on a malformed file.
std::vector<std::vector<double>> read_csv(const std::string& path,
                                          const std::string& expected_header,
                                          std::size_t n_fields);

std::string format_double(double v);

}  // namespace dualring
