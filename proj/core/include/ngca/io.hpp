#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ngca/types.hpp"

namespace ngca {

/// Writes a matrix as comma-delimited text, one row per line, values at 17
/// significant digits so the round trip is exact.
void write_delimited(std::ostream& out, const Matrix& matrix,
                     const std::vector<std::string>& header = {});
void write_delimited_file(const std::string& path, const Matrix& matrix,
                          const std::vector<std::string>& header = {});

/// Parses a delimited table; reports the offending line number on failure.
Matrix read_delimited(std::istream& in, bool expect_header = false);
Matrix read_delimited_file(const std::string& path, bool expect_header = false);

/// Flat key-value report document: "key = value" lines, stable key order.
class Report {
public:
    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value);
    void set(const std::string& key, long value);
    void set_vector(const std::string& key, const Vector& values);
    void set_matrix(const std::string& key, const Matrix& values);

    const std::string& get(const std::string& key) const;
    double get_double(const std::string& key) const;
    Vector get_vector(const std::string& key) const;
    bool has(const std::string& key) const;

    std::string serialize() const;
    static Report parse(const std::string& text);

    bool operator==(const Report& other) const = default;

private:
    std::vector<std::string> order_;
    std::map<std::string, std::string> values_;
};

std::string format_full(double value);

}  // namespace ngca
