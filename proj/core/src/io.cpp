#include "ngca/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ngca {

std::string format_full(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void write_delimited(std::ostream& out, const Matrix& matrix,
                     const std::vector<std::string>& header) {
    if (!header.empty()) {
        for (std::size_t j = 0; j < header.size(); ++j) {
            if (j) out << ',';
            out << header[j];
        }
        out << '\n';
    }
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
        for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
            if (j) out << ',';
            out << format_full(matrix(i, j));
        }
        out << '\n';
    }
}

void write_delimited_file(const std::string& path, const Matrix& matrix,
                          const std::vector<std::string>& header) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_delimited(out, matrix, header);
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

std::vector<double> parse_line(const std::string& line, long line_number) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= line.size()) {
        std::size_t next = line.find(',', pos);
        if (next == std::string::npos) next = line.size();
        const std::string_view field(line.data() + pos, next - pos);
        double value = 0.0;
        const auto [end, err] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (err != std::errc{} || end != field.data() + field.size()) {
            std::ostringstream message;
            message << "parse error at line " << line_number << ": bad field '"
                    << field << "'";
            throw std::runtime_error(message.str());
        }
        values.push_back(value);
        pos = next + 1;
        if (next == line.size()) break;
    }
    return values;
}

}  // namespace

Matrix read_delimited(std::istream& in, bool expect_header) {
    std::string line;
    long line_number = 0;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (expect_header && line_number == 1) continue;
        rows.push_back(parse_line(line, line_number));
        if (rows.size() > 1 && rows.back().size() != rows.front().size()) {
            std::ostringstream message;
            message << "parse error at line " << line_number << ": expected "
                    << rows.front().size() << " fields, got " << rows.back().size();
            throw std::runtime_error(message.str());
        }
    }
    if (rows.empty()) throw std::runtime_error("input table is empty");
    Matrix matrix(static_cast<Eigen::Index>(rows.size()),
                  static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.front().size(); ++j)
            matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return matrix;
}

Matrix read_delimited_file(const std::string& path, bool expect_header) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    return read_delimited(in, expect_header);
}

void Report::set(const std::string& key, const std::string& value) {
    if (!values_.contains(key)) order_.push_back(key);
    values_[key] = value;
}

void Report::set(const std::string& key, double value) { set(key, format_full(value)); }

void Report::set(const std::string& key, long value) { set(key, std::to_string(value)); }

void Report::set_vector(const std::string& key, const Vector& values) {
    std::string joined;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (i) joined += ' ';
        joined += format_full(values(i));
    }
    set(key, joined);
}

void Report::set_matrix(const std::string& key, const Matrix& values) {
    std::string joined;
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            if (i || j) joined += ' ';
            joined += format_full(values(i, j));
        }
    }
    set(key + ".rows", static_cast<long>(values.rows()));
    set(key + ".cols", static_cast<long>(values.cols()));
    set(key, joined);
}

const std::string& Report::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw std::out_of_range("report has no key: " + key);
    return it->second;
}

double Report::get_double(const std::string& key) const { return std::stod(get(key)); }

Vector Report::get_vector(const std::string& key) const {
    std::istringstream stream(get(key));
    std::vector<double> values;
    double value = 0.0;
    while (stream >> value) values.push_back(value);
    return Eigen::Map<const Vector>(values.data(),
                                    static_cast<Eigen::Index>(values.size()));
}

bool Report::has(const std::string& key) const { return values_.contains(key); }

std::string Report::serialize() const {
    std::string text;
    for (const std::string& key : order_) {
        text += key;
        text += " = ";
        text += values_.at(key);
        text += '\n';
    }
    return text;
}

Report Report::parse(const std::string& text) {
    Report report;
    std::istringstream stream(text);
    std::string line;
    long line_number = 0;
    while (std::getline(stream, line)) {
        ++line_number;
        if (line.empty()) continue;
        const std::size_t separator = line.find(" = ");
        if (separator == std::string::npos) {
            std::ostringstream message;
            message << "report parse error at line " << line_number;
            throw std::runtime_error(message.str());
        }
        report.set(line.substr(0, separator), line.substr(separator + 3));
    }
    return report;
}

}  // namespace ngca
