#include "robustgd/dataset_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace robustgd {

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc()) throw std::runtime_error("failed to format number");
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw std::runtime_error("invalid number '" + std::string(text) + "'");
    }
    return v;
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
    const bool supervised = data.has_response();
    const char prefix = supervised ? 'x' : 'z';
    for (Index j = 0; j < data.dim(); ++j) {
        if (j) out << ',';
        out << prefix << '_' << j;
    }
    if (supervised) out << ",y";
    out << '\n';
    for (Index i = 0; i < data.size(); ++i) {
        for (Index j = 0; j < data.dim(); ++j) {
            if (j) out << ',';
            out << format_double(data.features(i, j));
        }
        if (supervised) out << ',' << format_double(data.response(i));
        out << '\n';
    }
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_dataset_csv(out, data);
    if (!out) throw std::runtime_error("failed writing " + path);
}

Dataset read_dataset_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("dataset CSV is empty");
    strip_cr(line);
    const auto header = split_commas(line);
    const bool supervised = !header.empty() && header.back() == "y";
    const std::size_t p = supervised ? header.size() - 1 : header.size();
    const char prefix = supervised ? 'x' : 'z';
    if (p == 0) throw std::runtime_error("dataset CSV header has no covariate columns");
    for (std::size_t j = 0; j < p; ++j) {
        if (header[j] != std::string(1, prefix) + "_" + std::to_string(j)) {
            throw std::runtime_error("unexpected dataset CSV column '" + std::string(header[j]) + "'");
        }
    }

    std::vector<double> values;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_commas(line);
        if (fields.size() != header.size()) {
            throw std::runtime_error("dataset CSV row " + std::to_string(rows + 2) + " has wrong field count");
        }
        for (auto f : fields) values.push_back(parse_double(f));
        ++rows;
    }
    if (rows == 0) throw std::runtime_error("dataset CSV has no rows");

    Dataset data;
    const auto n = static_cast<Index>(rows);
    const auto width = static_cast<Index>(header.size());
    data.features.resize(n, static_cast<Index>(p));
    if (supervised) data.response.resize(n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < static_cast<Index>(p); ++j) {
            data.features(i, j) = values[static_cast<std::size_t>(i * width + j)];
        }
        if (supervised) data.response(i) = values[static_cast<std::size_t>(i * width + width - 1)];
    }
    return data;
}

Dataset read_dataset_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_dataset_csv(in);
}

}  // namespace robustgd
