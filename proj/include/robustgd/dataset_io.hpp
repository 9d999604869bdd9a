#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "robustgd/models.hpp"

namespace robustgd {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view text);

/// Header `x_0,...,x_{p-1},y` when the dataset has responses, else
/// `z_0,...,z_{p-1}`; one observation per line.
void write_dataset_csv(std::ostream& out, const Dataset& data);
void write_dataset_csv(const std::string& path, const Dataset& data);

Dataset read_dataset_csv(std::istream& in);
Dataset read_dataset_csv(const std::string& path);

}  // namespace robustgd
