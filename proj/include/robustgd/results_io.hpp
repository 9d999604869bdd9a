#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "robustgd/metrics.hpp"

namespace robustgd {

inline constexpr std::string_view kResultsHeader =
    "experiment,method,p,n,epsilon,beta,sigma,trial,iter,param_error,zero_one_error,rel_eff_vs_ols,runtime_ms";

void write_results_csv(std::ostream& out, const std::vector<TrialResult>& rows);
std::vector<TrialResult> read_results_csv(std::istream& in);

/// JSON mirror: an array of objects keyed by the CSV column names; absent
/// fields are null.
void write_results_json(std::ostream& out, const std::vector<TrialResult>& rows);
std::vector<TrialResult> read_results_json(std::istream& in);

struct Moments {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation; 0 for a single trial
    std::size_t count = 0;
};

Moments moments(const std::vector<double>& values);

/// Aggregate over trials for one (experiment, method, grid point).
struct SummaryRow {
    std::string experiment;
    std::string method;
    Index p = 0;
    std::size_t n = 0;
    std::optional<double> epsilon;
    std::optional<double> beta;
    std::optional<double> sigma;
    std::size_t trials = 0;
    Moments param_error;
    std::optional<Moments> zero_one_error;
    std::optional<Moments> rel_eff_vs_ols;
};

/// Each trial contributes its final row (largest iter, or its single
/// closed-form row). Groups keep first-appearance order.
std::vector<SummaryRow> summarize(const std::vector<TrialResult>& rows);

enum class ReportFormat { Table, Csv, Json };

void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows, ReportFormat format);

}  // namespace robustgd
