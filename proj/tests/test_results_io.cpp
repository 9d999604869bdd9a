#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "oracles.hpp"
#include "robustgd/results_io.hpp"

using namespace robustgd;

namespace {

std::vector<TrialResult> sample_rows() {
    std::vector<TrialResult> rows;
    for (std::uint64_t t = 0; t < 3; ++t) {
        for (int it = 0; it <= 2; ++it) {
            TrialResult r;
            r.experiment = "huber-linreg";
            r.method = "rgd-huber";
            r.p = 8;
            r.n = 800;
            r.epsilon = 0.1;
            r.sigma = std::sqrt(0.1);
            r.trial = t;
            r.iter = it;
            r.param_error = 1.0 / (1.0 + it) + 0.1 * static_cast<double>(t) + 1.0 / 3.0;
            if (it == 2) r.rel_eff_vs_ols = 0.25 * static_cast<double>(t + 1);
            rows.push_back(r);
        }
        TrialResult o;
        o.experiment = "huber-linreg";
        o.method = "ols";
        o.p = 8;
        o.n = 800;
        o.epsilon = 0.1;
        o.sigma = std::sqrt(0.1);
        o.trial = t;
        o.param_error = 3.0 + 0.7 * static_cast<double>(t * t);
        o.rel_eff_vs_ols = 0.0;
        o.runtime_ms = 1.5;
        rows.push_back(o);
    }
    TrialResult l;
    l.experiment = "huber-logistic";
    l.method = "mle-gd";
    l.p = 4;
    l.n = 400;
    l.epsilon = 0.2;
    l.iter = 10;
    l.param_error = 0.9;
    l.zero_one_error = 0.45;
    rows.push_back(l);
    TrialResult h;
    h.experiment = "heavy-linreg";
    h.method = "rgd-gmom";
    h.p = 32;
    h.n = 512;
    h.beta = 3.0;
    h.sigma = 0.75;
    h.iter = 0;
    h.param_error = 5.0;
    rows.push_back(h);
    return rows;
}

}  // namespace

TEST_CASE("results CSV header is exact") {
    std::ostringstream os;
    write_results_csv(os, {});
    CHECK(os.str() ==
          "experiment,method,p,n,epsilon,beta,sigma,trial,iter,param_error,zero_one_error,rel_eff_vs_ols,"
          "runtime_ms\n");
}

TEST_CASE("results CSV round trip") {
    const auto rows = sample_rows();
    std::stringstream ss;
    write_results_csv(ss, rows);
    const std::string text = ss.str();
    const auto back = read_results_csv(ss);
    CHECK(back == rows);

    std::istringstream line_check(text);
    std::string line;
    std::getline(line_check, line);
    std::getline(line_check, line);
    CHECK(line.substr(0, 30) == "huber-linreg,rgd-huber,8,800,0");
    // Closed-form row: empty iter column.
    CHECK(text.find(",ols,8,800,") != std::string::npos);
    CHECK(text.find(",0,,3,") != std::string::npos);

    std::stringstream again;
    write_results_csv(again, back);
    CHECK(again.str() == text);
}

TEST_CASE("results JSON round trip") {
    const auto rows = sample_rows();
    std::stringstream ss;
    write_results_json(ss, rows);
    const auto back = read_results_json(ss);
    CHECK(back == rows);
    std::ostringstream os;
    write_results_json(os, {rows.back()});
    CHECK(os.str().find("\"zero_one_error\": null") != std::string::npos);
}

TEST_CASE("results readers reject malformed input") {
    std::istringstream empty("");
    CHECK_THROWS_AS(read_results_csv(empty), std::runtime_error);
    std::istringstream wrong_header("experiment,method\n");
    CHECK_THROWS_AS(read_results_csv(wrong_header), std::runtime_error);
    std::istringstream short_row(std::string(kResultsHeader) + "\na,b,1\n");
    CHECK_THROWS_AS(read_results_csv(short_row), std::runtime_error);
    std::istringstream bad_p(std::string(kResultsHeader) + "\na,b,x,1,,,,0,,1.0,,,\n");
    CHECK_THROWS_AS(read_results_csv(bad_p), std::runtime_error);

    TrialResult r;
    r.experiment = "bad,name";
    std::ostringstream os;
    CHECK_THROWS_AS(write_results_csv(os, {r}), std::invalid_argument);
}

TEST_CASE("moments examples") {
    const Moments one = moments({2.5});
    CHECK(one.mean == 2.5);
    CHECK(one.stddev == 0.0);
    CHECK(one.count == 1);
    const Moments m = moments({1.0, 2.0, 3.0, 4.0});
    CHECK(m.mean == 2.5);
    CHECK(m.stddev == doctest::Approx(std::sqrt(5.0 / 3.0)));
    CHECK(moments({}).count == 0);
}

TEST_CASE("summarize agrees with an independent recomputation") {
    const auto rows = sample_rows();
    const auto summary = summarize(rows);
    REQUIRE(summary.size() == 4);
    CHECK(summary[0].method == "rgd-huber");
    CHECK(summary[1].method == "ols");
    CHECK(summary[2].method == "mle-gd");
    CHECK(summary[3].method == "rgd-gmom");

    // Recompute the final-iterate statistics by hand.
    std::map<std::string, std::vector<double>> finals, rel;
    for (const auto& r : rows) {
        const bool last = !r.iter || (r.method == "rgd-huber" ? *r.iter == 2 : true);
        if (!last) continue;
        finals[r.method].push_back(r.param_error);
        if (r.rel_eff_vs_ols) rel[r.method].push_back(*r.rel_eff_vs_ols);
    }
    for (const auto& s : summary) {
        INFO(s.method);
        const auto& v = finals[s.method];
        CHECK(s.trials == v.size());
        CHECK(std::abs(s.param_error.mean - oracle::mean(v)) <= 1e-12);
        if (v.size() > 1) CHECK(std::abs(s.param_error.stddev - oracle::sample_stddev(v)) <= 1e-12);
        if (!rel[s.method].empty()) {
            REQUIRE(s.rel_eff_vs_ols);
            CHECK(std::abs(s.rel_eff_vs_ols->mean - oracle::mean(rel[s.method])) <= 1e-12);
        }
    }
    CHECK(summary[2].zero_one_error->mean == 0.45);
    CHECK_FALSE(summary[0].zero_one_error);
    CHECK(summary[3].beta == 3.0);
}

TEST_CASE("summary writers") {
    const auto summary = summarize(sample_rows());
    std::ostringstream table, csv, js;
    write_summary(table, summary, ReportFormat::Table);
    write_summary(csv, summary, ReportFormat::Csv);
    write_summary(js, summary, ReportFormat::Json);
    CHECK(table.str().find("rgd-huber") != std::string::npos);
    CHECK(table.str().find("±") != std::string::npos);
    CHECK(csv.str().substr(0, csv.str().find('\n')) ==
          "experiment,method,p,n,epsilon,beta,sigma,trials,param_error_mean,param_error_stddev,"
          "zero_one_error_mean,zero_one_error_stddev,rel_eff_vs_ols_mean,rel_eff_vs_ols_stddev");
    std::size_t lines = 0;
    for (char c : csv.str()) lines += c == '\n';
    CHECK(lines == 5);
    CHECK(js.str().find("\"trials\": 3") != std::string::npos);
}
