#include "robustgd/results_io.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "robustgd/dataset_io.hpp"

namespace robustgd {

namespace {

using nlohmann::json;

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::optional<double> opt_double(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return parse_double(s);
}

template <class T>
T parse_integer(const std::string& s, const char* what) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        throw std::runtime_error(std::string("invalid ") + what + " '" + s + "'");
    }
    if (used != s.size()) throw std::runtime_error(std::string("invalid ") + what + " '" + s + "'");
    return static_cast<T>(v);
}

void check_name(const std::string& s) {
    if (s.find_first_of(",\n\r") != std::string::npos) {
        throw std::invalid_argument("names in results files may not contain commas or newlines");
    }
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> json_opt(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

using GroupKey = std::tuple<std::string, std::string, Index, std::size_t, std::optional<double>,
                            std::optional<double>, std::optional<double>>;

GroupKey group_key(const TrialResult& r) {
    return {r.experiment, r.method, r.p, r.n, r.epsilon, r.beta, r.sigma};
}

std::string moment_cell(const std::optional<Moments>& m) {
    if (!m) return "-";
    std::ostringstream os;
    os << std::setprecision(6) << m->mean << " ± " << m->stddev;
    return os.str();
}

}  // namespace

void write_results_csv(std::ostream& out, const std::vector<TrialResult>& rows) {
    out << kResultsHeader << '\n';
    for (const auto& r : rows) {
        check_name(r.experiment);
        check_name(r.method);
        out << r.experiment << ',' << r.method << ',' << r.p << ',' << r.n << ',' << opt(r.epsilon) << ','
            << opt(r.beta) << ',' << opt(r.sigma) << ',' << r.trial << ','
            << (r.iter ? std::to_string(*r.iter) : std::string()) << ',' << format_double(r.param_error)
            << ',' << opt(r.zero_one_error) << ',' << opt(r.rel_eff_vs_ols) << ',' << opt(r.runtime_ms)
            << '\n';
    }
}

std::vector<TrialResult> read_results_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("results file is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kResultsHeader) throw std::runtime_error("results file header does not match");

    std::vector<TrialResult> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_fields(line);
        if (f.size() != 13) {
            throw std::runtime_error("results line " + std::to_string(line_no) + " has " +
                                     std::to_string(f.size()) + " fields");
        }
        TrialResult r;
        r.experiment = f[0];
        r.method = f[1];
        r.p = parse_integer<Index>(f[2], "p");
        r.n = parse_integer<std::size_t>(f[3], "n");
        r.epsilon = opt_double(f[4]);
        r.beta = opt_double(f[5]);
        r.sigma = opt_double(f[6]);
        r.trial = static_cast<std::uint64_t>(parse_integer<long long>(f[7], "trial"));
        if (!f[8].empty()) r.iter = parse_integer<int>(f[8], "iter");
        r.param_error = parse_double(f[9]);
        r.zero_one_error = opt_double(f[10]);
        r.rel_eff_vs_ols = opt_double(f[11]);
        r.runtime_ms = opt_double(f[12]);
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_results_json(std::ostream& out, const std::vector<TrialResult>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back({{"experiment", r.experiment},
                       {"method", r.method},
                       {"p", r.p},
                       {"n", r.n},
                       {"epsilon", opt_json(r.epsilon)},
                       {"beta", opt_json(r.beta)},
                       {"sigma", opt_json(r.sigma)},
                       {"trial", r.trial},
                       {"iter", r.iter ? json(*r.iter) : json(nullptr)},
                       {"param_error", r.param_error},
                       {"zero_one_error", opt_json(r.zero_one_error)},
                       {"rel_eff_vs_ols", opt_json(r.rel_eff_vs_ols)},
                       {"runtime_ms", opt_json(r.runtime_ms)}});
    }
    out << arr.dump(1) << '\n';
}

std::vector<TrialResult> read_results_json(std::istream& in) {
    const json arr = json::parse(in);
    if (!arr.is_array()) throw std::runtime_error("results JSON must be an array");
    std::vector<TrialResult> rows;
    for (const auto& j : arr) {
        TrialResult r;
        r.experiment = j.at("experiment").get<std::string>();
        r.method = j.at("method").get<std::string>();
        r.p = j.at("p").get<Index>();
        r.n = j.at("n").get<std::size_t>();
        r.epsilon = json_opt(j, "epsilon");
        r.beta = json_opt(j, "beta");
        r.sigma = json_opt(j, "sigma");
        r.trial = j.at("trial").get<std::uint64_t>();
        if (!j.at("iter").is_null()) r.iter = j.at("iter").get<int>();
        r.param_error = j.at("param_error").get<double>();
        r.zero_one_error = json_opt(j, "zero_one_error");
        r.rel_eff_vs_ols = json_opt(j, "rel_eff_vs_ols");
        r.runtime_ms = json_opt(j, "runtime_ms");
        rows.push_back(std::move(r));
    }
    return rows;
}

Moments moments(const std::vector<double>& values) {
    Moments m;
    m.count = values.size();
    if (values.empty()) return m;
    double sum = 0.0;
    for (double v : values) sum += v;
    m.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - m.mean) * (v - m.mean);
        m.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return m;
}

std::vector<SummaryRow> summarize(const std::vector<TrialResult>& rows) {
    // Final row per (group, trial).
    std::vector<GroupKey> order;
    std::map<GroupKey, std::map<std::uint64_t, const TrialResult*>> finals;
    for (const auto& r : rows) {
        const GroupKey key = group_key(r);
        auto [it, inserted] = finals.try_emplace(key);
        if (inserted) order.push_back(key);
        const TrialResult*& slot = it->second[r.trial];
        const int iter = r.iter.value_or(-1);
        if (slot == nullptr || iter >= slot->iter.value_or(-1)) slot = &r;
    }

    std::vector<SummaryRow> out;
    for (const auto& key : order) {
        const auto& trials = finals.at(key);
        const TrialResult& first = *trials.begin()->second;
        SummaryRow s;
        s.experiment = first.experiment;
        s.method = first.method;
        s.p = first.p;
        s.n = first.n;
        s.epsilon = first.epsilon;
        s.beta = first.beta;
        s.sigma = first.sigma;
        s.trials = trials.size();

        std::vector<double> errs, zo, re;
        for (const auto& [_, r] : trials) {
            errs.push_back(r->param_error);
            if (r->zero_one_error) zo.push_back(*r->zero_one_error);
            if (r->rel_eff_vs_ols) re.push_back(*r->rel_eff_vs_ols);
        }
        s.param_error = moments(errs);
        if (!zo.empty()) s.zero_one_error = moments(zo);
        if (!re.empty()) s.rel_eff_vs_ols = moments(re);
        out.push_back(std::move(s));
    }
    return out;
}

void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows, ReportFormat format) {
    const auto cell = [](const std::optional<Moments>& m, bool stddev) {
        if (!m) return std::string();
        return format_double(stddev ? m->stddev : m->mean);
    };
    switch (format) {
        case ReportFormat::Csv: {
            out << "experiment,method,p,n,epsilon,beta,sigma,trials,param_error_mean,param_error_stddev,"
                   "zero_one_error_mean,zero_one_error_stddev,rel_eff_vs_ols_mean,rel_eff_vs_ols_stddev\n";
            for (const auto& s : rows) {
                out << s.experiment << ',' << s.method << ',' << s.p << ',' << s.n << ',' << opt(s.epsilon)
                    << ',' << opt(s.beta) << ',' << opt(s.sigma) << ',' << s.trials << ','
                    << format_double(s.param_error.mean) << ',' << format_double(s.param_error.stddev) << ','
                    << cell(s.zero_one_error, false) << ',' << cell(s.zero_one_error, true) << ','
                    << cell(s.rel_eff_vs_ols, false) << ',' << cell(s.rel_eff_vs_ols, true) << '\n';
            }
            return;
        }
        case ReportFormat::Json: {
            json arr = json::array();
            const auto mj = [](const std::optional<Moments>& m) {
                return m ? json{{"mean", m->mean}, {"stddev", m->stddev}} : json(nullptr);
            };
            for (const auto& s : rows) {
                arr.push_back({{"experiment", s.experiment},
                               {"method", s.method},
                               {"p", s.p},
                               {"n", s.n},
                               {"epsilon", opt_json(s.epsilon)},
                               {"beta", opt_json(s.beta)},
                               {"sigma", opt_json(s.sigma)},
                               {"trials", s.trials},
                               {"param_error", mj(s.param_error)},
                               {"zero_one_error", mj(s.zero_one_error)},
                               {"rel_eff_vs_ols", mj(s.rel_eff_vs_ols)}});
            }
            out << arr.dump(1) << '\n';
            return;
        }
        case ReportFormat::Table: {
            out << "# values are mean ± stddev (sample standard deviation over trials)\n";
            out << std::left << std::setw(16) << "experiment" << std::setw(14) << "method" << std::setw(6) << "p"
                << std::setw(8) << "n" << std::setw(9) << "epsilon" << std::setw(7) << "beta" << std::setw(10)
                << "sigma" << std::setw(7) << "trials" << std::setw(26) << "param_error" << std::setw(26)
                << "zero_one_error"
                << "rel_eff_vs_ols\n";
            const auto o = [](const std::optional<double>& v) {
                if (!v) return std::string("-");
                std::ostringstream os;
                os << std::setprecision(4) << *v;
                return os.str();
            };
            for (const auto& s : rows) {
                out << std::left << std::setw(16) << s.experiment << std::setw(14) << s.method << std::setw(6)
                    << s.p << std::setw(8) << s.n << std::setw(9) << o(s.epsilon) << std::setw(7) << o(s.beta)
                    << std::setw(10) << o(s.sigma) << std::setw(7) << s.trials << std::setw(26)
                    << moment_cell(s.param_error) << std::setw(26) << moment_cell(s.zero_one_error)
                    << moment_cell(s.rel_eff_vs_ols) << '\n';
            }
            return;
        }
    }
}

}  // namespace robustgd
