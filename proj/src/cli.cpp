#include "robustgd/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "robustgd/bench.hpp"
#include "robustgd/datagen.hpp"
#include "robustgd/dataset_io.hpp"

namespace robustgd {

namespace {

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format;
    std::string selector;
    std::string input;
};

ExperimentConfig load_experiment(const Options& o) {
    ExperimentConfig cfg = ExperimentConfig::from_config(Config::load(o.config));
    if (o.seed) cfg.seed = *o.seed;
    return cfg;
}

std::vector<TrialResult> load_results(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    in >> std::ws;
    if (in.peek() == '[') return read_results_json(in);
    return read_results_csv(in);
}

// Writes to --out when given, else to `out`.
template <class Fn>
void emit(const std::string& path, std::ostream& out, Fn&& fn) {
    if (path.empty()) {
        fn(out);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open " + path + " for writing");
    fn(file);
    if (!file) throw std::runtime_error("failed writing " + path);
}

int cmd_generate(const Options& o, std::ostream& out) {
    const ExperimentConfig cfg = load_experiment(o);
    // Same stream run_experiment uses for grid point 0, trial 0.
    const GeneratedProblem problem = generate_problem(cfg, cfg.grid().front(), trial_seed(cfg.seed, 0, 0));
    write_dataset_csv(o.out, problem.train);
    out << "wrote " << problem.train.size() << " observations (p = " << problem.train.dim() << ") to " << o.out
        << '\n';
    return 0;
}

int cmd_run(const Options& o, std::ostream& out) {
    const ExperimentConfig cfg = load_experiment(o);
    const auto rows = run_experiment(cfg);
    write_results_file(o.out, rows, o.format == "json" ? OutputFormat::Json : OutputFormat::Csv);
    out << "wrote " << rows.size() << " rows to " << o.out << '\n';
    return 0;
}

int cmd_select(const Options& o, std::ostream& out) {
    const ExperimentConfig cfg = load_experiment(o);
    std::string selector = o.selector;
    if (selector.empty()) selector = cfg.experiment == ExperimentKind::HeavyLinReg ? "holdout" : "tournament";
    const auto entries = run_selection(cfg, selector);
    emit(o.out, out, [&](std::ostream& os) {
        if (o.format == "json") {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& e : entries) {
                arr.push_back({{"epsilon", e.epsilon},
                               {"delta", e.delta},
                               {"param_error", e.param_error},
                               {"selected", e.selected}});
            }
            os << arr.dump(1) << '\n';
            return;
        }
        os << "selector,epsilon,delta,param_error,selected\n";
        for (const auto& e : entries) {
            os << selector << ',' << format_double(e.epsilon) << ',' << format_double(e.delta) << ','
               << format_double(e.param_error) << ',' << (e.selected ? 1 : 0) << '\n';
        }
    });
    return 0;
}

int cmd_report(const Options& o, std::ostream& out) {
    const auto summary = summarize(load_results(o.input));
    ReportFormat fmt = ReportFormat::Table;
    if (o.format == "csv") fmt = ReportFormat::Csv;
    if (o.format == "json") fmt = ReportFormat::Json;
    emit(o.out, out, [&](std::ostream& os) { write_summary(os, summary, fmt); });
    return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Robust gradient descent estimators and benchmark harness", "robustgd"};
    app.require_subcommand(1);
    Options o;

    const auto add_seed = [&](CLI::App* sub) {
        sub->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& s) { o.seed = s; },
                                                "Override the config's global seed");
    };
    const std::vector<std::string> data_formats{"csv", "json"};

    auto* generate = app.add_subcommand("generate", "Write a dataset CSV from a design config");
    generate->add_option("--config", o.config, "Design/experiment config file")->required()->check(CLI::ExistingFile);
    generate->add_option("--out", o.out, "Output dataset CSV")->required();
    add_seed(generate);

    auto* run = app.add_subcommand("run", "Run an experiment config and write a results file");
    run->add_option("--config", o.config, "Experiment config file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", o.out, "Results file")->required();
    run->add_option("--format", o.format, "csv or json")->check(CLI::IsMember(data_formats));
    add_seed(run);

    auto* select = app.add_subcommand("select", "Pick hyperparameters over a grid by tournament or holdout risk");
    select->add_option("--config", o.config, "Experiment config file")->required()->check(CLI::ExistingFile);
    select->add_option("--selector", o.selector, "tournament or holdout")
        ->check(CLI::IsMember({"tournament", "holdout"}));
    select->add_option("--out", o.out, "Output file (default stdout)");
    select->add_option("--format", o.format, "csv or json")->check(CLI::IsMember(data_formats));
    add_seed(select);

    auto* report = app.add_subcommand("report", "Aggregate a results file into mean/stddev per method and grid point");
    report->add_option("results", o.input, "Results CSV or JSON")->required()->check(CLI::ExistingFile);
    report->add_option("--out", o.out, "Output file (default stdout)");
    report->add_option("--format", o.format, "table, csv or json")
        ->check(CLI::IsMember({"table", "csv", "json"}));

    if (args.empty()) {
        err << app.help();
        return 1;
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        if (generate->parsed()) return cmd_generate(o, out);
        if (run->parsed()) return cmd_run(o, out);
        if (select->parsed()) return cmd_select(o, out);
        if (report->parsed()) return cmd_report(o, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    err << app.help();
    return 1;
}

}  // namespace robustgd
