#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "robustgd/bench.hpp"

using namespace robustgd;

namespace {

ExperimentConfig small_config(const std::string& toml) {
    return ExperimentConfig::from_config(Config::parse(toml));
}

const char* kSmallLinear = R"(experiment = "huber-linreg"
methods = ["rgd-huber", "ols", "ridge"]
trials = 3
seed = 5
[grid]
p = [4, 6]
epsilon = [0.1, 0.2]
[design]
max_n = 600
[rgd]
iters = 5
[run]
threads = 1
)";

std::string csv_of(const std::vector<TrialResult>& rows) {
    std::ostringstream os;
    write_results_csv(os, rows);
    return os.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("robustgd_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("from_config reads every section") {
    const auto e = small_config(R"(experiment = "huber-logistic"
methods = ["rgd-huber", "mle-gd"]
trials = 7
seed = 99
[grid]
p = 16
[design]
max_n = 1000
test_n = 500
logistic_radius = 10.0
[rgd]
iters = 30
step_size = 2.5
delta = 0.05
split_samples = true
[selection]
eps_grid = [0.1]
mc_samples = 100
[output]
full_trace = false
record_runtime = true
)");
    CHECK(e.experiment == ExperimentKind::HuberLogistic);
    CHECK(e.methods == std::vector<std::string>{"rgd-huber", "mle-gd"});
    CHECK(e.trials == 7);
    CHECK(e.seed == 99);
    CHECK(e.grid_p == std::vector<double>{16});
    CHECK(e.max_n == 1000);
    CHECK(e.test_n == 500);
    CHECK(e.logistic_radius == 10.0);
    CHECK(e.iters == 30);
    CHECK(e.step_size == 2.5);
    CHECK(e.delta == 0.05);
    CHECK(e.split_samples);
    CHECK(e.eps_grid == std::vector<double>{0.1});
    CHECK(e.delta_grid.size() == 5);
    CHECK(e.mc_samples == 100);
    CHECK_FALSE(e.full_trace);
    CHECK(e.record_runtime);
}

TEST_CASE("from_config rejects bad configs") {
    CHECK_THROWS_WITH_AS(small_config("experiment = \"huber-linreg\"\nmethod = [\"ols\"]\n"),
                         doctest::Contains("unknown config key 'method'"), std::invalid_argument);
    CHECK_THROWS_AS(small_config("methods = [\"ols\"]\n"), std::invalid_argument);
    CHECK_THROWS_AS(small_config("experiment = \"nope\"\n"), std::invalid_argument);
    CHECK_THROWS_AS(small_config("experiment = \"huber-linreg\"\n[rgd]\ndelta = 1.5\n"), std::invalid_argument);
    CHECK_THROWS_AS(small_config("experiment = \"huber-linreg\"\n[grid]\np = [2.5]\n"), std::invalid_argument);
    CHECK_THROWS_AS(small_config("experiment = \"heavy-linreg\"\n[grid]\nbeta = [2.0]\n"), std::invalid_argument);
}

TEST_CASE("unknown or unsupported methods are rejected before anything runs") {
    auto e = small_config(kSmallLinear);
    e.methods = {"ols", "no-such-method"};
    CHECK_THROWS_WITH_AS(run_experiment(e), doctest::Contains("unknown method 'no-such-method'"),
                         std::invalid_argument);
    e.methods = {"mle-gd"};
    CHECK_THROWS_AS(run_experiment(e), std::invalid_argument);
    e.methods.clear();
    CHECK_THROWS_AS(run_experiment(e), std::invalid_argument);
}

TEST_CASE("grid is the cartesian product in p, epsilon, beta, sigma, n order") {
    auto e = small_config(kSmallLinear);
    e.grid_sigma = {0.5, 1.0};
    const auto g = e.grid();
    REQUIRE(g.size() == 8);
    CHECK(g[0].p == 4);
    CHECK(g[0].epsilon == 0.1);
    CHECK(g[0].sigma == 0.5);
    CHECK(g[1].sigma == 1.0);
    CHECK(g[2].epsilon == 0.2);
    CHECK(g[4].p == 6);
    CHECK_FALSE(g[0].beta);
    CHECK_FALSE(g[0].n);

    const auto d = small_config("experiment = \"heavy-linreg\"\n").grid();
    REQUIRE(d.size() == 1);
    CHECK(d[0].p == 32);
}

TEST_CASE("generated problems follow the grid point") {
    auto e = small_config(kSmallLinear);
    e.max_n = 5000;
    const auto g = e.grid();
    const auto prob = generate_problem(e, g[0], 1);
    CHECK(prob.train.size() == 4000);  // 10 * 4 / 0.1^2
    CHECK(prob.n == 4000);
    CHECK(prob.epsilon == 0.1);
    const auto capped = generate_problem(e, g[2], 1);
    CHECK(capped.train.size() == 5000);

    const auto l = small_config("experiment = \"huber-logistic\"\n[grid]\np = 3\nn = 200\n[design]\ntest_n = 50\n");
    const auto lp = generate_problem(l, l.grid()[0], 2);
    CHECK(lp.train.size() == 200);
    REQUIRE(lp.test);
    CHECK(lp.test->size() == 50);

    const auto h = small_config("experiment = \"heavy-linreg\"\n[grid]\np = 4\n");
    const auto hp = generate_problem(h, h.grid()[0], 3);
    CHECK(hp.train.size() == 512);
    CHECK(hp.beta == 3.0);
    CHECK(hp.sigma == 0.75);
}

TEST_CASE("row accounting") {
    const auto e = small_config(kSmallLinear);
    const auto rows = run_experiment(e);
    const auto grid = e.grid();

    // Rows come grouped by (grid point, trial, method).
    std::size_t i = 0;
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        for (std::uint64_t t = 0; t < 3; ++t) {
            for (const auto& m : e.methods) {
                INFO("grid ", gi, " trial ", t, " method ", m);
                REQUIRE(i < rows.size());
                const bool iterative = m == "rgd-huber";
                int expect_iter = 0;
                while (i < rows.size() && rows[i].method == m && rows[i].trial == t &&
                       rows[i].p == grid[gi].p && rows[i].epsilon == grid[gi].epsilon) {
                    const auto& r = rows[i];
                    CHECK(r.experiment == "huber-linreg");
                    if (iterative) {
                        REQUIRE(r.iter);
                        CHECK(*r.iter == expect_iter);
                    } else {
                        CHECK_FALSE(r.iter);
                    }
                    const bool last = i + 1 == rows.size() || rows[i + 1].method != m || rows[i + 1].trial != t;
                    CHECK(r.rel_eff_vs_ols.has_value() == last);
                    CHECK_FALSE(r.runtime_ms);
                    CHECK_FALSE(r.zero_one_error);
                    ++expect_iter;
                    ++i;
                }
                if (iterative) {
                    CHECK(expect_iter >= 2);
                    CHECK(expect_iter <= e.iters + 1);
                } else {
                    CHECK(expect_iter == 1);
                }
            }
        }
    }
    CHECK(i == rows.size());
    for (const auto& r : rows)
        if (r.method == "ols") CHECK(r.rel_eff_vs_ols == 0.0);
}

TEST_CASE("final-only traces, runtime and zero-one columns") {
    auto e = small_config(kSmallLinear);
    e.full_trace = false;
    e.record_runtime = true;
    e.grid_p = {4};
    e.grid_epsilon = {0.1};
    const auto rows = run_experiment(e);
    CHECK(rows.size() == 9);
    for (const auto& r : rows) {
        CHECK(r.runtime_ms);
        CHECK(r.rel_eff_vs_ols);
    }

    const auto l = small_config(R"(experiment = "huber-logistic"
methods = ["rgd-huber", "mle-gd"]
trials = 1
[grid]
p = 3
n = 300
[design]
test_n = 200
[rgd]
iters = 3
)");
    const auto lrows = run_experiment(l);
    CHECK(lrows.size() >= 4);
    for (const auto& r : lrows) {
        REQUIRE(r.zero_one_error);
        CHECK(*r.zero_one_error >= 0.0);
        CHECK(*r.zero_one_error <= 1.0);
        CHECK_FALSE(r.rel_eff_vs_ols);
    }
}

TEST_CASE("results are byte-identical across reruns and thread counts") {
    auto e = small_config(kSmallLinear);
    const std::string one = csv_of(run_experiment(e));
    CHECK(csv_of(run_experiment(e)) == one);
    e.threads = 3;
    CHECK(csv_of(run_experiment(e)) == one);
    e.seed = 6;
    CHECK(csv_of(run_experiment(e)) != one);
}

TEST_CASE("adding a method leaves the other methods' rows unchanged") {
    auto e = small_config(kSmallLinear);
    e.methods = {"rgd-huber", "ols"};
    const auto base = run_experiment(e);
    e.methods = {"torrent", "rgd-huber", "ols-gd", "ols"};
    const auto more = run_experiment(e);
    std::vector<TrialResult> filtered;
    for (const auto& r : more)
        if (r.method == "rgd-huber" || r.method == "ols") filtered.push_back(r);
    CHECK(csv_of(filtered) == csv_of(base));
}

TEST_CASE("write_results_file writes atomically") {
    const auto dir = scratch_dir("bench");
    const std::vector<TrialResult> rows(2, TrialResult{"huber-linreg", "ols", 2, 10});

    const auto path = (dir / "r.csv").string();
    write_results_file(path, rows, OutputFormat::Csv);
    std::ifstream in(path);
    CHECK(read_results_csv(in) == rows);
    CHECK_FALSE(std::filesystem::exists(path + ".partial"));

    const auto jpath = (dir / "r.json").string();
    write_results_file(jpath, rows, OutputFormat::Json);
    std::ifstream jin(jpath);
    CHECK(read_results_json(jin) == rows);

    // Unwritable target directory.
    const auto missing = (dir / "absent" / "r.csv").string();
    CHECK_THROWS_AS(write_results_file(missing, rows, OutputFormat::Csv), std::runtime_error);
    CHECK_FALSE(std::filesystem::exists(missing));
    CHECK_FALSE(std::filesystem::exists(missing + ".partial"));

    // A row that cannot be serialised fails mid-write; no partial file remains.
    auto bad = rows;
    bad.push_back(TrialResult{"bad,name", "ols", 2, 10});
    const auto bpath = (dir / "bad.csv").string();
    CHECK_THROWS(write_results_file(bpath, bad, OutputFormat::Csv));
    CHECK_FALSE(std::filesystem::exists(bpath));
    CHECK_FALSE(std::filesystem::exists(bpath + ".partial"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("run_selection scans the epsilon grid and marks exactly one candidate") {
    auto e = small_config(R"(experiment = "huber-linreg"
seed = 3
[grid]
p = 4
epsilon = 0.1
[rgd]
iters = 10
[selection]
eps_grid = [0.05, 0.1, 0.2]
delta_grid = [0.1, 0.01]
mc_samples = 200
)");
    for (const std::string sel : {"tournament", "holdout"}) {
        const auto entries = run_selection(e, sel);
        REQUIRE(entries.size() == 3);
        CHECK(entries[1].epsilon == 0.1);
        int selected = 0;
        for (const auto& s : entries) {
            selected += s.selected;
            CHECK(s.param_error >= 0.0);
        }
        CHECK(selected == 1);
        const auto again = run_selection(e, sel);
        for (std::size_t i = 0; i < entries.size(); ++i) CHECK(again[i].selected == entries[i].selected);
    }
    CHECK_THROWS_AS(run_selection(e, "coin"), std::invalid_argument);
}

TEST_CASE("non-robust gradient baselines stay finite on contaminated data") {
    auto e = small_config(R"(experiment = "huber-linreg"
methods = ["ols-gd", "rgd-gmom", "ols"]
trials = 2
[grid]
p = 8
epsilon = 0.1
[design]
max_n = 2000
[rgd]
iters = 200
[output]
full_trace = false
)");
    const auto rows = run_experiment(e);
    REQUIRE(rows.size() == 6);
    for (const auto& r : rows) CHECK(std::isfinite(r.param_error));
    // Plain GD on least squares converges to the OLS fit.
    CHECK(rows[0].param_error == doctest::Approx(rows[2].param_error).epsilon(1e-3));

    e.step_size = 1.0;
    e.methods = {"ols-gd"};
    CHECK_THROWS_WITH_AS(run_experiment(e), "divergence", std::runtime_error);
}

TEST_CASE("shipped configs parse and validate") {
    int seen = 0;
    for (const auto& entry : std::filesystem::directory_iterator(ROBUSTGD_CONFIG_DIR)) {
        if (entry.path().extension() != ".toml") continue;
        INFO(entry.path().string());
        const auto e = ExperimentConfig::from_config(Config::load(entry.path().string()));
        CHECK_NOTHROW(e.validate());
        ++seen;
    }
    CHECK(seen >= 5);
}
