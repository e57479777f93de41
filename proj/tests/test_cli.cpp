#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "helpers.hpp"

// End-to-end checks of the installed binary: flag parsing, file products, and
// the exit-code contract (0 ok, 2 input, 3 numeric, 4 cross-validation).

using namespace xyconc;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::filesystem::path test_dir() {
    static const std::filesystem::path dir = [] {
        auto d = std::filesystem::temp_directory_path() /
                 ("xyconc_cli_tests_" + std::to_string(::getpid()));
        std::filesystem::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const std::filesystem::path out = test_dir() / ("stdout_" + std::to_string(counter));
    const std::filesystem::path err = test_dir() / ("stderr_" + std::to_string(counter));
    ++counter;
    const std::string command = std::string(XYCONC_CLI_PATH) + " " + args + " > " +
                                out.string() + " 2> " + err.string();
    const int status = std::system(command.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::string line;
    std::istringstream in(text);
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    return out;
}

}  // namespace

TEST_CASE("help and parse errors follow the exit-code contract") {
    CHECK(run_cli("--help").code == 0);
    CHECK_THAT(run_cli("--help").out, Catch::Matchers::ContainsSubstring("evolve"));
    CHECK(run_cli("").code == 2);
    CHECK(run_cli("evolve --no-such-flag --out /tmp/x.csv").code == 2);
    CHECK(run_cli("frobnicate").code == 2);
}

TEST_CASE("evolve writes the full trajectory CSV and lands on the steady concurrence") {
    const auto csv = test_dir() / "evolve_weak.csv";
    const RunResult r = run_cli(
        "evolve --omega 1 --j 0.1 --delta 0.1 --gamma 0.3 --initial gg --out " + csv.string());
    REQUIRE(r.code == 0);
    CHECK_THAT(r.out, Catch::Matchers::StartsWith("C = "));

    const std::vector<std::string> rows = lines_of(slurp(csv));
    REQUIRE(rows.size() > 100);
    CHECK(rows.front() == trajectory_csv_header());

    const std::vector<std::string> last = split_csv(rows.back());
    REQUIRE(last.size() == 35);
    CHECK(std::stod(last[1]) == Catch::Approx(30.0).margin(0.05));
    CHECK(std::stod(last[2]) == Catch::Approx(0.093093212669039666).margin(1e-4));
}

TEST_CASE("a matrix-file initial state reproduces the named state byte for byte") {
    const auto mat = test_dir() / "gg.mat";
    {
        std::ofstream out(mat);
        out << "# ground state\n";
        write_matrix_file(out, named_initial_state("gg").matrix());
    }
    const auto by_name = test_dir() / "by_name.csv";
    const auto by_file = test_dir() / "by_file.csv";
    const std::string base = "evolve --omega 1 --j 0.1 --delta 0.458 --gamma 0.458 --t-max 5";
    REQUIRE(run_cli(base + " --initial gg --out " + by_name.string()).code == 0);
    REQUIRE(run_cli(base + " --initial " + mat.string() + " --out " + by_file.string()).code == 0);
    CHECK(slurp(by_name) == slurp(by_file));
    CHECK(!slurp(by_name).empty());
}

TEST_CASE("evolve rejects out-of-region parameters unless overridden") {
    const auto csv = test_dir() / "restricted.csv";
    const std::string base =
        "evolve --omega 1 --delta 0.5 --gamma 0.458 --t-max 2 --out " + csv.string();
    const RunResult refused = run_cli(base);
    CHECK(refused.code == 2);
    CHECK_THAT(refused.err, Catch::Matchers::ContainsSubstring("allow-restricted"));
    CHECK(run_cli(base + " --allow-restricted").code == 0);
}

TEST_CASE("evolve input failures exit with code 2") {
    const auto csv = test_dir() / "unused.csv";
    CHECK(run_cli("evolve --initial no_such_state --out " + csv.string()).code == 2);
    CHECK(run_cli("evolve --gamma -1 --out " + csv.string()).code == 2);
    CHECK(run_cli("evolve --dt 10 --out " + csv.string()).code == 2);
    CHECK(run_cli("evolve --out /no/such/dir/out.csv").code == 2);
    CHECK(run_cli("evolve").code == 2);
}

TEST_CASE("an unstable explicit step is a numeric failure, exit 3") {
    const auto csv = test_dir() / "unstable.csv";
    const RunResult r = run_cli(
        "evolve --omega 1 --gamma 0.3 --nbar 200 --dt 0.05 --t-max 5 --out " + csv.string());
    CHECK(r.code == 3);
    CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("numeric error"));
}

TEST_CASE("steady cross-validates three methods below 1e-6") {
    const RunResult r =
        run_cli("steady --omega 1 --j 0.1 --delta 0.458 --gamma 0.458 --method all");
    REQUIRE(r.code == 0);
    const std::vector<std::string> rows = lines_of(r.out);
    REQUIRE(rows.size() == 4);

    const std::vector<std::string> methods = {"analytic", "nullspace", "longtime"};
    for (std::size_t k = 0; k < 3; ++k) {
        const nlohmann::json rec = nlohmann::json::parse(rows[k]);
        CHECK(rec["method"] == methods[k]);
        CHECK(std::abs(rec["c"].get<double>() - 0.28915552212620282) < 1e-6);
        CHECK(rec["residual"].get<double>() < 1e-6);
        CHECK(std::abs(rec["rho22_re"].get<double>() - rec["rho33_re"].get<double>()) < 1e-9);
    }
    const nlohmann::json summary = nlohmann::json::parse(rows[3]);
    CHECK(summary["max_pairwise_deviation"].get<double>() <= 1e-6);
}

TEST_CASE("steady supports single methods, file output, and scaled parameters") {
    const RunResult hot = run_cli("steady --omega 1 --delta 0.1 --gamma 0.3 --nbar 1e6 "
                                  "--method analytic");
    REQUIRE(hot.code == 0);
    const nlohmann::json hot_rec = nlohmann::json::parse(lines_of(hot.out).at(0));
    CHECK(hot_rec["c"].get<double>() == 0.0);
    CHECK(std::abs(hot_rec["rho11_re"].get<double>() - 0.25) < 1e-5);

    const auto path = test_dir() / "steady.jsonl";
    const RunResult to_file = run_cli(
        "steady --omega 1 --delta 0.458 --gamma 0.458 --method nullspace --out " + path.string());
    REQUIRE(to_file.code == 0);
    CHECK(to_file.out.empty());
    const nlohmann::json rec = nlohmann::json::parse(lines_of(slurp(path)).at(0));
    CHECK(rec["method"] == "nullspace");
    CHECK(std::abs(rec["c"].get<double>() - 0.28915552212620282) < 1e-8);

    // Scaled flag: omega/delta are read as omega_bar/delta_bar, gamma forced
    // to 1. These scaled values reproduce the unscaled strong set exactly.
    const RunResult scaled = run_cli(
        "steady --omega 2.1834061135371179 --delta 1 --gamma 7 --scaled --method analytic");
    REQUIRE(scaled.code == 0);
    const nlohmann::json srec = nlohmann::json::parse(lines_of(scaled.out).at(0));
    CHECK(std::abs(srec["c"].get<double>() - 0.28915552212620282) < 1e-14);

    CHECK(run_cli("steady --method bogus").code == 2);
}

TEST_CASE("sweep writes the grid rows with a ridge summary") {
    const auto csv = test_dir() / "sweep.csv";
    const RunResult r =
        run_cli("sweep --grid 0.5:1.5:6,0.1:3:30 --out " + csv.string());
    REQUIRE(r.code == 0);
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("max C = "));

    const std::vector<std::string> rows = lines_of(slurp(csv));
    REQUIRE(rows.size() == 1 + 180 + 6 + 1);
    CHECK(rows.front() == "omega_bar,delta_bar,c");

    double best_seen = 0.0;
    for (std::size_t k = 1; k <= 180; ++k) {
        const std::vector<std::string> fields = split_csv(rows[k]);
        REQUIRE(fields.size() == 3);
        const ModelParams p{std::stod(fields[0]), 0.0, std::stod(fields[1]), 1.0, 0.0};
        const double c = std::stod(fields[2]);
        CHECK(c == Catch::Approx(steady_concurrence_finite_t(p)).margin(1e-15));
        best_seen = std::max(best_seen, c);
    }

    const double delta_step = (3.0 - 0.1) / 29.0;
    for (std::size_t k = 181; k <= 186; ++k) {
        CHECK_THAT(rows[k], Catch::Matchers::StartsWith("# ridge omega_bar="));
        std::istringstream in(rows[k]);
        std::string token;
        double argmax = 0.0, predicted = 0.0;
        while (in >> token) {
            if (token.rfind("argmax_delta_bar=", 0) == 0) argmax = std::stod(token.substr(17));
            if (token.rfind("predicted_delta_bar=", 0) == 0)
                predicted = std::stod(token.substr(20));
        }
        CHECK(std::abs(argmax - predicted) <= delta_step + 1e-12);
    }
    CHECK_THAT(rows[187], Catch::Matchers::StartsWith("# global max c="));
    CHECK_THAT(rows[187],
               Catch::Matchers::ContainsSubstring(xyconc::detail::format_g17(best_seen)));
}

TEST_CASE("a three-axis sweep tracks the thermal death of the steady concurrence") {
    const auto csv = test_dir() / "sweep_thermal.csv";
    const RunResult r = run_cli(
        "sweep --grid 2.1834061135371179:2.2:2,1:1.1:2,0:0.3:31 --out " + csv.string());
    REQUIRE(r.code == 0);

    const std::vector<std::string> rows = lines_of(slurp(csv));
    REQUIRE(rows.size() == 1 + 124);
    CHECK(rows.front() == "omega_bar,delta_bar,nbar,c");
    for (const std::string& row : rows) CHECK(row.rfind("# ", 0) != 0);

    // The first 31 rows hold the strong parameter set: nbar from 0 to 0.3 in
    // steps of 0.01, concurrence non-increasing and dying between 0.17 and 0.18.
    double prev = 1.0;
    for (std::size_t k = 1; k <= 31; ++k) {
        const std::vector<std::string> fields = split_csv(rows[k]);
        REQUIRE(fields.size() == 4);
        CHECK(std::stod(fields[2]) == Catch::Approx(0.01 * (k - 1)).margin(1e-12));
        const double c = std::stod(fields[3]);
        CHECK(c <= prev + 1e-15);
        prev = c;
    }
    CHECK(std::stod(split_csv(rows[18])[3]) > 0.0);
    CHECK(std::stod(split_csv(rows[19])[3]) == 0.0);
}

TEST_CASE("sweep rejects malformed grids") {
    const auto csv = test_dir() / "bad_sweep.csv";
    CHECK(run_cli("sweep --grid 1:2 --out " + csv.string()).code == 2);
    CHECK(run_cli("sweep --grid 1:2:5,0:1:1 --out " + csv.string()).code == 2);
    CHECK(run_cli("sweep --grid 2:1:5,0:1:5 --out " + csv.string()).code == 2);
    CHECK(run_cli("sweep --grid 1:2:5,0:x:5 --out " + csv.string()).code == 2);
    CHECK(run_cli("sweep --grid 1:2:5,0:1:5").code == 2);
}

TEST_CASE("figures writes the thermal dataset with closed-form values") {
    const auto dir = test_dir() / "figs";
    std::filesystem::create_directories(dir);
    const RunResult r = run_cli("figures --which fig4 --outdir " + dir.string());
    REQUIRE(r.code == 0);
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("fig4_thermal.csv"));

    const std::vector<std::string> rows = lines_of(slurp(dir / "fig4_thermal.csv"));
    REQUIRE(rows.size() == 242);
    CHECK(rows.front() == "nbar,c_fig1,c_fig2");

    const std::vector<std::string> first = split_csv(rows[1]);
    CHECK(std::stod(first[0]) == 0.0);
    CHECK(std::stod(first[1]) == Catch::Approx(0.093093212669039666).margin(1e-10));
    CHECK(std::stod(first[2]) == Catch::Approx(0.28915552212620282).margin(1e-10));

    const std::vector<std::string> last = split_csv(rows.back());
    CHECK(std::stod(last[1]) == 0.0);
    CHECK(std::stod(last[2]) == 0.0);

    CHECK(run_cli("figures --which fig9").code == 2);
}
