#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <hilfer/control.hpp>
#include <hilfer/evolution.hpp>
#include <hilfer/special_functions.hpp>
#include <hilfer/spectral_operator.hpp>

#include <json.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace hilfer;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const char* cli_path() {
    const char* p = std::getenv("HILFER_CLI_PATH");
    REQUIRE_MESSAGE(p != nullptr, "HILFER_CLI_PATH must point at the cli binary");
    return p;
}

// fresh working directory per case so reruns never see stale files
fs::path case_dir(const char* name) {
    fs::path d = fs::path("/tmp/hilfer_cli_tests") / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(cli_path()) + " " + args + " >/dev/null 2>/dev/null";
    int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path write_config(const fs::path& dir, const char* name, const json& cfg) {
    fs::path p = dir / name;
    std::ofstream out(p);
    out << cfg.dump(2) << "\n";
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE_MESSAGE(in.good(), p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json base_scenario(const char* task) {
    return json{{"schema_version", 1},
                {"task", task},
                {"operator", {{"kind", "dirichlet_1d"},
                              {"length", 3.141592653589793},
                              {"modes", 2}}},
                {"order", {{"mu", 0.5}, {"nu", 0.5}}},
                {"horizon", 1.0},
                {"grid", {{"kind", "graded_front"}, {"cells", 128}, {"grading", 2.0}}}};
}

} // namespace

TEST_CASE("solve scenario reproduces the library trajectory") {
    auto dir = case_dir("solve");
    json cfg = base_scenario("solve");
    cfg["initial"] = {1.0, 0.0};
    cfg["output"] = {{"dir", dir.string()}, {"prefix", "run"}};
    auto path = write_config(dir, "cfg.json", cfg);
    CHECK(run_cli("run " + path.string() + " --log-level quiet") == 0);

    double terminal = std::numeric_limits<double>::quiet_NaN();
    std::ifstream csv(dir / "run_trajectory.csv");
    REQUIRE(csv.good());
    std::string line;
    std::getline(csv, line);
    CHECK(line == "t,mode_index,coefficient");
    while (std::getline(csv, line)) {
        double t, v;
        int n;
        REQUIRE(std::sscanf(line.c_str(), "%lg,%d,%lg", &t, &n, &v) == 3);
        if (t == 1.0 && n == 0) terminal = v;
    }
    double want = mittag_leffler(0.5, 0.75, -1.0).value;
    CHECK(std::fabs(terminal - want) < 1e-10);

    auto meta = json::parse(slurp(dir / "run_meta.json"));
    CHECK(meta["task"] == "solve");
    CHECK(meta["schema_version"] == 1);
    CHECK(meta["config_hash"].get<std::string>().size() == 16);
    CHECK(meta["results"]["modes"] == 2);
    CHECK(meta["results"]["nodes"] == 129);
}

TEST_CASE("adjoint scenario runs backward from the terminal data") {
    auto dir = case_dir("adjoint");
    json cfg = base_scenario("adjoint");
    cfg["order"] = {{"mu", 0.5}, {"nu", 0.0}};  // eta = 0: regular at t = T
    cfg["terminal"] = {0.0, 1.0};
    cfg["output"] = {{"dir", dir.string()}};
    auto path = write_config(dir, "cfg.json", cfg);
    CHECK(run_cli("run " + path.string() + " --log-level quiet") == 0);

    double at_T = 0.0;
    std::ifstream csv(dir / "adjoint_trajectory.csv");
    REQUIRE(csv.good());
    std::string line;
    std::getline(csv, line);
    while (std::getline(csv, line)) {
        double t, v;
        int n;
        REQUIRE(std::sscanf(line.c_str(), "%lg,%d,%lg", &t, &n, &v) == 3);
        if (t == 1.0 && n == 1) at_T = v;
    }
    CHECK(at_T == 1.0);
}

TEST_CASE("exact control task verifies and exports deterministically") {
    auto dir = case_dir("control_exact");
    json cfg = base_scenario("control-exact");
    cfg["order"] = {{"mu", 1.0}, {"nu", 0.0}};
    cfg["grid"] = {{"kind", "uniform"}, {"cells", 65536}};
    cfg["target"] = {1.0, 0.5};
    cfg["tolerance"] = 1e-9;
    cfg["output"] = {{"dir", dir.string()}};
    auto path = write_config(dir, "cfg.json", cfg);
    CHECK(run_cli("run " + path.string() + " --log-level quiet") == 0);

    auto rep = json::parse(slurp(dir / "control_exact_report.json"));
    CHECK(rep["rel_error"].get<double>() <= 1e-9);
    CHECK(rep["modes"] == 2);
    CHECK(rep["energy"].get<double>() > 0.0);

    std::string csv_first = slurp(dir / "control_exact_control.csv");
    std::string meta_first = slurp(dir / "control_exact_meta.json");
    CHECK(run_cli("run " + path.string() + " --log-level quiet") == 0);
    CHECK(slurp(dir / "control_exact_control.csv") == csv_first);
    CHECK(slurp(dir / "control_exact_meta.json") == meta_first);
}

TEST_CASE("localized control task is thread-count invariant") {
    auto dir = case_dir("control_localized");
    json cfg = base_scenario("control-localized");
    cfg["operator"]["modes"] = 3;
    cfg["grid"] = {{"kind", "steering"}, {"cells", 32}};
    cfg["target"] = {1.0, 0.0, 0.0};
    cfg["window"] = {{"kind", "interval"}, {"lo", 0.3}, {"hi", 0.6}};
    cfg["ridge"] = 1e-10;
    cfg["tolerance"] = 1e-2;
    cfg["output"] = {{"dir", dir.string()}};
    auto path = write_config(dir, "cfg.json", cfg);

    CHECK(run_cli("run " + path.string() + " --log-level quiet --threads 1") == 0);
    std::string one = slurp(dir / "control_localized_control.csv");
    CHECK(run_cli("run " + path.string() + " --log-level quiet --threads 4") == 0);
    CHECK(slurp(dir / "control_localized_control.csv") == one);

    auto meta = json::parse(slurp(dir / "control_localized_meta.json"));
    CHECK(meta["results"]["rel_error"].get<double>() <= 1e-2);
}

TEST_CASE("validation failures exit with code 2") {
    auto dir = case_dir("validation");

    json bad_mu = base_scenario("control-exact");
    bad_mu["order"] = {{"mu", 1.5}, {"nu", 0.0}};
    bad_mu["target"] = {1.0, 0.5};
    CHECK(run_cli("run " + write_config(dir, "bad_mu.json", bad_mu).string()) == 2);

    json unknown = base_scenario("solve");
    unknown["initial"] = {1.0, 0.0};
    unknown["fancy_extras"] = true;
    CHECK(run_cli("run " + write_config(dir, "unknown.json", unknown).string()) == 2);

    json vsn = base_scenario("solve");
    vsn["initial"] = {1.0, 0.0};
    vsn["schema_version"] = 2;
    CHECK(run_cli("run " + write_config(dir, "vsn.json", vsn).string()) == 2);

    json wrong_len = base_scenario("solve");
    wrong_len["initial"] = {1.0};
    CHECK(run_cli("run " + write_config(dir, "len.json", wrong_len).string()) == 2);

    json no_dir = base_scenario("solve");
    no_dir["initial"] = {1.0, 0.0};
    no_dir["output"] = {{"dir", (dir / "does_not_exist").string()}};
    CHECK(run_cli("run " + write_config(dir, "nodir.json", no_dir).string()) == 2);

    json bad_task = base_scenario("frobnicate");
    CHECK(run_cli("run " + write_config(dir, "task.json", bad_task).string()) == 2);

    json graded_uniform = base_scenario("solve");
    graded_uniform["initial"] = {1.0, 0.0};
    graded_uniform["grid"] = {{"kind", "uniform"}, {"cells", 16}, {"grading", 2.0}};
    CHECK(run_cli("run " + write_config(dir, "grid.json", graded_uniform).string()) == 2);

    std::ofstream(dir / "broken.json") << "{ not json";
    CHECK(run_cli("run " + (dir / "broken.json").string()) == 2);
    CHECK(run_cli("run " + (dir / "missing.json").string()) == 2);
    CHECK(run_cli("definitely-not-a-subcommand") == 2);
}

TEST_CASE("tolerance breach exits with code 3 after writing the report") {
    auto dir = case_dir("breach");
    json cfg = base_scenario("control-exact");
    cfg["operator"]["modes"] = 1;
    cfg["grid"] = {{"kind", "steering"}, {"cells", 256}};
    cfg["target"] = {1.0};
    cfg["tolerance"] = 1e-12;
    cfg["output"] = {{"dir", dir.string()}};
    auto path = write_config(dir, "cfg.json", cfg);
    CHECK(run_cli("run " + path.string() + " --log-level quiet") == 3);
    // the report still lands so the breach can be inspected
    auto rep = json::parse(slurp(dir / "control_exact_report.json"));
    CHECK(rep["rel_error"].get<double>() > 1e-12);
    CHECK(rep["rel_error"].get<double>() < 1e-3);
}

TEST_CASE("duality task emits the pairing row and respects the seed") {
    auto dir = case_dir("duality");
    json cfg = base_scenario("duality");
    cfg["operator"]["modes"] = 4;
    cfg["grid"] = {{"kind", "graded_back"}, {"cells", 512}, {"grading", 4.0}};
    cfg["seed"] = 42;
    cfg["tolerance"] = 1e-3;
    cfg["output"] = {{"dir", dir.string()}};
    auto path = write_config(dir, "cfg.json", cfg);
    CHECK(run_cli("run " + path.string() + " --log-level quiet") == 0);

    std::ifstream csv(dir / "duality_duality.csv");
    REQUIRE(csv.good());
    std::string header, row;
    std::getline(csv, header);
    std::getline(csv, row);
    CHECK(header == "lhs,rhs,residual");
    double lhs, rhs, res;
    REQUIRE(std::sscanf(row.c_str(), "%lg,%lg,%lg", &lhs, &rhs, &res) == 3);
    CHECK(std::fabs(std::fabs(lhs - rhs) - res) < 1e-18);
    CHECK(res < 1e-3);

    // same seed, same bytes
    std::string first = slurp(dir / "duality_duality.csv");
    CHECK(run_cli("run " + path.string() + " --log-level quiet") == 0);
    CHECK(slurp(dir / "duality_duality.csv") == first);

    // different seed, different pairing data
    cfg["seed"] = 43;
    auto path2 = write_config(dir, "cfg2.json", cfg);
    CHECK(run_cli("run " + path2.string() + " --log-level quiet") == 0);
    CHECK(slurp(dir / "duality_duality.csv") != first);
}

TEST_CASE("gram task writes the windowed matrix with its floor") {
    auto dir = case_dir("gram");
    json cfg = base_scenario("ucp-gram");
    cfg["operator"]["modes"] = 4;
    cfg["window"] = {{"kind", "interval"}, {"lo", 0.3}, {"hi", 0.6}};
    cfg["output"] = {{"dir", dir.string()}};
    auto path = write_config(dir, "cfg.json", cfg);
    CHECK(run_cli("run " + path.string() + " --log-level quiet") == 0);

    std::ifstream csv(dir / "ucp_gram_gram.csv");
    REQUIRE(csv.good());
    std::string line;
    std::getline(csv, line);
    CHECK(line == "n=4");
    auto op = dirichlet_laplacian_1d(3.141592653589793, 4);
    auto gr = window_gram(op, 0.3, 0.6, 4);
    int rows = 0;
    while (std::getline(csv, line)) {
        double a, b, c, d;
        REQUIRE(std::sscanf(line.c_str(), "%lg,%lg,%lg,%lg", &a, &b, &c, &d) == 4);
        if (rows == 0) CHECK(std::fabs(a - gr.matrix[0]) < 1e-15);
        ++rows;
    }
    CHECK(rows == 4);

    auto meta = json::parse(slurp(dir / "ucp_gram_meta.json"));
    CHECK(meta["results"]["min_eigenvalue"].get<double>() == gr.min_eigenvalue);
    CHECK(meta["results"]["eigenvalues"].size() == 4);
}

TEST_CASE("selftest runs as subcommand and as scenario task") {
    CHECK(run_cli("selftest") == 0);

    auto dir = case_dir("selftest_task");
    json cfg{{"schema_version", 1},
             {"task", "selftest"},
             {"output", {{"dir", dir.string()}}}};
    auto path = write_config(dir, "cfg.json", cfg);
    CHECK(run_cli("run " + path.string() + " --log-level quiet") == 0);
    auto meta = json::parse(slurp(dir / "selftest_meta.json"));
    CHECK(meta["results"]["failures"] == 0);
    CHECK(meta["results"]["checks"].get<int>() >= 10);
    std::string log = slurp(dir / "selftest_selftest.txt");
    CHECK(log.find("FAIL") == std::string::npos);
}

TEST_CASE("out flag overrides the configured directory") {
    auto dir = case_dir("outflag");
    fs::path alt = dir / "alt";
    fs::create_directories(alt);
    json cfg = base_scenario("solve");
    cfg["initial"] = {1.0, 0.0};
    cfg["output"] = {{"dir", dir.string()}, {"prefix", "p"}};
    auto path = write_config(dir, "cfg.json", cfg);
    CHECK(run_cli("run " + path.string() + " --log-level quiet --out " + alt.string())
          == 0);
    CHECK(fs::exists(alt / "p_trajectory.csv"));
    CHECK(!fs::exists(dir / "p_trajectory.csv"));
}
