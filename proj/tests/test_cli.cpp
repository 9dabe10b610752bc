#include "doctest.h"

#include "cli.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace faberlab::cli;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("faberlab_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

int run_cli(std::vector<std::string> args, std::string* err_text = nullptr)
{
    std::ostringstream out, err;
    const int code = run(args, out, err);
    if (err_text)
        *err_text = err.str();
    return code;
}

std::string slurp(const fs::path& file)
{
    std::ifstream in(file, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& file)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(file));
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("#", 0) == 0)
            continue;
        std::vector<std::string> fields;
        std::string field;
        bool quoted = false;
        for (char c : line) {
            if (c == '"')
                quoted = !quoted;
            else if (c == ',' && !quoted) {
                fields.push_back(field);
                field.clear();
            } else
                field += c;
        }
        fields.push_back(field);
        rows.push_back(fields);
    }
    return rows;
}

} // namespace

TEST_CASE("lens-exact: single row and identity counts")
{
    const fs::path dir = fresh_dir("lens0");
    REQUIRE(run_cli({"lens-exact", "--n-max", "0", "--out", dir.string()}) == exit_ok);
    const auto rows = read_csv(dir / "sequences.csv");
    REQUIRE(rows.size() == 2);
    CHECK(rows[1][0] == "0");
    CHECK(rows[1][3] == "(1/4)*pi+(-1/2)");
    CHECK(slurp(dir / "sequences.csv").rfind("# precision_bits=256\n", 0) == 0);

    const fs::path dir100 = fresh_dir("lens100");
    REQUIRE(run_cli({"lens-exact", "--n-max", "100", "--out", dir100.string()}) == exit_ok);
    CHECK(read_csv(dir100 / "sequences.csv").size() == 102);
    const auto checks = nlohmann::json::parse(slurp(dir100 / "checks.json"));
    bool found = false;
    for (const auto& t : checks["identities"])
        if (t["name"] == "sum a_{2j}^2 = (2k+1) a_{2k} b_{2k}") {
            found = true;
            CHECK(t["passed"] == 101);
            CHECK(t["checked"] == 101);
        }
    CHECK(found);
    CHECK(checks["ok"] == true);
    const auto& even = checks["even_relation"];
    CHECK(even["printed"]["N0_predicted"] == "(1/2)*pi+(-2/1)");
    CHECK(even["printed"]["N0_predicted_negative"] == true);
    CHECK(even["corrected"]["holds_for_all"] == true);
    CHECK(even["N_max"] == 1000);
    CHECK(even["green_oracle"]["agrees_with_corrected_not_printed"] == true);
}

TEST_CASE("lens-exact: exact cap falls back to audited floats")
{
    const fs::path dir = fresh_dir("lenscap");
    REQUIRE(run_cli({"lens-exact", "--n-max", "20", "--exact-max", "10", "--out", dir.string()}) == exit_ok);
    const auto rows = read_csv(dir / "sequences.csv");
    REQUIRE(rows.size() == 22);
    CHECK(!rows[11][3].empty());
    CHECK(rows[12][3].empty());
    CHECK(!rows[12][4].empty());
}

TEST_CASE("usage errors exit with the config code")
{
    const fs::path dir = fresh_dir("usage");
    std::string err;
    CHECK(run_cli({}) == exit_config);
    CHECK(run_cli({"lens-exact", "--bogus", "1"}, &err) == exit_config);
    CHECK(!err.empty());
    CHECK(run_cli({"lens-exact", "--n-max", "-1"}) == exit_config);
    CHECK(run_cli({"lens-exact", "--n-max", "ten"}) == exit_config);
    CHECK(run_cli({"lens-exact", "--precision-bits", "0"}) == exit_config);
    CHECK(run_cli({"lens-exact", "--tol", "0"}) == exit_config);
    CHECK(run_cli({"lens-exact", "--curve", "lens"}) == exit_config);
    CHECK(run_cli({"sweep", "--format", "xml"}) == exit_config);
    CHECK(run_cli({"frobnicate"}) == exit_config);
    CHECK(run_cli({"verify", "--curve", (dir / "missing.json").string()}) == exit_config);
    CHECK(run_cli({"verify", "--curve", "lens", "--curve", "circle"}) == exit_config);
    CHECK(run_cli({"sweep", "--limit-n-max", "5"}) == exit_config);
    CHECK(exit_config != exit_identity);
    CHECK(exit_config != exit_tolerance);
    CHECK(exit_identity != exit_tolerance);

    fs::create_directories(dir);
    std::ofstream(dir / "bad.toml") << "[verify]\nn-max = 3\ncolour = \"red\"\n";
    CHECK(run_cli({"--config", (dir / "bad.toml").string(), "verify"}) == exit_config);
    std::ofstream(dir / "good.toml") << "[verify]\nn-max = 2\ncurve = \"circle\"\n";
    CHECK(run_cli({"--config", (dir / "good.toml").string(), "verify", "--out", dir.string()}) == exit_ok);
    CHECK(read_csv(dir / "verify.csv").size() == 3);
    CHECK(run_cli({"--help"}) == exit_ok);
}

TEST_CASE("verify: lens rows, circle zeros, unsupported curves")
{
    const fs::path dir = fresh_dir("verify");
    REQUIRE(run_cli({"verify", "--n-max", "6", "--out", dir.string()}) == exit_ok);
    const auto rows = read_csv(dir / "verify.csv");
    REQUIRE(rows.size() == 7);
    CHECK(rows[0] == std::vector<std::string>{"n", "exact", "exact_float", "numeric", "abs_diff", "error_estimate",
                                              "converged", "pass"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i][6] == "1");
        CHECK(rows[i][7] == "1");
        CHECK(std::stod(rows[i][4]) <= 1e-9);
    }
    CHECK(rows[1][1] == "(1/4)*pi+(-1/2)");

    const fs::path circle = fresh_dir("verify_circle");
    REQUIRE(run_cli({"verify", "--curve", "circle", "--out", circle.string()}) == exit_ok);
    for (const auto& row : read_csv(circle / "verify.csv"))
        if (row[0] != "n")
            CHECK(std::stod(row[3]) == 0.0);

    CHECK(run_cli({"verify", "--curve", FABERLAB_CURVE_DIR "/perturbed_circle.json", "--out", dir.string()}) ==
          exit_config);
}

TEST_CASE("verify: tolerance below the precision floor is flagged")
{
    const fs::path dir = fresh_dir("verify64");
    CHECK(run_cli({"verify", "--n-max", "1", "--precision-bits", "64", "--tol", "1e-30", "--out", dir.string()}) ==
          exit_tolerance);
    const auto rows = read_csv(dir / "verify.csv");
    REQUIRE(rows.size() == 2);
    CHECK(rows[1][6] == "0");
    CHECK(rows[1][7] == "0");
}

TEST_CASE("alpha: disk is identically zero, lens meets its lower bound")
{
    const fs::path disk = fresh_dir("alpha_disk");
    REQUIRE(run_cli({"alpha", "--curve", "circle", "--n-max", "20", "--out", disk.string()}) == exit_ok);
    const auto rows = read_csv(disk / "alpha.csv");
    REQUIRE(rows.size() == 22);
    CHECK(rows[0] == std::vector<std::string>{"n", "lambda_n", "alpha_n", "n*alpha_n", "lower_bound",
                                              "decomposition_residual", "alpha_error", "bound_satisfied"});
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(std::abs(std::stod(rows[i][2])) <= 1e-10);

    const fs::path lens = fresh_dir("alpha_lens");
    REQUIRE(run_cli({"alpha", "--n-max", "10", "--decomposition-max", "4", "--out", lens.string(), "--format", "json"}) == exit_ok);
    CHECK(!fs::exists(lens / "alpha.csv"));
    const auto doc = nlohmann::json::parse(slurp(lens / "alpha.json"));
    CHECK(doc["precision_bits"] == 256);
    REQUIRE(doc["rows"].size() == 11);
    for (const auto& row : doc["rows"]) {
        CHECK(row["bound_satisfied"] == "1");
        CHECK(std::stod(row["alpha_n"].get<std::string>()) >= std::stod(row["lower_bound"].get<std::string>()) - 1e-8);
        CHECK(row["decomposition_residual"].get<std::string>().empty() == (std::stoi(row["n"].get<std::string>()) > 4));
    }
}

TEST_CASE("sweep: two classified reports and plot files")
{
    const fs::path dir = fresh_dir("sweep");
    REQUIRE(run_cli({"sweep", "--curve", "lens", "--curve", FABERLAB_CURVE_DIR "/circle.json", "--limit-n-max", "100",
                     "--out", dir.string()}) == exit_ok);
    const auto summary = nlohmann::json::parse(slurp(dir / "sweep_summary.json"));
    REQUIRE(summary["curves"].size() == 2);
    CHECK(summary["curves"][0]["classification"] == "bounded-away-from-zero");
    CHECK(summary["curves"][1]["classification"] == "decaying-to-zero");
    CHECK(summary["lens_limit"]["N_max"] == 100);
    CHECK(fs::exists(dir / "data" / "lens.dat"));
    CHECK(fs::exists(dir / "data" / "circle.dat"));
    CHECK(fs::exists(dir / "data" / "lens_limit.dat"));
    CHECK(read_csv(dir / "sweep.csv").size() == 1 + 2 * 33);
    CHECK(run_cli({"sweep", "--curve", "lens", "--curve", "lens"}) == exit_config);
}

TEST_CASE("identical configurations give identical bytes")
{
    const fs::path a = fresh_dir("det_a"), b = fresh_dir("det_b");
    for (const fs::path& dir : {a, b}) {
        REQUIRE(run_cli({"lens-exact", "--n-max", "30", "--out", dir.string(), "--format", "csv", "--format", "json"}) ==
                exit_ok);
        REQUIRE(run_cli({"sweep", "--n-max", "16", "--limit-n-max", "50", "--out", dir.string(), "--format", "json"}) ==
                exit_ok);
    }
    for (const auto& entry : fs::recursive_directory_iterator(a)) {
        if (!entry.is_regular_file())
            continue;
        const fs::path other = b / fs::relative(entry.path(), a);
        REQUIRE(fs::exists(other));
        CHECK_MESSAGE(slurp(entry.path()) == slurp(other), entry.path().string());
    }
}
