#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

std::string cli_path() {
    const char* p = std::getenv("EIGENGRAD_CLI");
    REQUIRE_MESSAGE(p != nullptr, "EIGENGRAD_CLI must point at the binary");
    return p;
}

RunResult run(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe))
        out.append(buf.data(), n);
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

std::string write_config(const std::string& name, const std::string& body) {
    namespace fs = std::filesystem;
    const fs::path p = fs::temp_directory_path() / name;
    std::ofstream(p) << body;
    return p.string();
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("bounds subcommand") {
    const RunResult r = run("bounds --d 1 --K 0 --alpha 0 --lambda 1");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("0.6065306597126334") != std::string::npos);
    CHECK(r.out.find("1.8320806662242257") != std::string::npos);

    const RunResult c = run("bounds --lambda1 1 --d 1 --K 0 --alpha0 0");
    CHECK(c.exit_code == 0);
    CHECK(c.out.find("c1 0.6065306597126334") != std::string::npos);

    // missing --lambda and --lambda1 is a usage error
    CHECK(run("bounds --d 1 --K 0").exit_code == 2);
    // variant/sign mismatch surfaces as invalid input
    CHECK(run("bounds --d 1 --alpha 0.5 --lambda 1 --variant A_star").exit_code == 2);
}

TEST_CASE("fpt subcommand and flag validation") {
    CHECK(run("fpt --eps 0 --t 1").exit_code == 2);
    CHECK(run("fpt --t 1").exit_code == 2); // missing required --eps
    const RunResult r = run("fpt --alpha 0 --eps 1 --t 1 --paths 20000 --seed 42 --dt 0.01");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("exact    0.3173105078629131") != std::string::npos);
    // deterministic for a fixed seed
    const RunResult r2 = run("fpt --alpha 0 --eps 1 --t 1 --paths 20000 --seed 42 --dt 0.01");
    CHECK(r2.out == r.out);
}

TEST_CASE("verify subcommand: exit codes and reproducible outputs") {
    namespace fs = std::filesystem;
    const std::string cfg = write_config("eigengrad_cli_cfg.json", R"({
  "domain": {"kind": "interval", "length": 3.141592653589793, "grid": 1024},
  "bc": "dirichlet",
  "modes": 3
})");
    const fs::path out1 = fs::temp_directory_path() / "eigengrad_cli_out1";
    const fs::path out2 = fs::temp_directory_path() / "eigengrad_cli_out2";
    const RunResult r1 = run("verify --config " + cfg + " --out " + out1.string());
    CHECK(r1.exit_code == 0);
    CHECK(r1.out.find("PASS") != std::string::npos);
    const RunResult r2 = run("verify --config " + cfg + " --out " + out2.string());
    CHECK(r2.exit_code == 0);
    CHECK(slurp(out1 / "report.json") == slurp(out2 / "report.json"));
    CHECK(slurp(out1 / "report.csv") == slurp(out2 / "report.csv"));

    // report re-emission from report.json
    const fs::path out3 = fs::temp_directory_path() / "eigengrad_cli_out3";
    const RunResult r3 =
        run("report --in " + (out1 / "report.json").string() + " --out " + out3.string());
    CHECK(r3.exit_code == 0);
    CHECK(slurp(out3 / "report.json") == slurp(out1 / "report.json"));

    // config error -> 2
    const std::string bad = write_config("eigengrad_cli_bad.json", "{ nope");
    CHECK(run("verify --config " + bad).exit_code == 2);
    CHECK(run("verify --config /does/not/exist.json").exit_code == 2);

    // understated K_V -> numerical failure -> 3
    const std::string kv = write_config("eigengrad_cli_kv.json", R"({
  "domain": {"kind": "interval", "length": 3.141592653589793, "grid": 512},
  "bc": "dirichlet",
  "modes": 1,
  "bounds": {"K_V": -10.0}
})");
    CHECK(run("verify --config " + kv).exit_code == 3);

    // mildly understated K_V still evaluates but the sandwich breaks -> 1
    const std::string kv2 = write_config("eigengrad_cli_kv2.json", R"({
  "domain": {"kind": "interval", "length": 3.141592653589793, "grid": 512},
  "bc": "dirichlet",
  "modes": 1,
  "bounds": {"K_V": -0.9},
  "out": ")" + (fs::temp_directory_path() / "eigengrad_cli_kv2_out").string() + R"("
})");
    const RunResult rv = run("verify --config " + kv2);
    CHECK(rv.exit_code == 1);
    CHECK(rv.out.find("VIOLATION") != std::string::npos);

    fs::remove_all(out1);
    fs::remove_all(out2);
    fs::remove_all(out3);
    fs::remove_all(fs::temp_directory_path() / "eigengrad_cli_kv2_out");
}

TEST_CASE("solve subcommand") {
    const RunResult r = run("solve --domain ball --dim 2 --R 1 --modes 1");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("alpha -0.5") != std::string::npos);
    CHECK(run("solve --domain dodecahedron").exit_code == 2);
}
