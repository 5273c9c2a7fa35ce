#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

// Drives the installed binary end to end; LHARQ_CLI_BIN is injected by the
// build.

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(LHARQ_CLI_BIN) + " " + args + " 2>/dev/null";
    RunResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.out.append(buf.data(), got);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

struct CsvRow {
    std::string scheme;
    double rate, eta, e_reward, e_duration, f1, ci, avg_snr_db;
    int rounds;
};

std::vector<CsvRow> parse_rows(const std::string& text) {
    std::vector<CsvRow> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("scheme,", 0) == 0) continue;
        std::istringstream fields(line);
        CsvRow r;
        std::string tok;
        std::getline(fields, r.scheme, ',');
        std::getline(fields, tok, ',');
        r.rate = std::stod(tok);
        std::getline(fields, tok, ',');
        r.rounds = std::stoi(tok);
        std::getline(fields, tok, ',');
        r.avg_snr_db = std::stod(tok);
        std::getline(fields, tok, ',');
        r.eta = std::stod(tok);
        std::getline(fields, tok, ',');
        r.e_reward = std::stod(tok);
        std::getline(fields, tok, ',');
        r.e_duration = std::stod(tok);
        std::getline(fields, tok, ',');
        r.f1 = std::stod(tok);
        std::getline(fields, tok, ',');
        r.ci = std::stod(tok);
        rows.push_back(r);
    }
    return rows;
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("bogus-subcommand").exit_code == 2);
    CHECK(run_cli("optimize --rate 3.75 --k 1 --avg-snr-db 15").exit_code == 2);
    CHECK(run_cli("optimize --rate 3.75 --avg-snr-db 15").exit_code == 2);  // missing --k
    CHECK(run_cli("sweep-snr --schemes \"\" --rate 3.75 --k 2").exit_code == 2);
    CHECK(run_cli("sweep-snr --schemes ir,warp --rate 3.75 --k 2").exit_code == 2);
    CHECK(run_cli("simulate --scheme lharq --rate 3.75 --k 3 --avg-snr-db 15").exit_code == 2);
    CHECK(run_cli("optimize --rate 3.75 --k 2 --avg-snr-db 15 --decay nope").exit_code == 2);
}

TEST_CASE("missing input files exit with code 3") {
    CHECK(run_cli("optimize --per-table missing.csv --k 2 --avg-snr-db 15").exit_code == 3);
    CHECK(run_cli("simulate --scheme lharq --avg-snr-db 15 --rate 3.75 --policy nope.json")
              .exit_code == 3);
    CHECK(run_cli("show-policy nope.json").exit_code == 3);
}

TEST_CASE("version and help") {
    const auto v = run_cli("--version");
    CHECK(v.exit_code == 0);
    CHECK(v.out.find("lharq") != std::string::npos);
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("optimize is reproducible byte for byte") {
    const auto p1 = temp_path("cli_policy_a.json");
    const auto p2 = temp_path("cli_policy_b.json");
    const std::string base =
        "optimize --scheme lharq --rate 3.75 --k 2 --avg-snr-db 15 --tr 8 "
        "--snr-nodes 64 --bank-nodes 16 -o ";
    const auto r1 = run_cli(base + p1.string());
    const auto r2 = run_cli(base + p2.string());
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r2.exit_code == 0);
    CHECK(slurp(p1) == slurp(p2));
    CHECK(!slurp(p1).empty());

    // Identical summary rows apart from the echoed output path.
    CHECK(parse_rows(r1.out).at(0).eta == parse_rows(r2.out).at(0).eta);
}

TEST_CASE("simulate: determinism and policy consistency checks") {
    const auto policy = temp_path("cli_policy_sim.json");
    REQUIRE(run_cli("optimize --scheme lharq --rate 3.75 --k 3 --avg-snr-db 15 --tr 8 "
                    "--snr-nodes 64 --bank-nodes 16 -o " +
                    policy.string())
                .exit_code == 0);

    const std::string sim = "simulate --scheme lharq --rate 3.75 --avg-snr-db 15 --policy " +
                            policy.string() + " --cycles 20000 --seed 9";
    const auto a = run_cli(sim);
    const auto b = run_cli(sim);
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    const auto row = parse_rows(a.out).at(0);
    CHECK(row.rounds == 3);  // picked up from the policy file
    CHECK(row.eta > 0.0);
    CHECK(row.ci > 0.0);

    // Conflicting --k is a validation failure.
    CHECK(run_cli(sim + " --k 4").exit_code == 4);
    // Scheme mismatch with the policy file.
    CHECK(run_cli("simulate --scheme an --rate 3.75 --avg-snr-db 15 --policy " +
                  policy.string() + " --cycles 1000")
              .exit_code == 4);
}

TEST_CASE("sweep-snr: single-round ir column equals rate (1 - f1)") {
    const auto r = run_cli(
        "sweep-snr --schemes ir --rate 3.75 --k 1 --snr-db-start 10 --snr-db-stop 14 "
        "--snr-db-step 2 --snr-nodes 128");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_rows(r.out);
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) {
        CHECK(row.eta == doctest::Approx(3.75 * (1.0 - row.f1)).epsilon(1e-12));
        CHECK(row.e_duration == doctest::Approx(1.0));
    }
}

TEST_CASE("sweep-snr: more rounds never hurt the optimized throughput") {
    const std::string common =
        " --rate 3.75 --snr-db-start 12 --snr-db-stop 18 --snr-db-step 3 "
        "--tr 8 --snr-nodes 96 --bank-nodes 24 --schemes lharq";
    const auto k2 = run_cli("sweep-snr --k 2" + common);
    const auto k4 = run_cli("sweep-snr --k 4" + common);
    REQUIRE(k2.exit_code == 0);
    REQUIRE(k4.exit_code == 0);
    const auto rows2 = parse_rows(k2.out);
    const auto rows4 = parse_rows(k4.out);
    REQUIRE(rows2.size() == rows4.size());
    for (std::size_t i = 0; i < rows2.size(); ++i)
        CHECK(rows4[i].eta >= rows2[i].eta - 1e-6);
}

TEST_CASE("sweep-epsilon: argmax bookkeeping and single-point identity") {
    const auto single = run_cli(
        "sweep-epsilon --rate 3.75 --k 2 --avg-snr-db 15 --tr 8 --snr-nodes 64 "
        "--epsilons 0.1");
    REQUIRE(single.exit_code == 0);
    CHECK(single.out.find("0.1,") != std::string::npos);
    CHECK(single.out.find(",1\n") != std::string::npos);  // its own argmax

    const auto sweep = run_cli(
        "sweep-epsilon --rate 3.75 --k 2 --avg-snr-db 15 --tr 8 --snr-nodes 64 "
        "--epsilons 0.01,0.1,0.45");
    REQUIRE(sweep.exit_code == 0);
    // Exactly one best row.
    std::size_t best_count = 0;
    std::istringstream in(sweep.out);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#' && line.rfind("epsilon", 0) != 0 &&
            line.size() > 2 && line.substr(line.size() - 2) == ",1")
            ++best_count;
    CHECK(best_count == 1);
}

TEST_CASE("gen-table round trips through optimize") {
    const auto table = temp_path("cli_table.csv");
    const auto r = run_cli("gen-table --rate 3.75 --tr 8 --snr-db-min -5 --snr-db-max 25 "
                           "--snr-db-step 0.5 -o " +
                           table.string());
    REQUIRE(r.exit_code == 0);
    const std::string text = slurp(table);
    CHECK(text.find("# rate_R=3.75") != std::string::npos);
    CHECK(text.find("snr_db,rho,prob") != std::string::npos);

    const auto policy = temp_path("cli_policy_tab.json");
    const auto opt = run_cli("optimize --per-table " + table.string() +
                             " --k 2 --avg-snr-db 15 --tr 8 --snr-nodes 64 --bank-nodes 16 -o " +
                             policy.string());
    REQUIRE(opt.exit_code == 0);
    const auto row = parse_rows(opt.out).at(0);
    CHECK(row.rate == doctest::Approx(3.75));
    CHECK(row.eta > 0.0);

    CHECK(run_cli("show-policy " + policy.string()).exit_code == 0);
}

TEST_CASE("output directory env var applies to relative paths") {
    const auto dir = temp_path("cli_outdir");
    std::filesystem::create_directories(dir);
    const std::string cmd = "LHARQ_OUT_DIR=" + dir.string() + " " + LHARQ_CLI_BIN +
                            " gen-table --rate 2.25 --tr 4 --snr-db-min 0 --snr-db-max 5 "
                            "--snr-db-step 1 -o env_table.csv 2>/dev/null";
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(std::filesystem::exists(dir / "env_table.csv"));
}
