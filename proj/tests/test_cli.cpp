#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Run {
    int status;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(SOCIOPRED_CLI) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe);
    std::string out;
    char buf[4096];
    while (std::size_t got = fread(buf, 1, sizeof buf, pipe)) out.append(buf, got);
    const int raw = pclose(pipe);
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::path("cli_scratch") / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("oracle prints fast and naive match lengths") {
    const auto dir = scratch("oracle");
    write(dir / "aab.txt", "a a b\n");
    auto r = run("oracle " + (dir / "aab.txt").string());
    CHECK(r.status == 0);
    CHECK(r.out == "i,fast,naive,status\n1,1,1,ok\n2,2,2,ok\n3,1,1,ok\n");

    write(dir / "const.txt", "x\nx\nx\nx\nx\nx\nx\nx\n");
    r = run("oracle " + (dir / "const.txt").string());
    CHECK(r.status == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    std::vector<std::string> fast;
    while (std::getline(lines, line)) fast.push_back(line.substr(line.find(',') + 1, line.find(',', line.find(',') + 1) - line.find(',') - 1));
    CHECK(fast == std::vector<std::string>{"1", "8", "7", "6", "5", "4", "3", "2"});

    r = run("oracle --inject-fault " + (dir / "aab.txt").string());
    CHECK(r.status == 3);
    CHECK(r.out.find("MISMATCH") != std::string::npos);

    write(dir / "empty.txt", "\n");
    CHECK(run("oracle " + (dir / "empty.txt").string()).status == 1);
    CHECK(run("oracle " + (dir / "missing.txt").string()).status == 1);
}

TEST_CASE("simulate is deterministic and names distinct egos") {
    const auto dir = scratch("simulate");
    const auto a = dir / "a.csv";
    const auto b = dir / "b.csv";
    REQUIRE(run("simulate --stay 0.9 --population 1 --bins 100000 --seed 7 -o " + a.string()).status == 0);
    REQUIRE(run("simulate --stay 0.9 --population 1 --bins 100000 --seed 7 -o " + b.string()).status == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).rfind("time,ego,alter,location\n", 0) == 0);

    const auto many = run("simulate --population 10 --bins 5 --seed 1");
    REQUIRE(many.status == 0);
    std::set<std::string> egos;
    std::istringstream lines(many.out);
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) egos.insert(line.substr(line.find(',') + 1, line.find(',', line.find(',') + 1) - line.find(',') - 1));
    CHECK(egos.size() == 10);

    CHECK(run("simulate --matrix '0.5,0.4;0.5,0.5'").status == 1);
    CHECK(run("simulate --matrix '0.5,x;0.5,0.5'").status == 1);
    CHECK(run("simulate --matrix '1,0,0;0,1'").status == 1);
}

TEST_CASE("simulate then analyze recovers the chain's entropy rate") {
    const auto dir = scratch("analyze");
    const auto log = dir / "log.csv";
    REQUIRE(run("simulate --stay 0.9 --bins 100000 --seed 7 --locations 2 -o " + log.string()).status == 0);
    REQUIRE(run("analyze " + log.string() + " --out " + (dir / "r1").string()).status == 0);
    REQUIRE(run("analyze " + log.string() + " --workers 2 --out " + (dir / "r2").string()).status == 0);
    const auto text = slurp(dir / "r1" / "report.json");
    CHECK(text == slurp(dir / "r2" / "report.json"));

    const auto j = nlohmann::json::parse(text);
    const double h = j["individuals"][0]["partner"]["h_lz"];
    CHECK(std::abs(h - 0.468996) <= 0.05);
    CHECK(j["individuals"][0].contains("location"));

    REQUIRE(run("analyze " + log.string() + " --format csv --out " + (dir / "csv").string()).status == 0);
    for (const char* f : {"individuals.csv", "excluded.csv", "summary.csv", "histograms.csv"})
        CHECK(fs::exists(dir / "csv" / f));
}

TEST_CASE("analyze error paths and filters") {
    const auto dir = scratch("analyze_errors");
    write(dir / "bad.csv", "time,ego,alter,location\nx,A,B,\n");
    CHECK(run("analyze " + (dir / "bad.csv").string()).status == 1);
    CHECK(run("analyze " + (dir / "nope.csv").string()).status == 1);
    CHECK(run("analyze " + (dir / "bad.csv").string() + " --format xml").status != 0);

    write(dir / "short.csv", "time,ego,alter,location\n0,A,B,\n300,A,C,\n");
    const auto r = run("analyze " + (dir / "short.csv").string());
    CHECK(r.status == 2);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["individuals"].empty());
    CHECK(j["excluded"][0]["ego"] == "A");

    std::ostringstream noloc;
    noloc << "time,ego,alter,location\n";
    for (int i = 0; i < 80; ++i) noloc << i * 300 << ",A," << (i % 3 ? "B" : "C") << ",\n";
    write(dir / "noloc.csv", noloc.str());
    const auto ok = run("analyze " + (dir / "noloc.csv").string());
    CHECK(ok.status == 0);
    const auto k = nlohmann::json::parse(ok.out);
    CHECK_FALSE(k["individuals"][0].contains("location"));
}

TEST_CASE("predict") {
    const auto dir = scratch("predict");
    const auto log = dir / "cycle.csv";
    // 3 weeks of a deterministic alternation
    REQUIRE(run("simulate --matrix '0,1;1,0' --bins 6048 -o " + log.string()).status == 0);
    auto r = run("predict " + log.string() + " --out " + (dir / "out").string() + " --dump-models");
    REQUIRE(r.status == 0);
    const auto j = nlohmann::json::parse(slurp(dir / "out" / "predictions.json"));
    CHECK(j["overall"]["accuracy"]["top1"] == 1.0);
    CHECK(j["individuals"][0]["windows"].size() == 2);
    const auto edges = slurp(dir / "out" / "models" / "u0000.edges.csv");
    // row order follows first appearance, which depends on the random start state
    CHECK(edges.rfind("source,target,probability\n", 0) == 0);
    CHECK(edges.find("p0,p1,1\n") != std::string::npos);
    CHECK(edges.find("p1,p0,1\n") != std::string::npos);
    CHECK(std::count(edges.begin(), edges.end(), '\n') == 3);

    write(dir / "empty.csv", "time,ego,alter,location\n");
    r = run("predict " + (dir / "empty.csv").string());
    CHECK(r.status == 0);
    CHECK(nlohmann::json::parse(r.out)["individuals"].empty());

    r = run("predict " + log.string() + " --top-k 1,3 --format csv");
    CHECK(r.status == 0);
    CHECK(r.out.rfind("ego,evaluated,top1_hits,top1_accuracy,top3_hits,top3_accuracy\n", 0) == 0);
    CHECK(run("predict " + log.string() + " --top-k 5,1").status == 1);
    r = run("predict " + log.string() + " --no-bridge");
    CHECK(r.status == 0);
    CHECK(nlohmann::json::parse(r.out)["config"]["bridge"] == false);
}
