// Drives the nlsh binary end to end. NLSH_BIN is set by the build.

#include <doctest.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out;
};

const fs::path& workdir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("nlsh_test_cli_" + std::to_string(::getpid()));
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

Result run(const std::string& args) {
    const std::string cmd = "cd '" + workdir().string() + "' && SH2D_OUT='" + (workdir() / "runs").string() + "' '" +
                            NLSH_BIN + "' " + args + " 2>&1";
    Result r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
    const int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string run_dir_of(const std::string& out) {
    std::smatch m;
    REQUIRE(std::regex_search(out, m, std::regex("run_dir=(\\S+)")));
    return m[1];
}

void write(const std::string& name, const std::string& text) { std::ofstream(workdir() / name) << text; }

const char* kSmall = "[model]\nmu = 0.4\n[grid]\nnx = 32\nny = 32\nlx = 8pi\nly = 8pi\n[stepper]\nt_end = 25\n"
                     "[ic]\namplitude = 2\n";

}  // namespace

TEST_CASE("theory table") {
    const Result r = run("theory --mu 0.4 --a 3 --b 1 --C 1");
    CHECK(r.code == 0);
    CHECK(r.out.find("bound_nonlocal") != std::string::npos);
    CHECK(r.out.find("2.549193") != std::string::npos);
    CHECK(r.out.find("1.632456") != std::string::npos);
    CHECK(r.out.find("0.632456") != std::string::npos);
    CHECK(run("theory --mu 0.4 --a 1 --b 2").code == 2);
}

TEST_CASE("simulate then verify-bounds") {
    write("small.ini", kSmall);
    const Result sim = run("simulate -c small.ini");
    REQUIRE(sim.code == 0);
    const std::string dir = run_dir_of(sim.out);
    for (const char* f : {"config.ini", "series.csv", "final.sh2d", "bounds.txt", "bounds.json", "manifest.json"}) {
        CHECK(fs::exists(fs::path(dir) / f));
    }
    std::ifstream series(fs::path(dir) / "series.csv");
    std::string header;
    std::getline(series, header);
    CHECK(header == "t,l2,grad_l2,lap_l2");

    const Result ver = run("verify-bounds --run '" + dir + "'");
    CHECK(ver.code == 0);
    CHECK(ver.out.find("bound=lemma1_envelope status=satisfied") != std::string::npos);
    CHECK(ver.out.find("worst_margin=") != std::string::npos);

    // The echoed config reproduces the run.
    const Result again = run("simulate -c '" + dir + "/config.ini'");
    std::ifstream m1(fs::path(dir) / "manifest.json"), m2(fs::path(run_dir_of(again.out)) / "manifest.json");
    CHECK(nlohmann::json::parse(m1)["outputs_hash"] == nlohmann::json::parse(m2)["outputs_hash"]);
}

TEST_CASE("verify-bounds exits nonzero on a violation") {
    write("small.ini", kSmall);
    const std::string dir = run_dir_of(run("simulate -c small.ini").out);
    // Claiming a larger kernel floor makes the Lemma 1 envelope too tight.
    const Result r = run("verify-bounds --run '" + dir + "' --set 'model.kernel=gaussian_floor b=3 a=3 sigma=2'");
    CHECK(r.code == 1);
    CHECK(r.out.find("VIOLATED") != std::string::npos);
}

TEST_CASE("configuration errors exit with code 2 and a location") {
    write("bad.ini", "[model]\nmu = 0.4\n[grid]\nbc = clamped\n[stepper]\nscheme = ETDRK4\n");
    const Result r = run("simulate -c bad.ini");
    CHECK(r.code == 2);
    CHECK(r.out.find("config:6") != std::string::npos);
    CHECK(r.out.find("grid.bc") != std::string::npos);
    write("typo.ini", "[model]\nmu = 0.4\nkernal = constant g=1\n");
    CHECK(run("simulate -c typo.ini").out.find("config:3: key 'model.kernal'") != std::string::npos);
    CHECK(run("lyapunov --mu -0.2").code == 2);
}

TEST_CASE("bench-nonlocal writes a csv with every size and strategy") {
    const Result r = run("bench-nonlocal --sizes 8,16,32 --repeats 5");
    REQUIRE(r.code == 0);
    const fs::path csv = fs::path(run_dir_of(r.out)) / "bench.csv";
    std::ifstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "strategy,n,median_ns,max_dev");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 3 * 4);
    CHECK(r.out.find("slope") != std::string::npos);
}

TEST_CASE("lyapunov subcommand") {
    write("small.ini", kSmall);
    const Result r = run("lyapunov -c small.ini --set analysis.lyapunov_m=4 --set analysis.lyapunov_time=5 "
                         "--set analysis.lyapunov_transient=5");
    REQUIRE(r.code == 0);
    std::ifstream in(fs::path(run_dir_of(r.out)) / "lyapunov.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,lambda_1,lambda_2,lambda_3,lambda_4,trace");
}

TEST_CASE("campaign runs every config in disjoint directories") {
    write("c1.ini", kSmall);
    std::string c2 = kSmall;
    c2.replace(c2.find("mu = 0.4"), 8, "mu = 0.2");
    write("c2.ini", c2);
    const Result r = run("campaign c1.ini c2.ini small.ini -j 2 --command verify-bounds");
    CHECK(r.code == 0);
    std::ifstream in(fs::path(run_dir_of(r.out)) / "campaign.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "config,status,run_dir,outputs_hash");
    std::set<std::string> dirs;
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(line.find(",ok,") != std::string::npos);
        dirs.insert(line.substr(line.find(",ok,") + 4));
    }
    CHECK(rows == 3);
    CHECK(dirs.size() == 3);
}
