#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using json = nlohmann::json;
using Catch::Approx;

namespace {

struct Run {
    int status;
    std::string out;
};

Run run(const std::string& args, const std::string& tag) {
    const std::string path = std::string(SUSYQM_TEST_TMPDIR) + "/cli_" + tag + ".out";
    const std::string cmd = std::string("\"") + SUSYQM_CLI_PATH + "\" " + args + " > \"" + path + "\" 2>/dev/null";
    const int raw = std::system(cmd.c_str());
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, ss.str()};
}

}  // namespace

TEST_CASE("spectrum of the square well") {
    const auto r = run("spectrum --potential well --L 3.14159265 --n 2000 --levels 5", "spectrum");
    REQUIRE(r.status == 0);
    const auto j = json::parse(r.out);
    const double expected[] = {0.5, 2.0, 4.5, 8.0, 12.5};
    REQUIRE(j["eigenvalues"].size() == 5);
    for (std::size_t m = 0; m < 5; ++m) CHECK(j["eigenvalues"][m].get<double>() == Approx(expected[m]).epsilon(1e-4));
    CHECK(j["grid"]["n"] == 2000);
    CHECK(j["config"]["command"] == "spectrum");
    CHECK(j["residuals"].size() == 5);
}

TEST_CASE("partner report") {
    const auto r = run("partner --potential well --L 3.14159265 --n 4000 --levels 4", "partner");
    REQUIRE(r.status == 0);
    const auto j = json::parse(r.out);
    CHECK(j["degeneracy"].size() == 4);
    for (const auto& e : j["degeneracy"]) CHECK(e["pass"] == true);
    CHECK(j["W"]["x"].size() == 4000);
    CHECK(j["hierarchy"].size() == 3);
    CHECK(j["config"]["potential"]["kind"] == "infinite_well");
    CHECK(j["all_pass"] == true);
}

TEST_CASE("output is byte-identical across runs and thread counts") {
    const std::string args = "partner --potential harmonic --a -8 --b 8 --n 1500 --levels 3";
    const auto a = run(args, "det_a");
    const auto b = run(args, "det_b");
    CHECK(a.out == b.out);
    const auto c = run("spectrum --potential harmonic --n 800 --levels 6", "det_c");
    setenv("SUSY_SPECTRA_THREADS", "3", 1);
    const auto d = run("spectrum --potential harmonic --n 800 --levels 6", "det_d");
    unsetenv("SUSY_SPECTRA_THREADS");
    auto jc = json::parse(c.out);
    auto jd = json::parse(d.out);
    CHECK(jd["config"]["threads"] == 3);
    jc.erase("config");
    jd.erase("config");
    CHECK(jc == jd);
}

TEST_CASE("floats carry 17 significant digits") {
    const auto r = run("spin --az 1 --ax 1", "digits");
    REQUIRE(r.status == 0);
    CHECK(r.out.find("1.4142135623730951") != std::string::npos);
}

TEST_CASE("fock-check exit codes") {
    const auto ok = run("fock-check --bosons 1 --cutoff 4 --fermions 1", "fock1");
    CHECK(ok.status == 0);
    CHECK(json::parse(ok.out)["all_pass"] == true);
    // With several fermion modes {Q+,Q} is not N_B + N_F; the tool must say so.
    const auto multi = run("fock-check --bosons 1 --cutoff 4 --fermions 2", "fock2");
    CHECK(multi.status == 2);
    const auto j = json::parse(multi.out);
    for (const auto& row : j["relations"]) {
        const std::string name = row["relation"];
        if (name == "Q^2 = 0" || name == "Q+^2 = 0") CHECK(row["pass"] == true);
    }
}

TEST_CASE("algebra-check on the block form") {
    const auto r = run("algebra-check --potential well --n 128", "algebra");
    CHECK(r.status == 0);
    CHECK(json::parse(r.out)["relations"].size() == 5);
}

TEST_CASE("csv exports") {
    const auto r = run("partner --n 50 --format csv", "csv_partner");
    REQUIRE(r.status == 0);
    CHECK(r.out.rfind("x,V,Vtilde,W,phi0\n", 0) == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 51);
    const auto s = run("spectrum --n 20 --levels 3 --format csv", "csv_spectrum");
    CHECK(s.out.rfind("x,phi_0,phi_1,phi_2\n", 0) == 0);
}

TEST_CASE("tabulated potential file") {
    const std::string path = std::string(SUSYQM_TEST_TMPDIR) + "/harmonic.csv";
    {
        std::ofstream f(path);
        f << "x,V\n";
        for (int i = 0; i <= 2000; ++i) {
            const double x = -10.0 + 0.01 * i;
            f << x << ',' << 0.5 * x * x << '\n';
        }
    }
    const auto r = run("spectrum --potential file --file \"" + path + "\" --n 2000 --levels 3", "file");
    REQUIRE(r.status == 0);
    const auto j = json::parse(r.out);
    for (std::size_t m = 0; m < 3; ++m) CHECK(j["eigenvalues"][m].get<double>() == Approx(m + 0.5).margin(1e-3));

    const std::string bad = std::string(SUSYQM_TEST_TMPDIR) + "/bad.csv";
    {
        std::ofstream f(bad);
        f << "x,V\n0,1\n1,oops\n";
    }
    const auto e = run("spectrum --potential file --file \"" + bad + "\"", "badfile");
    CHECK(e.status == 1);
    CHECK(json::parse(e.out)["error"]["type"] == "input");
}

TEST_CASE("errors exit with status 1 and a structured object") {
    const auto missing = run("spectrum --potential file --file /nonexistent.csv", "missing");
    CHECK(missing.status == 1);
    CHECK(json::parse(missing.out).contains("error"));
    const auto unknown = run("frobnicate", "unknown");
    CHECK(unknown.status == 1);
    CHECK(json::parse(unknown.out)["error"]["type"] == "usage");
    CHECK(run("spectrum --n 2", "small").status == 1);
    CHECK(run("spin --az 0", "degenerate").status == 1);
    CHECK(run("spin --up-re 2", "unnormalized").status == 1);
    CHECK(run("spectrum --help", "help").status == 0);
}
