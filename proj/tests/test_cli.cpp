#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "aporbit/cli.hpp"
#include "aporbit/io.hpp"

namespace fs = std::filesystem;
using aporbit::io::json;

namespace {

struct Scratch {
    fs::path dir;
    explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / name) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    std::string path(const std::string& f) const { return (dir / f).string(); }
    void put(const std::string& f, const std::string& text) const { std::ofstream(dir / f) << text; }
};

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = aporbit::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("run writes the orbit, chain and trig artifacts") {
    Scratch s("aporbit_cli_run");
    s.put("ar.json", R"({"d": 2, "kind": "ar", "p": [0, -1]})");
    const auto r = cli({"run", "--map", s.path("ar.json"), "--y0", "1,0", "--K", "4", "--horizon", "100",
                        "--out", s.path("o")});
    REQUIRE(r.code == 0);
    for (const char* f : {"orbit.csv", "chain.json", "trig.json"}) CHECK(fs::exists(s.dir / "o" / f));
    const json chain = json::parse(slurp(s.dir / "o" / "chain.json"));
    CHECK(chain["schema_version"] == 1);
    CHECK(chain["L"] == 4);
    CHECK(chain["T"] == 0);
    CHECK(chain["config"]["K"] == 4);
    const json trig = json::parse(slurp(s.dir / "o" / "trig.json"));
    CHECK(trig["M"] == 2);

    // A second run into the same directory needs --force.
    const auto again = cli({"run", "--map", s.path("ar.json"), "--y0", "1,0", "--K", "4", "--out", s.path("o")});
    CHECK(again.code == 3);
    CHECK(cli({"--force", "run", "--map", s.path("ar.json"), "--y0", "1,0", "--K", "4", "--out", s.path("o")}).code == 0);
}

TEST_CASE("exit codes") {
    Scratch s("aporbit_cli_codes");
    CHECK(cli({"run", "--map", s.path("missing.json"), "--y0", "0", "--K", "4", "--out", s.path("o")}).code == 3);
    CHECK(cli({"run", "--ar", "0.5", "--y0", "0", "--K", "0", "--out", s.path("o")}).code == 3);
    CHECK(cli({"run", "--ar", "0.5", "--y0", "2", "--K", "4", "--out", s.path("o")}).code == 3);
    CHECK(cli({"frobnicate"}).code == 3);
    CHECK(cli({"--help"}).code == 0);

    const auto esc = cli({"run", "--ar", "2", "--y0", "1", "--K", "4", "--out", s.path("e")});
    CHECK(esc.code == 2);
    CHECK(esc.err.find("t=1") != std::string::npos);

    CHECK(cli({"validate-map", "--expr", "2*x1", "--out", s.path("v")}).code == 2);
    CHECK(cli({"validate-map", "--expr", "0.5*x1", "--out", s.path("w")}).code == 0);
}

TEST_CASE("verify, ladder and ar commands") {
    Scratch s("aporbit_cli_cmds");
    s.put("ar1.json", R"({"d": 1, "kind": "ar", "p": [0.5]})");
    const auto v = cli({"verify", "--map", s.path("ar1.json"), "--y0", "0.8", "--K", "8", "--horizon", "50",
                        "--out", s.path("v")});
    REQUIRE(v.code == 0);
    const json bound = json::parse(slurp(s.dir / "v" / "bound.json"));
    CHECK(bound["pass"] == true);
    CHECK(fs::exists(s.dir / "v" / "bound.csv"));

    const auto l = cli({"ladder", "--ar", "0,-1", "--y0", "1,0", "--Ks", "2,4,8", "--budget", "1e6",
                        "--out", s.path("l")});
    REQUIRE(l.code == 0);
    const json ladder = json::parse(slurp(s.dir / "l" / "ladder.json"));
    CHECK(ladder["schema_version"] == 1);
    CHECK(cli({"ladder", "--ar", "0.5", "--y0", "0.5", "--Ks", "8,4", "--out", s.path("l2")}).code == 3);

    s.put("ar2.json", R"({"p": [0, -1], "z0": [1, 0]})");
    const auto a = cli({"ar", "--spec", s.path("ar2.json"), "--horizon", "200", "--out", s.path("a")});
    REQUIRE(a.code == 0);
    const json dec = json::parse(slurp(s.dir / "a" / "decomposition.json"));
    CHECK(dec["classification"] == "bounded");
    CHECK(dec["roots"].size() == 2);
    for (const auto& r : dec["roots"]) {
        CHECK(std::abs(r["re"].get<double>()) < 1e-12);
        CHECK(std::abs(std::abs(r["im"].get<double>()) - 1.0) < 1e-12);
    }
    CHECK(fs::exists(s.dir / "a" / "ar_curve.csv"));

    s.put("bad.json", R"({"p": [2, -1], "z0": [0.5, 0]})");
    CHECK(cli({"ar", "--spec", s.path("bad.json"), "--out", s.path("b")}).code == 2);
    CHECK(json::parse(slurp(s.dir / "b" / "decomposition.json"))["refused"] == true);
}

TEST_CASE("census output is bit-identical across runs") {
    Scratch s("aporbit_cli_census");
    for (const char* o : {"c1", "c2"}) {
        REQUIRE(cli({"census", "--d", "2", "--K", "3", "--n", "200", "--seed", "7", "--out", s.path(o)}).code == 0);
    }
    CHECK(slurp(s.dir / "c1" / "census.csv") == slurp(s.dir / "c2" / "census.csv"));
    const json a = json::parse(slurp(s.dir / "c1" / "census.json"));
    json b = json::parse(slurp(s.dir / "c2" / "census.json"));
    b["config"]["out"] = a["config"]["out"];
    CHECK(a == b);
    CHECK(cli({"--json-only", "census", "--d", "2", "--K", "3", "--n", "5", "--out", s.path("c3")}).code == 0);
    CHECK_FALSE(fs::exists(s.dir / "c3" / "census.csv"));
}
