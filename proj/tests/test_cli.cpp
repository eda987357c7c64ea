// Copyright 2026 The chaintime Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

const fs::path kScratch = fs::temp_directory_path() / "chaintime_cli_test";

int cli(const std::string& args, const std::string& stdout_file = "out.txt") {
    fs::create_directories(kScratch);
    const std::string cmd = std::string("\"") + CHAINTIME_CLI + "\" " + args + " > \"" +
                            (kScratch / stdout_file).string() + "\" 2> \"" + (kScratch / "err.txt").string() + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string out() { return slurp(kScratch / "out.txt"); }
std::string err() { return slurp(kScratch / "err.txt"); }

std::string write(const std::string& name, const std::string& text) {
    fs::create_directories(kScratch);
    const auto p = kScratch / name;
    std::ofstream(p, std::ios::binary) << text;
    return "\"" + p.string() + "\"";
}

const std::string kShort = R"({"preset": "invoice-demo", "horizon_ms": 2592000000, "seeds": 2})";

}  // namespace

TEST_CASE("timer parsing from the command line") {
    CHECK(cli("parse-timer 2020-12-24T12:00:00Z") == 0);
    CHECK(out().find("1608811200000") != std::string::npos);
    CHECK(cli("parse-timer R/2020-01-01/P1M --count 3") == 0);
    CHECK(out().find("2020-03-01T00:00:00Z") != std::string::npos);
    CHECK(cli("parse-timer P7X") == 2);
    CHECK(err().find("position 2") != std::string::npos);
}

TEST_CASE("scenario errors exit with 1") {
    CHECK(cli("run " + write("neg.json", R"({"preset": "invoice-demo", "oracles": [{"id": "c", "kind": "storage", "cadence_ms": -1}]})")) == 1);
    CHECK(err().find("oracles[0].cadence_ms") != std::string::npos);
    CHECK(cli("sweep " + write("unk.json", R"({"measures": ["Sundial"]})")) == 1);
    CHECK(err().find("RequestResponseOracle") != std::string::npos);
    CHECK(cli("print-config no-such-preset") == 1);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(cli("") == 2);
    CHECK(cli("frobnicate") == 2);
    CHECK(cli("run invoice-demo --measure Sundial") == 2);
    CHECK(cli("sweep invoice-demo --format yaml") == 2);
    CHECK(cli("report " + (kScratch / "absent.csv").string()) == 2);
}

TEST_CASE("sweep output is byte-for-byte reproducible") {
    const auto s = write("short.json", kShort);
    REQUIRE(cli("sweep " + s + " --records " + (kScratch / "r1.csv").string(), "a.csv") == 0);
    REQUIRE(cli("sweep " + s + " --threads 2 --records " + (kScratch / "r2.csv").string(), "b.csv") == 0);
    const auto a = slurp(kScratch / "a.csv");
    CHECK(a.rfind("measure,constraint_type,tp,tn,fp,fn,match,mismatch,stuck,mean_abs_err_ms,max_abs_err_ms\n", 0) == 0);
    CHECK(a == slurp(kScratch / "b.csv"));
    CHECK(slurp(kScratch / "r1.csv") == slurp(kScratch / "r2.csv"));
    CHECK(a.find('\r') == std::string::npos);

    // The report subcommand rebuilds the same table from the record stream.
    REQUIRE(cli("report " + (kScratch / "r1.csv").string()) == 0);
    CHECK(out() == a);
    REQUIRE(cli("report " + (kScratch / "r1.csv").string() + " --format markdown --out " +
                (kScratch / "r.md").string()) == 0);
    CHECK(slurp(kScratch / "r.md").find("asserted, not measured") != std::string::npos);
}

TEST_CASE("single runs and traces") {
    const auto s = write("short.json", kShort);
    REQUIRE(cli("run " + s + " --seed 2 --measure pa --out " + (kScratch / "run.csv").string() + " --trace " +
                (kScratch / "trace.txt").string()) == 0);
    const auto records = slurp(kScratch / "run.csv");
    CHECK(records.rfind("scenario,seed,measure,constraint,element,ground_truth_ms,measured_ms,outcome", 0) == 0);
    CHECK(records.find("invoice_demo,2,Parameter,") != std::string::npos);
    const auto trace = slurp(kScratch / "trace.txt");
    CHECK(trace.rfind("block,0,", 0) == 0);
    CHECK(trace.find("\noracle,clock,update,") != std::string::npos);
}

TEST_CASE("printed configuration feeds back in unchanged") {
    REQUIRE(cli("print-config invoice-demo", "cfg.json") == 0);
    const auto first = slurp(kScratch / "cfg.json");
    CHECK(first.find("\"cadence_ms\": 60000") != std::string::npos);
    REQUIRE(cli("print-config \"" + (kScratch / "cfg.json").string() + "\"", "cfg2.json") == 0);
    CHECK(slurp(kScratch / "cfg2.json") == first);
}

TEST_CASE("the bundled demo subcommand") {
    REQUIRE(cli("demo-invoice --seeds 1 --measure Parameter --format markdown") == 0);
    CHECK(out().find("| Parameter | deferred_choice |") != std::string::npos);
}
