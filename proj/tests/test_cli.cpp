#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hjvisc/cli.hpp"

using namespace hjvisc;
namespace fs = std::filesystem;

namespace {

const std::string kProblems = HJVISC_PROBLEMS;
const std::string kTool = HJVISC_TOOL;

cli::Options options(const std::string& task, const std::string& doc) {
    cli::Options o;
    o.task = task;
    o.source = kProblems + "/" + doc;
    o.doc = io::read_json_file(o.source);
    return o;
}

bool has(const std::string& text, const std::string& needle) { return text.find(needle) != std::string::npos; }

int shell(const std::string& args) {
    const int status = std::system((kTool + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("interval solution of the shifted band") {
    const auto o = cli::run_to_memory(options("verify-solution", "shifted_band.json"));
    CHECK(o.code == cli::kPass);
    CHECK(has(o.report, "interval viscosity solution: PASS"));
    CHECK(o.json["verdict"] == true);
    CHECK(o.json["seed"] == 0);
}

TEST_CASE("constant band is not H-continuous") {
    const auto o = cli::run_to_memory(options("check-hcont", "constant_band.json"));
    CHECK(o.code == cli::kFail);
    CHECK(has(o.report, "H-continuous: FAIL"));
    CHECK(has(o.report, "S(lower part) != upper part"));

    const auto v = cli::run_to_memory(options("verify-solution", "constant_band.json"));
    CHECK(v.code == cli::kPass);
}

TEST_CASE("spikes") {
    const auto sub = cli::run_to_memory(options("verify-sub", "spikes.json"));
    CHECK(sub.code == cli::kPass);
    CHECK(has(sub.report, "truncated whole_line slope set at x = 0.5"));
    auto super = options("verify-super", "spikes.json");
    super.doc["target"] = "psi_alpha";
    CHECK(cli::run_to_memory(super).code == cli::kPass);
    // phi_alpha is not lower semicontinuous, so the supersolution check rejects it.
    CHECK(cli::run_to_memory(options("verify-super", "spikes.json")).code == cli::kInputError);
}

TEST_CASE("distance, lattice and envelope tasks") {
    const auto d = cli::run_to_memory(options("distance", "step_distance.json"));
    CHECK(d.code == cli::kPass);
    CHECK(d.json["distance"].get<double>() == doctest::Approx(1.0));
    CHECK(has(d.csv, "function,kind"));

    const auto s = cli::run_to_memory(options("lattice-sup", "identity_step_sup.json"));
    CHECK(s.code == cli::kPass);
    CHECK(has(s.report, "result H-continuous: PASS"));

    const auto e = cli::run_to_memory(options("verify-envelope", "envelope_tent.json"));
    CHECK(e.code == cli::kPass);
    CHECK(has(e.report, "envelope viscosity solution: PASS"));

    for (const char* task : {"envelope", "complete", "lattice-inf"}) {
        const auto r = cli::run_to_memory(options(task, "identity_step_sup.json"));
        CAPTURE(task);
        if (std::string(task) == "lattice-inf") CHECK(r.code == cli::kPass);
        else CHECK(r.code == cli::kInputError);  // two functions and no target
    }
}

TEST_CASE("every written function reloads to the same function") {
    for (const auto& [task, doc] : std::vector<std::pair<std::string, std::string>>{
             {"envelope", "spikes.json"}, {"complete", "spikes.json"}, {"lattice-sup", "identity_step_sup.json"},
             {"lattice-inf", "identity_step_sup.json"}}) {
        const auto o = cli::run_to_memory(options(task, doc));
        REQUIRE(o.code == cli::kPass);
        for (const auto& entry : o.json["results"]) {
            const PiecewiseFn f = io::pwfn_from_json(entry["function"], "/results");
            CHECK(io::to_json(f) == entry["function"]);
            CHECK(io::pwfn_from_json(io::parse_json(io::to_json(f).dump()), "") == f);
        }
    }
}

TEST_CASE("solve") {
    const auto o = cli::run_to_memory(options("solve", "eikonal.json"));
    CHECK(o.code == cli::kPass);
    CHECK(has(o.report, "solve: converged"));
    CHECK(o.csv.rfind("x,lower,upper\n", 0) == 0);
    CHECK(o.json["termination"] == "converged");

    auto short_run = options("solve", "eikonal.json");
    short_run.max_iters = 3;
    const auto f = cli::run_to_memory(short_run);
    CHECK(f.code == cli::kFail);
    CHECK(has(f.report, "termination: max_iters"));

    auto reversed = options("solve", "eikonal.json");
    reversed.doc["lower"] = "tent";
    reversed.doc["upper"] = "zero";
    CHECK(cli::run_to_memory(reversed).code == cli::kInputError);
}

TEST_CASE("input errors") {
    auto bad_phi = options("verify-solution", "shifted_band.json");
    bad_phi.phi = "p +";
    const auto o = cli::run_to_memory(bad_phi);
    CHECK(o.code == cli::kInputError);
    CHECK(has(o.diagnostics, "offset 3"));

    auto missing = options("verify-solution", "shifted_band.json");
    missing.doc["target"] = "nope";
    CHECK(cli::run_to_memory(missing).code == cli::kInputError);

    auto wrong_task = options("verify-solution", "shifted_band.json");
    wrong_task.doc["task"] = "distance";
    CHECK(cli::run_to_memory(wrong_task).code == cli::kInputError);

    cli::Options unknown;
    unknown.task = "frobnicate";
    CHECK(cli::run_to_memory(unknown).code == cli::kInputError);

    auto division = options("verify-solution", "shifted_band.json");
    division.phi = "p - 1 + 0 / (p + 5)";
    const auto w = cli::run_to_memory(division);
    CHECK(w.code == cli::kPass);
    CHECK(has(w.diagnostics, "warning: phi contains '/'"));
}

TEST_CASE("artifacts are deterministic") {
    for (const char* doc : {"shifted_band.json", "envelope_tent.json", "eikonal.json"}) {
        const std::string task = std::string(doc) == "eikonal.json" ? "solve" : std::string(doc) == "envelope_tent.json"
                                                                                   ? "verify-envelope"
                                                                                   : "verify-solution";
        auto opts = options(task, doc);
        opts.seed = 7;
        const auto a = cli::run_to_memory(opts), b = cli::run_to_memory(opts);
        CAPTURE(doc);
        CHECK(a.json.dump() == b.json.dump());
        CHECK(a.csv == b.csv);
        CHECK(a.svg == b.svg);
        CHECK(a.json["seed"] == 7);
    }
}

TEST_CASE("command-line tool") {
    const fs::path dir = fs::temp_directory_path() / "hjvisc_cli_test";
    fs::create_directories(dir);
    const std::string p = kProblems + "/";
    CHECK(shell("verify-solution --in " + p + "shifted_band.json") == 0);
    CHECK(shell("check-hcont --in " + p + "constant_band.json") == 1);
    CHECK(shell("verify-solution --in " + p + "shifted_band.json --phi 'p +'") == 2);
    CHECK(shell("verify-solution") == 2);
    CHECK(shell("no-such-task --in " + p + "shifted_band.json") == 2);
    CHECK(shell("verify-solution --in /nonexistent.json") == 2);

    // solve with the bounds given as separate files
    const std::string lower = (dir / "zero.json").string(), upper = (dir / "tent.json").string();
    const auto doc = io::read_json_file(p + "eikonal.json");
    io::write_text_file(lower, doc["functions"]["zero"].dump());
    io::write_text_file(upper, doc["functions"]["tent"].dump());
    for (int run = 0; run < 2; ++run) {
        const std::string suffix = std::to_string(run);
        CHECK(shell("solve --phi 'abs(p) - 1' --lower " + lower + " --upper " + upper + " --nodes 51 --out " +
                    (dir / ("out" + suffix + ".json")).string() + " --csv " + (dir / ("u" + suffix + ".csv")).string() +
                    " --svg " + (dir / ("u" + suffix + ".svg")).string() + " --trace " +
                    (dir / ("t" + suffix + ".json")).string()) == 0);
    }
    for (const char* stem : {"out", "u", "t"}) {
        for (const char* ext : {".json", ".csv", ".svg"}) {
            const fs::path a = dir / (std::string(stem) + "0" + ext), b = dir / (std::string(stem) + "1" + ext);
            if (!fs::exists(a)) continue;
            CAPTURE(a.string());
            CHECK(slurp(a) == slurp(b));
        }
    }
    const auto out = io::read_json_file((dir / "out0.json").string());
    CHECK(out["termination"] == "converged");
    CHECK(out["nodes"] == 51);
    CHECK(io::read_json_file((dir / "t0.json").string())["records"].is_array());
    fs::remove_all(dir);
}
