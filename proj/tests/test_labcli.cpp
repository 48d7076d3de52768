#include "adiabat/errors.hpp"
#include "adiabat/scenario.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace fs = std::filesystem;
using adiabat::lab::Json;

namespace {

const fs::path kScenarios{ADIABAT_SCENARIO_DIR};
const std::string kExe{ADIABAT_LAB_EXE};

fs::path fresh_dir(const std::string& tag)
{
    const fs::path dir = fs::temp_directory_path() / ("adiabat_labcli_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& file)
{
    std::ifstream in(file, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Result {
    int code = -1;
    std::string out;
    std::string err;
};

Result lab(const std::string& args, const fs::path& scratch, const std::string& env = "")
{
    const fs::path out = scratch / "stdout.txt";
    const fs::path err = scratch / "stderr.txt";
    const std::string cmd = env + " '" + kExe + "' " + args + " > '" + out.string() + "' 2> '" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path write_config(const fs::path& dir, const std::string& name, const Json& doc)
{
    const fs::path file = dir / (name + ".json");
    std::ofstream(file) << doc.dump(2);
    return file;
}

Json small_lz(const std::string& name)
{
    return Json{{"name", name},
                {"model",
                 {{"name", "linear_interpolation"},
                  {"params", {{"h0", {{-0.5, 0.05}, {0.05, 0.5}}}, {"h1", {{0.5, 0.05}, {0.05, -0.5}}}}}}},
                {"total_time", 100.0},
                {"steps", 5000}};
}

Json load(const fs::path& file) { return Json::parse(slurp(file)); }

} // namespace

TEST_CASE("list-models")
{
    const fs::path dir = fresh_dir("list");
    const Result r = lab("list-models", dir);
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string line;
    int entries = 0;
    while (std::getline(lines, line)) {
        if (!line.empty() && line[0] != ' ') {
            ++entries;
        }
    }
    CHECK(entries == 5);
    const auto grover = r.out.find("grover_adiabatic");
    REQUIRE(grover != std::string::npos);
    CHECK(r.out.find("1-6", grover) != std::string::npos);
    const auto dual = r.out.find("dual_of");
    REQUIRE(dual != std::string::npos);
    CHECK(r.out.find("wrapped model", dual) != std::string::npos);
    CHECK(r.out == adiabat::lab::list_models());
}

TEST_CASE("run: S1 report, determinism and output-dir override")
{
    const fs::path a = fresh_dir("s1a");
    const fs::path b = fresh_dir("s1b");
    const std::string cfg = (kScenarios / "s1_rabi.json").string();
    REQUIRE(lab("run '" + cfg + "' --output-dir '" + a.string() + "'", a).code == 0);
    REQUIRE(lab("run '" + cfg + "' --output-dir '" + b.string() + "'", b).code == 0);

    const Json doc = load(a / "s1_rabi.json");
    CHECK(doc["role"] == "single");
    CHECK(doc["levels"][1]["probability"]["final"].get<double>() >= 0.95);
    CHECK(doc["traditional_metric_max"].get<double>() == doctest::Approx(0.02).epsilon(0.1));
    CHECK(doc["invariants_pass"].get<bool>());
    CHECK(doc["config"] == adiabat::lab::to_json(adiabat::lab::load_config(cfg)));

    CHECK(slurp(a / "s1_rabi.json") == slurp(b / "s1_rabi.json"));
    CHECK(slurp(a / "s1_rabi.tsv") == slurp(b / "s1_rabi.tsv"));
    CHECK(fs::exists(a / "s1_rabi_timing.json"));

    const std::string header = slurp(a / "s1_rabi.tsv").substr(0, slurp(a / "s1_rabi.tsv").find('\n'));
    CHECK(header == "t\tP_0\tP_1\tabs_a_0\tabs_a_1\tre_A_0_1\tim_A_0_1\tre_A_1_0\tim_A_1_0");
}

TEST_CASE("run: dual_of writes base and dual reports")
{
    const fs::path dir = fresh_dir("s2");
    const Result r = lab("run '" + (kScenarios / "s2_dual.json").string() + "' --output-dir '" + dir.string() + "'", dir);
    REQUIRE(r.code == 0);
    const Json base = load(dir / "s2_dual_base.json");
    const Json dual = load(dir / "s2_dual_dual.json");
    CHECK(base["role"] == "base");
    CHECK(dual["role"] == "dual");
    CHECK(base["levels"][0]["probability"]["min"].get<double>() >= 0.99);
    CHECK(dual["levels"][0]["probability"]["min"].get<double>() <= 0.9);
    const double mb = base["traditional_metric_max"].get<double>();
    const double md = dual["traditional_metric_max"].get<double>();
    CHECK(mb <= 0.05);
    CHECK(md <= 2.0 * mb);
    CHECK(md >= 0.5 * mb);
    CHECK(base["levels"][0]["drift"]["min"].get<double>() <= 0.01);
}

TEST_CASE("sweep: LZ slope and single-T table")
{
    const fs::path dir = fresh_dir("sweep");
    const Result r = lab("sweep '" + (kScenarios / "s3_lz_sweep.json").string() + "' --output-dir '" + dir.string() + "'", dir);
    REQUIRE(r.code == 0);
    const std::string table = slurp(dir / "s3_lz_sweep_sweep.tsv");
    const auto footer = table.find("# slope_log_max_A_frozen_vs_log_T\t");
    REQUIRE(footer != std::string::npos);
    const double slope = std::stod(table.substr(table.find('\t', footer) + 1));
    CHECK(slope == doctest::Approx(-1.0).epsilon(0.01));
    CHECK(std::count(table.begin(), table.end(), '\n') == 6); // header, 4 rows, footer

    Json single = small_lz("single");
    single["sweep"] = {100.0};
    const fs::path cfg = write_config(dir, "single", single);
    REQUIRE(lab("sweep '" + cfg.string() + "' --output-dir '" + dir.string() + "'", dir).code == 0);
    const std::string one = slurp(dir / "single_sweep.tsv");
    CHECK(std::count(one.begin(), one.end(), '\n') == 2);
    CHECK(one.find("slope") == std::string::npos);
}

TEST_CASE("sweep: resonant zero count doubles")
{
    const auto cfg = adiabat::lab::load_config(kScenarios / "s4_rabi_sweep.json");
    const auto out = adiabat::lab::sweep(cfg, fresh_dir("s4"));
    REQUIRE(out.rows.size() == 2);
    const double ratio = static_cast<double>(out.rows[1].summary.zeros.total()) /
                         static_cast<double>(out.rows[0].summary.zeros.total());
    CHECK(ratio == doctest::Approx(2.0).epsilon(0.5));
    for (const auto& row : out.rows) {
        CHECK(std::abs(row.summary.eps) <= row.summary.bound);
    }
}

TEST_CASE("config round-trip for every bundled scenario")
{
    for (const auto& entry : fs::directory_iterator(kScenarios)) {
        CAPTURE(entry.path().string());
        const auto cfg = adiabat::lab::load_config(entry.path());
        const std::string text = adiabat::report::dump(adiabat::lab::to_json(cfg));
        const auto again = adiabat::lab::parse_config(Json::parse(text));
        CHECK(again == cfg);
        CHECK(adiabat::report::dump(adiabat::lab::to_json(again)) == text);
    }
}

TEST_CASE("config parsing details")
{
    Json doc = small_lz("details");
    doc["initial_state"] = {{"amplitudes", {{0.0, 0.0}, {1.0, 0.0}}}};
    doc["pairs"] = {{0, 1}};
    doc["diagnostics"] = {"traditional_metric", "probabilities"};
    const auto cfg = adiabat::lab::parse_config(doc);
    CHECK_FALSE(cfg.initial_level.has_value());
    REQUIRE(cfg.initial_amplitudes.size() == 2);
    CHECK(cfg.pairs.size() == 1);

    // Amplitude start: the tracked level is the one with the largest overlap.
    const fs::path dir = fresh_dir("details");
    const auto out = adiabat::lab::run(cfg, dir);
    REQUIRE(out.reports.size() == 1);
    CHECK(out.reports[0]["tracked_level"] == 1);
    CHECK_FALSE(out.reports[0]["levels"][0].contains("drift"));
    CHECK_FALSE(out.reports[0]["levels"][0].contains("eps_m"));
    CHECK(out.reports[0]["levels"][0].contains("probability"));
    CHECK_FALSE(fs::exists(dir / "details.tsv"));

    Json shorthand = small_lz("short");
    shorthand["initial_state"] = 1;
    CHECK(*adiabat::lab::parse_config(shorthand).initial_level == 1);
}

TEST_CASE("exit codes")
{
    const fs::path dir = fresh_dir("codes");
    auto code_for = [&](const Json& doc, const std::string& verb = "run") {
        const fs::path file = write_config(dir, "case", doc);
        return lab(verb + " '" + file.string() + "' --output-dir '" + (dir / "out").string() + "'", dir);
    };

    SUBCASE("success")
    {
        CHECK(code_for(small_lz("ok")).code == 0);
    }
    SUBCASE("numerical guards exit 3 and name the guard")
    {
        Json coarse = small_lz("coarse");
        coarse["steps"] = 50;
        const Result r = code_for(coarse);
        CHECK(r.code == 3);
        CHECK(r.err.find("per-step phase") != std::string::npos);
        CHECK(r.err.find("GridTooCoarse") != std::string::npos);

        Json phase = small_lz("phase");
        phase["tolerances"] = {{"phase_guard", 1e-6}};
        const Result p = code_for(phase);
        CHECK(p.code == 3);
        CHECK(p.err.find("PhaseUnderResolved") != std::string::npos);

        Json crossing = small_lz("crossing");
        crossing["model"]["params"] = {{"h0", {{-0.5, 0.0}, {0.0, 0.5}}}, {"h1", {{0.5, 0.0}, {0.0, -0.5}}}};
        crossing["steps"] = 1000;
        const Result d = code_for(crossing);
        CHECK(d.code == 3);
        CHECK(d.err.find("DegenerateGap") != std::string::npos);

        Json coarse_dual{{"name", "dual"},
                         {"model",
                          {{"name", "dual_of"},
                           {"params", {{"base", {{"name", "rotating_field"}}}, {"grid_points", 50}}}}},
                         {"total_time", 200.0},
                         {"steps", 20000}};
        CHECK(code_for(coarse_dual).code == 3);
    }
    SUBCASE("validation errors exit 2")
    {
        Json unknown = small_lz("unknown");
        unknown["model"]["name"] = "harmonic_oscillator";
        CHECK(code_for(unknown).code == 2);

        Json typo = small_lz("typo");
        typo["stepz"] = 10;
        const Result t = code_for(typo);
        CHECK(t.code == 2);
        CHECK(t.err.find("stepz") != std::string::npos);

        Json level = small_lz("level");
        level["initial_state"] = {{"level", 2}};
        CHECK(code_for(level).code == 2);

        Json grover{{"model", {{"name", "grover_adiabatic"}, {"params", {{"n_qubits", 7}}}}},
                    {"total_time", 10.0},
                    {"steps", 1000}};
        CHECK(code_for(grover).code == 2);

        Json hermitian = small_lz("nh");
        hermitian["model"]["params"]["h0"] = {{-0.5, 0.05}, {0.07, 0.5}};
        CHECK(code_for(hermitian).code == 2);

        Json norm = small_lz("norm");
        norm["initial_state"] = {{"amplitudes", {1.0, 1.0}}};
        CHECK(code_for(norm).code == 2);

        Json nested{{"model",
                     {{"name", "dual_of"},
                      {"params", {{"base", {{"name", "dual_of"}, {"params", {{"base", {{"name", "rotating_field"}}}}}}}}}}},
                    {"total_time", 10.0},
                    {"steps", 100}};
        CHECK(code_for(nested).code == 2);

        Json descending = small_lz("desc");
        descending["sweep"] = {200.0, 100.0};
        CHECK(code_for(descending, "sweep").code == 2);
        CHECK(code_for(small_lz("nosweep"), "sweep").code == 2);

        const fs::path broken = dir / "broken.json";
        std::ofstream(broken) << "{ \"model\": ";
        CHECK(lab("run '" + broken.string() + "'", dir).code == 2);
        CHECK(lab("run '" + (dir / "missing.json").string() + "'", dir).code == 2);
        CHECK(lab("frobnicate", dir).code == 2);
    }
}

TEST_CASE("log level from the environment")
{
    const fs::path dir = fresh_dir("log");
    const fs::path cfg = write_config(dir, "quiet", small_lz("quiet"));
    const std::string args = "run '" + cfg.string() + "' --output-dir '" + (dir / "out").string() + "'";
    CHECK(lab(args, dir).err.empty());
    const Result loud = lab(args, dir, "ADIABAT_LOG_LEVEL=info");
    CHECK(loud.code == 0);
    CHECK(loud.err.find("wrote") != std::string::npos);
}

TEST_CASE("exit_code_for mapping")
{
    using adiabat::Error;
    using adiabat::ErrorKind;
    CHECK(adiabat::lab::exit_code_for(Error(ErrorKind::GridTooCoarse, "x")) == 3);
    CHECK(adiabat::lab::exit_code_for(Error(ErrorKind::PhaseUnderResolved, "x")) == 3);
    CHECK(adiabat::lab::exit_code_for(Error(ErrorKind::DegenerateGap, "x")) == 3);
    CHECK(adiabat::lab::exit_code_for(Error(ErrorKind::InvalidParams, "x")) == 2);
    CHECK(adiabat::lab::exit_code_for(Error(ErrorKind::GridMismatch, "x")) == 1);
    CHECK(adiabat::lab::exit_code_for(std::runtime_error("x")) == 1);
}
