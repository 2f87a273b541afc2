#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string binary() {
  const char* env = std::getenv("RTCLASSIFY_BIN");
  REQUIRE_MESSAGE(env != nullptr, "RTCLASSIFY_BIN must point at the rtclassify binary");
  return env;
}

struct CliResult {
  int status = -1;
  std::string out;
};

CliResult run(const std::string& args) {
  const std::string cmd = "'" + binary() + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  CliResult r;
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Scratch directory shared by the cases in this file; populated once.
struct Workspace {
  fs::path dir;
  fs::path cohort;

  Workspace() {
    dir = fs::temp_directory_path() / ("rtc-cli-test-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    cohort = dir / "cohort.csv";
    const CliResult r = run("synth --seed 11 --streams-dir '" + (dir / "streams").string() +
                            "' --out '" + cohort.string() + "'");
    REQUIRE(r.status == 0);
  }
  ~Workspace() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
};

Workspace& ws() {
  static Workspace w;
  return w;
}

}  // namespace

TEST_CASE("synth summarizes the generated cohort") {
  const CliResult r = run("synth --seed 11 --out '" + (ws().dir / "again.csv").string() + "'");
  REQUIRE(r.status == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("command") == "synth");
  CHECK(j.at("n") == 53);
  CHECK(j.at("labels").at("HC") == 27);
  CHECK(j.at("labels").at("ES-AD") == 26);
  CHECK(j.at("regions") == json::array({13, 24, 7, 9}));
  CHECK(slurp(ws().dir / "again.csv") == slurp(ws().cohort));
}

TEST_CASE("extract over emitted pen streams reproduces the cohort file") {
  const fs::path out = ws().dir / "extracted.csv";
  const CliResult r = run("extract --in '" + (ws().dir / "streams").string() +
                          "' --mode 4 --out '" + out.string() + "'");
  REQUIRE(r.status == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("command") == "extract");
  CHECK(j.at("mode") == 4);
  CHECK(j.at("n") == 53);
  CHECK(slurp(out) == slurp(ws().cohort));
}

TEST_CASE("gridsearch reports the winning configuration and its leave-one-out") {
  const CliResult r = run("gridsearch --data '" + ws().cohort.string() +
                          "' --tasks-grid 2,4,7 --c-grid 1,10 --gamma-grid 0.5");
  REQUIRE(r.status == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("grid").at("task_subsets") == 1);
  CHECK(j.at("grid").at("c") == json::array({1.0, 10.0}));
  CHECK(j.at("best_index").get<int>() < 2);
  CHECK(j.at("best").at("tasks") == json::array({2, 4, 7}));
  const auto& cm = j.at("loocv").at("confusion");
  CHECK(cm.at("total") == 53);
  CHECK(j.at("loocv").at("error_count").get<int>() == cm.at("errors").get<int>());
  CHECK(j.contains("resubstitution"));
}

TEST_CASE("ncv reports per-fold winners and the modal configuration") {
  const CliResult r = run("ncv --data '" + ws().cohort.string() +
                          "' --tasks-grid 2,4,7 --c-grid 10 --gamma-grid 1");
  REQUIRE(r.status == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("n") == 53);
  CHECK(j.at("folds").size() == 53);
  CHECK(j.at("modal").at("count") == 53);  // single-config grid: every fold agrees
  CHECK(j.at("modal").at("config").at("c") == 10.0);
  CHECK(j.at("accuracy").get<double>() ==
        doctest::Approx(1.0 - j.at("errors").get<double>() / 53.0));
}

TEST_CASE("kfold prints an error histogram over repetitions") {
  const CliResult r = run("kfold --data '" + ws().cohort.string() +
                          "' --k 5 --reps 3 --seed 1 --tasks 2,4,7 --c 10 --gamma 1");
  REQUIRE(r.status == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("k") == 5);
  CHECK(j.at("repetitions") == 3);
  int reps = 0;
  for (const auto& bin : j.at("histogram")) reps += bin.at("repetitions").get<int>();
  CHECK(reps == 3);
}

TEST_CASE("gm-fit / gm-eval round trip preserves the training confusion") {
  const fs::path model = ws().dir / "gm.json";
  const CliResult fit = run("gm-fit --data '" + ws().cohort.string() + "' --out '" +
                            model.string() + "'");
  REQUIRE(fit.status == 0);
  const json jf = json::parse(slurp(model));
  const CliResult ev = run("gm-eval --model '" + model.string() + "' --data '" +
                           ws().cohort.string() + "'");
  REQUIRE(ev.status == 0);
  const json je = json::parse(ev.out);
  CHECK(jf.at("train").at("confusion") == je.at("confusion"));
}

TEST_CASE("adhoc-train / adhoc-eval round trip, with flag overrides honored") {
  const fs::path fit_file = ws().dir / "fit.json";
  const CliResult tr = run("adhoc-train --data '" + ws().cohort.string() + "' --out '" +
                           fit_file.string() + "'");
  REQUIRE(tr.status == 0);
  const json jt = json::parse(slurp(fit_file));
  const CliResult ev = run("adhoc-eval --fit '" + fit_file.string() + "' --data '" +
                           ws().cohort.string() + "'");
  REQUIRE(ev.status == 0);
  CHECK(json::parse(ev.out).at("confusion") == jt.at("train").at("confusion"));

  // an absurd override must change the outcome
  const CliResult forced = run("adhoc-eval --p4 0 --p7 0 --p2 1e9 --data '" +
                               ws().cohort.string() + "'");
  REQUIRE(forced.status == 0);
  const json jo = json::parse(forced.out);
  CHECK(jo.at("confusion").at("tp") == 0);  // nothing is called ES-AD any more
  CHECK(jo.at("confusion").at("fp") == 0);
  CHECK(jo.at("confusion").at("fn") == 26);
}

TEST_CASE("markdown and csv renderings carry the flattened fields") {
  const std::string base = "gm-fit --data '" + ws().cohort.string() + "'";
  const CliResult md = run(base + " --format md");
  REQUIRE(md.status == 0);
  CHECK(md.out.find("| field | value |") != std::string::npos);
  CHECK(md.out.find("model.options.atypical_rule") != std::string::npos);

  const CliResult csv = run(base + " --format csv");
  REQUIRE(csv.status == 0);
  CHECK(csv.out.rfind("field,value", 0) == 0);
  CHECK(csv.out.find("train.confusion.errors,") != std::string::npos);
}

TEST_CASE("failures exit nonzero") {
  CHECK(run("gm-fit --data '/nonexistent/file.csv'").status != 0);
  CHECK(run("frobnicate").status != 0);
  CHECK(run("extract --in '" + ws().dir.string() + "' --mode 9").status != 0);
  CHECK(run("adhoc-eval --p4 1 --data '" + ws().cohort.string() + "'").status != 0);
}
