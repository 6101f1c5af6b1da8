#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "neoburst/ibi_features.hpp"
#include "neoburst/keyvalue.hpp"

namespace fs = std::filesystem;

namespace {

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("neoburst_cli_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
};

const fs::path& scratch() {
  static Scratch s;
  return s.dir;
}

struct Result {
  int code = -1;
  std::string output;
};

// Runs the CLI with `args`, capturing stdout and stderr together.
Result cli(const std::string& args) {
  const fs::path log = scratch() / "last_output.txt";
  const std::string cmd = std::string("'") + NEOBURST_CLI + "' " + args + " > '" +
                          log.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  return r;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("version and help") {
  const Result v = cli("--version");
  CHECK(v.code == 0);
  CHECK(v.output.find('.') != std::string::npos);
  CHECK(cli("").code == 2);
  CHECK(cli("no-such-command").code == 2);
}

TEST_CASE("full pipeline on a small corpus") {
  const fs::path d = scratch() / "chain";
  const fs::path corpus = d / "corpus";
  Result r = cli("simulate --n 4 --counts 1,1,1,1 --epoch-s 600 --fs 64 --seed 3 --out-dir " +
                 q(corpus));
  REQUIRE_MESSAGE(r.code == 0, r.output);
  CHECK(fs::exists(corpus / "S01.csv"));
  CHECK(fs::exists(corpus / "S04_truth.csv"));
  CHECK(read_file(corpus / "manifest.csv").rfind("subject_id,grade,seed,file\n", 0) == 0);
  const auto sim_run = neoburst::KeyValueDoc::parse(read_file(corpus / "simulate.run"));
  CHECK(sim_run.get("format") == "neoburst-run/1");
  CHECK(sim_run.get("command") == "simulate");
  CHECK(sim_run.get("seed") == "3");
  CHECK(sim_run.contains("tool_version"));
  CHECK(sim_run.contains("timestamp"));

  const fs::path model = d / "detector.model";
  r = cli("train-detector --corpus " + q(corpus / "manifest.csv") + " --out " + q(model));
  REQUIRE_MESSAGE(r.code == 0, r.output);
  CHECK(fs::exists(d / "detector.model.run"));

  const fs::path masks = d / "masks";
  r = cli("detect --model " + q(model) + " --corpus " + q(corpus / "manifest.csv") +
          " --out-dir " + q(masks));
  REQUIRE_MESSAGE(r.code == 0, r.output);
  CHECK(fs::exists(masks / "S02_summary.csv"));
  CHECK(fs::exists(masks / "S02_mask_F4-C4.csv"));
  CHECK(fs::exists(masks / "detect.run"));

  const fs::path features = d / "features.csv";
  r = cli("features --masks " + q(masks / "masks.csv") + " --out " + q(features));
  REQUIRE_MESSAGE(r.code == 0, r.output);
  const auto rows = neoburst::read_features_csv(read_file(features));
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    REQUIRE(rows[i].true_grade);
    CHECK(rows[i].true_grade->value() == static_cast<int>(i) + 1);
  }
  CHECK(rows[0].ibi_percent < rows[3].ibi_percent);

  r = cli("crossval --features " + q(features) + " --out " + q(d / "cv"));
  REQUIRE_MESSAGE(r.code == 0, r.output);
  CHECK(r.output.find("LOSO accuracy") != std::string::npos);
  CHECK(read_file(d / "cv" / "confusion.csv").rfind("actual,pred_1", 0) == 0);
  CHECK(fs::exists(d / "cv" / "crossval.run"));
  const auto acc = neoburst::KeyValueDoc::parse(read_file(d / "cv" / "accuracy.txt"));
  CHECK(acc.get_integer("total") == 4);

  const fs::path grader = d / "grader.model";
  r = cli("train-grader --features " + q(features) + " --out " + q(grader));
  REQUIRE_MESSAGE(r.code == 0, r.output);
  r = cli("grade --grader " + q(grader) + " --features " + q(features) + " --out " +
          q(d / "grades.csv"));
  REQUIRE_MESSAGE(r.code == 0, r.output);
  CHECK(read_file(d / "grades.csv").rfind("subject_id,predicted_grade,true_grade\nS01,", 0) == 0);

  r = cli("plotdata --features " + q(features) + " --out-dir " + q(d / "plot"));
  REQUIRE_MESSAGE(r.code == 0, r.output);
  for (int g = 1; g <= 4; ++g) {
    CHECK(fs::exists(d / "plot" / ("grade" + std::to_string(g) + "_max_ibi.csv")));
  }

  // Same seed, same corpus.
  r = cli("simulate --n 4 --counts 1,1,1,1 --epoch-s 600 --fs 64 --seed 3 --out-dir " +
          q(d / "again"));
  REQUIRE(r.code == 0);
  CHECK(read_file(d / "again" / "S03.csv") == read_file(corpus / "S03.csv"));
}

TEST_CASE("edf output") {
  const fs::path d = scratch() / "edf";
  Result r = cli("simulate --n 1 --counts 1,0,0,0 --epoch-s 60 --fs 128 --format edf "
                 "--out-dir " + q(d));
  REQUIRE_MESSAGE(r.code == 0, r.output);
  CHECK(fs::exists(d / "S01.edf"));
}

TEST_CASE("count mismatch is a validation error and writes nothing") {
  const fs::path d = scratch() / "mismatch";
  const Result r = cli("simulate --n 5 --counts 1,1,1,1 --out-dir " + q(d));
  CHECK(r.code == 2);
  CHECK(r.output.find("sum to 4 but n is 5") != std::string::npos);
  CHECK_FALSE(fs::exists(d / "manifest.csv"));
  CHECK(cli("simulate --n 2 --counts 1,1,0,0 --epoch-s 600 --fs 32 --out-dir " + q(d)).code ==
        2);
}

TEST_CASE("crossval with two subjects fails") {
  const fs::path f = scratch() / "two.csv";
  write_file(f, "subject_id,ibi_percent,max_ibi_s,true_grade\nA,2,1,1\nB,95,80,4\n");
  const Result r = cli("crossval --features " + q(f) + " --out " + q(scratch() / "cv2"));
  CHECK(r.code == 2);
  CHECK(r.output.find("at least 3 subjects") != std::string::npos);
}

TEST_CASE("rule grading") {
  const fs::path f = scratch() / "rule.csv";
  write_file(f, "subject_id,ibi_percent,max_ibi_s,true_grade\nA,95,80,4\nB,2,3,\n");
  const Result r = cli("grade --rule --features " + q(f) + " --out " + q(scratch() / "rule_out.csv"));
  REQUIRE_MESSAGE(r.code == 0, r.output);
  CHECK(read_file(scratch() / "rule_out.csv") ==
        "subject_id,predicted_grade,true_grade\nA,4,4\nB,1,\n");
  CHECK(cli("grade --features " + q(f) + " --out " + q(scratch() / "x.csv")).code == 2);
}

TEST_CASE("grader version mismatch exits 3") {
  const fs::path f = scratch() / "vm.csv";
  write_file(f,
             "subject_id,ibi_percent,max_ibi_s,true_grade\nA,2,1,1\nB,40,6,2\nC,95,80,4\n"
             "D,3,2,1\n");
  const fs::path model = scratch() / "vm.model";
  REQUIRE(cli("train-grader --features " + q(f) + " --out " + q(model)).code == 0);
  std::string text = read_file(model);
  text.replace(text.find("neoburst-mlp/1"), 14, "neoburst-mlp/7");
  write_file(model, text);
  const Result r =
      cli("grade --grader " + q(model) + " --features " + q(f) + " --out " + q(scratch() / "vm_out.csv"));
  CHECK(r.code == 3);
  CHECK(r.output.find("neoburst-mlp/7") != std::string::npos);
}

TEST_CASE("plotdata values") {
  const fs::path f = scratch() / "plot.csv";
  write_file(f,
             "subject_id,ibi_percent,max_ibi_s,true_grade\nA,2,10,1\nB,40,0,2\nC,60,30,3\n"
             "D,95,80,4\n");
  const fs::path out = scratch() / "plot";
  const Result r = cli("plotdata --features " + q(f) + " --out-dir " + q(out));
  REQUIRE_MESSAGE(r.code == 0, r.output);
  CHECK(read_file(out / "grade1_max_ibi.csv") ==
        "subject_id,max_ibi_s,ln_max_ibi\nA,10,2.302585092994046\n");
  CHECK(read_file(out / "grade2_max_ibi.csv") == "subject_id,max_ibi_s,ln_max_ibi\nB,0,\n");
  const std::string summary = read_file(out / "summary.csv");
  CHECK(summary.find("3,ibi_percent,1,60,60,60,60,60,60,60\n") != std::string::npos);
  CHECK(fs::exists(out / "plotdata.run"));

  write_file(f, "subject_id,ibi_percent,max_ibi_s,true_grade\n");
  CHECK(cli("plotdata --features " + q(f) + " --out-dir " + q(out)).code == 2);
  write_file(f, "");
  CHECK(cli("plotdata --features " + q(f) + " --out-dir " + q(out)).code == 2);

  write_file(f, "subject_id,ibi_percent,max_ibi_s,true_grade\nA,2,10,\n");
  CHECK(cli("plotdata --features " + q(f) + " --out-dir " + q(out)).code == 2);
}

TEST_CASE("malformed inputs report their location") {
  const fs::path f = scratch() / "bad.csv";
  write_file(f, "subject_id,ibi_percent,max_ibi_s,true_grade\nA,2,10,1\nB,x,0,2\n");
  const Result r = cli("grade --rule --features " + q(f) + " --out " + q(scratch() / "o.csv"));
  CHECK(r.code == 2);
  CHECK(r.output.find("row 3") != std::string::npos);

  write_file(f, "subject_id,ibi_percent,max_ibi_s,true_grade\nA,2,10,7\n");
  CHECK(cli("grade --rule --features " + q(f) + " --out " + q(scratch() / "o.csv")).code == 2);

  const fs::path missing = scratch() / "nope.csv";
  CHECK(cli("grade --rule --features " + q(missing) + " --out " + q(scratch() / "o.csv")).code ==
        2);
}

TEST_CASE("config file supplies options") {
  const fs::path ini = scratch() / "sim.ini";
  const fs::path d = scratch() / "from_config";
  write_file(ini, "[simulate]\nn = 1\ncounts = 1,0,0,0\nepoch-s = 40\nfs = 64\nseed = 11\n");
  const Result r = cli("--config " + q(ini) + " simulate --out-dir " + q(d));
  REQUIRE_MESSAGE(r.code == 0, r.output);
  const auto run = neoburst::KeyValueDoc::parse(read_file(d / "simulate.run"));
  CHECK(run.get("seed") == "11");
}
