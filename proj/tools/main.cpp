// neoburst command-line front end.
#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <sstream>

#include "io.hpp"
#include "neoburst/csv.hpp"
#include "neoburst/detector.hpp"
#include "neoburst/edf.hpp"
#include "neoburst/error.hpp"
#include "neoburst/grader.hpp"
#include "neoburst/ibi_features.hpp"
#include "neoburst/synth.hpp"

namespace neoburst::tools {
namespace {

constexpr int kExitValidation = 2;
constexpr int kExitVersion = 3;

std::string num(double v) { return format_shortest(v); }

fs::path ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory '" + dir + "': " + ec.message());
  return fs::path(dir);
}

// --- simulate --------------------------------------------------------------

struct SimulateArgs {
  int n = 54;
  std::vector<int> counts{22, 14, 12, 6};
  double epoch_s = 3600.0;
  double fs_hz = 256.0;
  unsigned long long seed = 1;
  std::string out_dir;
  std::string format = "csv";
  std::string truth = "summary";
};

int run_simulate(const SimulateArgs& a) {
  if (a.counts.size() != HieGrade::kCount) {
    throw Error("--counts needs 4 values, got " + std::to_string(a.counts.size()));
  }
  CorpusOptions opt;
  opt.n = a.n;
  std::copy(a.counts.begin(), a.counts.end(), opt.grade_counts.begin());
  opt.epoch_s = a.epoch_s;
  opt.fs_hz = a.fs_hz;
  opt.seed = a.seed;
  const std::vector<CorpusEntry> plan = corpus_plan(opt);

  const fs::path dir = ensure_dir(a.out_dir);
  RunManifest run{"simulate", {}, {}, {}, a.seed};
  std::string manifest = "subject_id,grade,seed,file\n";
  for (const CorpusEntry& e : plan) {
    const SyntheticSubject s =
        generate_subject(e.grade, opt.epoch_s, opt.fs_hz, e.seed, e.subject_id);
    const std::string file = e.subject_id + (a.format == "edf" ? ".edf" : ".csv");
    if (a.format == "edf") {
      write_bytes(dir / file, write_edf(s.recording));
    } else {
      write_text(dir / file, write_csv(s.recording));
    }
    run.outputs.push_back(file);
    if (a.truth == "channels") {
      for (std::size_t c = 0; c < s.truth_labels.size(); ++c) {
        const std::string t = e.subject_id + "_truth_" + s.truth_labels[c] + ".csv";
        write_text(dir / t, write_mask_csv(s.truth_masks[c]));
        run.outputs.push_back(t);
      }
    } else {
      const std::string t = e.subject_id + "_truth.csv";
      write_text(dir / t, write_mask_csv(s.truth_masks.front()));
      run.outputs.push_back(t);
    }
    manifest += e.subject_id + "," + std::to_string(e.grade.value()) + "," +
                std::to_string(e.seed) + "," + file + "\n";
  }
  write_text(dir / "manifest.csv", manifest);
  run.outputs.push_back("manifest.csv");
  run.config = {{"n", std::to_string(a.n)},
                {"counts", std::to_string(a.counts[0]) + "," + std::to_string(a.counts[1]) +
                               "," + std::to_string(a.counts[2]) + "," +
                               std::to_string(a.counts[3])},
                {"epoch_s", num(a.epoch_s)},
                {"fs_hz", num(a.fs_hz)},
                {"format", a.format},
                {"truth_masks", a.truth}};
  run.write(dir / "simulate.run");
  std::cout << "wrote " << plan.size() << " recordings to " << dir.string() << "\n";
  return 0;
}

// --- corpus manifests ------------------------------------------------------

struct ManifestRow {
  std::string subject_id;
  std::optional<HieGrade> grade;
  fs::path file;
};

std::vector<ManifestRow> read_corpus_manifest(const fs::path& path) {
  const Table t = read_table(path);
  const std::size_t id = t.column("subject_id", path);
  const std::size_t grade = t.column("grade", path);
  const std::size_t file = t.column("file", path);
  std::vector<ManifestRow> rows;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const std::string where = path.string() + ": row " + std::to_string(r + 2);
    fs::path f = t.rows[r][file];
    if (f.is_relative()) f = path.parent_path() / f;
    rows.push_back({t.rows[r][id], parse_grade(t.rows[r][grade], where), f});
  }
  if (rows.empty()) throw Error(path.string() + ": manifest lists no recordings");
  return rows;
}

// Truth masks stored next to a recording, per channel or one shared file.
std::vector<BinaryMask> load_truth(const fs::path& recording,
                                   const std::vector<std::string>& labels) {
  const fs::path base = recording.parent_path() / recording.stem();
  const fs::path shared = base.string() + "_truth.csv";
  std::vector<BinaryMask> masks;
  for (const std::string& label : labels) {
    fs::path p = base.string() + "_truth_" + label + ".csv";
    if (!fs::exists(p)) p = shared;
    try {
      masks.push_back(read_mask_csv(read_text(p)));
    } catch (const Error& e) {
      const std::string what = e.what();
      throw Error(what.find(p.string()) == std::string::npos ? p.string() + ": " + what
                                                              : what);
    }
  }
  return masks;
}

// --- train-detector --------------------------------------------------------

struct TrainDetectorArgs {
  std::string corpus;
  std::string out;
  double svm_c = 1.0;
  std::size_t k = 8;
  double min_interburst_s = 1.0;
  double min_burst_s = 0.5;
  unsigned long long seed = 1;
};

int run_train_detector(const TrainDetectorArgs& a) {
  DetectorConfig cfg;
  cfg.svm_c = a.svm_c;
  cfg.selected_feature_count = a.k;
  cfg.min_interburst_s = a.min_interburst_s;
  cfg.min_burst_s = a.min_burst_s;
  cfg.seed = a.seed;
  cfg.validate();

  RunManifest run{"train-detector", {}, {a.corpus}, {a.out}, a.seed};
  TrainingSet data;
  for (const ManifestRow& row : read_corpus_manifest(a.corpus)) {
    const EegRecording bipolar = bipolar_view(load_recording(row.file));
    std::vector<std::string> labels;
    for (const Channel& c : bipolar.channels()) labels.push_back(c.label);
    const LabeledRecording lr{bipolar, load_truth(row.file, labels)};
    TrainingSet part;
    try {
      part = build_training_set(std::span<const LabeledRecording>(&lr, 1), cfg);
    } catch (const Error& e) {
      throw Error(row.file.string() + ": " + e.what());
    }
    if (data.labels.empty()) {
      data = std::move(part);
    } else {
      data.features.append(part.features);
      data.labels.insert(data.labels.end(), part.labels.begin(), part.labels.end());
    }
    run.inputs.push_back(row.file.string());
  }
  const DetectorModel model = train_detector(data, cfg);
  write_text(a.out, save_detector(model));
  run.config = {{"svm_c", num(a.svm_c)},
                {"selected_feature_count", std::to_string(a.k)},
                {"min_interburst_s", num(a.min_interburst_s)},
                {"min_burst_s", num(a.min_burst_s)},
                {"training_windows", std::to_string(data.labels.size())}};
  run.write(a.out + ".run");
  std::cout << "trained on " << data.labels.size() << " windows; objective "
            << num(model.training_objective) << "\n";
  return 0;
}

// --- detect ----------------------------------------------------------------

struct DetectArgs {
  std::string model;
  std::string in;
  std::string corpus;
  std::string out_dir;
};

int run_detect(const DetectArgs& a) {
  const DetectorModel model = load_detector(read_text(a.model));
  std::vector<ManifestRow> rows;
  if (!a.corpus.empty()) {
    rows = read_corpus_manifest(a.corpus);
  } else {
    rows.push_back({fs::path(a.in).stem().string(), std::nullopt, a.in});
  }
  const fs::path dir = ensure_dir(a.out_dir);
  RunManifest run{"detect", {}, {a.model}, {}, model.config.seed};
  std::string index = "subject_id,true_grade,summary\n";
  for (const ManifestRow& row : rows) {
    const EegRecording bipolar = bipolar_view(load_recording(row.file));
    std::vector<BinaryMask> masks;
    try {
      masks = detect(model, bipolar);
    } catch (const Error& e) {
      throw Error(row.file.string() + ": " + e.what());
    }
    for (std::size_t c = 0; c < masks.size(); ++c) {
      const std::string f = row.subject_id + "_mask_" + bipolar.channels()[c].label + ".csv";
      write_text(dir / f, write_mask_csv(masks[c]));
      run.outputs.push_back(f);
    }
    const std::string summary = row.subject_id + "_summary.csv";
    write_text(dir / summary, write_mask_csv(majority_vote(masks)));
    run.outputs.push_back(summary);
    run.inputs.push_back(row.file.string());
    index += row.subject_id + "," +
             (row.grade ? std::to_string(row.grade->value()) : std::string()) + "," +
             summary + "\n";
  }
  write_text(dir / "masks.csv", index);
  run.outputs.push_back("masks.csv");
  run.write(dir / "detect.run");
  std::cout << "detected " << rows.size() << " recording(s) into " << dir.string() << "\n";
  return 0;
}

// --- features --------------------------------------------------------------

struct FeaturesArgs {
  std::vector<std::string> masks;
  std::string out;
  bool plain_max = false;
};

int run_features(const FeaturesArgs& a) {
  const MaxIbiMode mode = a.plain_max ? MaxIbiMode::kPlainMax : MaxIbiMode::kRange;
  std::vector<IbiFeatureVector> rows;
  RunManifest run{"features", {{"plain_max", a.plain_max ? "true" : "false"}}, {}, {a.out}, {}};
  auto add = [&](const std::string& id, const fs::path& mask_path, std::optional<HieGrade> g) {
    BinaryMask mask(1.0, {});
    try {
      mask = read_mask_csv(read_text(mask_path));
    } catch (const Error& e) {
      const std::string what = e.what();
      throw Error(what.find(mask_path.string()) == std::string::npos
                      ? mask_path.string() + ": " + what
                      : what);
    }
    rows.push_back(compute_ibi_features(id, mask_to_intervals(mask), g, mode));
    run.inputs.push_back(mask_path.string());
  };
  for (const std::string& m : a.masks) {
    const fs::path path(m);
    const Table t = read_table(path);
    if (t.header.size() == 3 && t.header[0] == "subject_id" && t.header[2] == "summary") {
      for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const std::string where = path.string() + ": row " + std::to_string(r + 2);
        fs::path f = t.rows[r][2];
        if (f.is_relative()) f = path.parent_path() / f;
        add(t.rows[r][0], f, parse_grade(t.rows[r][1], where));
      }
    } else {
      std::string id = path.stem().string();
      if (const auto pos = id.rfind("_summary"); pos != std::string::npos && pos > 0) {
        id.resize(pos);
      }
      add(id, path, std::nullopt);
    }
  }
  write_text(a.out, write_features_csv(rows));
  run.write(a.out + ".run");
  std::cout << "wrote features for " << rows.size() << " subject(s)\n";
  return 0;
}

// --- grader commands ---------------------------------------------------------

std::vector<IbiFeatureVector> load_features(const std::string& path) {
  try {
    auto rows = read_features_csv(read_text(path));
    if (rows.empty()) throw Error(path + ": no subjects listed");
    return rows;
  } catch (const Error& e) {
    const std::string what = e.what();
    if (what.find(path) != std::string::npos) throw;
    throw Error(path + ": " + what);
  }
}

struct GraderArgs {
  std::string features;
  std::string out;
  double theta = 0.1;
  unsigned long long seed = 1;
  int max_epochs = 5000;
  std::string feature_set = "both";
};

MlpOptions mlp_options(const GraderArgs& a) {
  MlpOptions o;
  o.theta = a.theta;
  o.seed = a.seed;
  o.max_epochs = a.max_epochs;
  if (!(o.theta >= 0.0)) throw Error("--theta must be non-negative");
  if (o.max_epochs < 1) throw Error("--max-epochs must be at least 1");
  return o;
}

std::map<std::string, std::string> grader_config(const GraderArgs& a) {
  return {{"theta", num(a.theta)},
          {"max_epochs", std::to_string(a.max_epochs)},
          {"feature_set", a.feature_set}};
}

int run_train_grader(const GraderArgs& a) {
  const FeatureSet set = parse_feature_set(a.feature_set);
  std::vector<LabeledSample> data;
  for (const IbiFeatureVector& fv : load_features(a.features)) {
    if (!fv.true_grade) throw Error(a.features + ": subject '" + fv.subject_id + "' has no grade");
    data.push_back({grader_inputs(fv, set), *fv.true_grade});
  }
  const MlpModel model = train_mlp(data, mlp_options(a));
  write_text(a.out, save_mlp(model, set));
  RunManifest run{"train-grader", grader_config(a), {a.features}, {a.out}, a.seed};
  run.write(a.out + ".run");
  std::cout << "trained grader for " << model.epochs_run << " epochs; error "
            << num(model.initial_error) << " -> " << num(model.final_error) << "\n";
  return 0;
}

struct GradeArgs {
  std::string grader;
  std::string features;
  std::string out;
  bool rule = false;
};

int run_grade(const GradeArgs& a) {
  if (!a.rule && a.grader.empty()) throw Error("grade needs --grader or --rule");
  std::optional<std::pair<MlpModel, FeatureSet>> model;
  if (!a.rule) model = load_mlp(read_text(a.grader));
  std::string out = "subject_id,predicted_grade,true_grade\n";
  for (const IbiFeatureVector& fv : load_features(a.features)) {
    const HieGrade g =
        a.rule ? rule_grade(fv) : predict(model->first, grader_inputs(fv, model->second));
    out += fv.subject_id + "," + std::to_string(g.value()) + "," +
           (fv.true_grade ? std::to_string(fv.true_grade->value()) : std::string()) + "\n";
  }
  write_text(a.out, out);
  RunManifest run{"grade", {{"rule", a.rule ? "true" : "false"}}, {a.features}, {a.out}, {}};
  if (!a.rule) run.inputs.push_back(a.grader);
  run.write(a.out + ".run");
  std::cout << out;
  return 0;
}

int run_crossval(const GraderArgs& a) {
  const FeatureSet set = parse_feature_set(a.feature_set);
  const LosoResult r = loso_crossval(load_features(a.features), set, mlp_options(a));
  const fs::path dir = ensure_dir(a.out);
  std::string predictions = "subject_id,actual,predicted\n";
  for (const SubjectPrediction& p : r.predictions) {
    predictions += p.subject_id + "," + std::to_string(p.actual.value()) + "," +
                   std::to_string(p.predicted.value()) + "\n";
  }
  char report[256];
  std::snprintf(report, sizeof report,
                "feature_set = %s\naccuracy = %.17g\ncorrect = %d\ntotal = %d\n",
                feature_set_name(set).c_str(), r.accuracy, r.confusion.correct(),
                r.confusion.total());
  write_text(dir / "accuracy.txt", report);
  write_text(dir / "confusion.csv", r.confusion.to_csv());
  write_text(dir / "predictions.csv", predictions);
  RunManifest run{"crossval", grader_config(a), {a.features},
                  {"accuracy.txt", "confusion.csv", "predictions.csv"}, a.seed};
  run.write(dir / "crossval.run");
  std::printf("LOSO accuracy %.2f%% (%d/%d)\n", 100.0 * r.accuracy, r.confusion.correct(),
              r.confusion.total());
  return 0;
}

// --- plotdata --------------------------------------------------------------

struct PlotdataArgs {
  std::string features;
  std::string out_dir;
};

int run_plotdata(const PlotdataArgs& a) {
  const std::vector<IbiFeatureVector> rows = load_features(a.features);
  for (const IbiFeatureVector& fv : rows) {
    if (!fv.true_grade) {
      throw Error(a.features + ": subject '" + fv.subject_id + "' has an unknown grade");
    }
  }
  const fs::path dir = ensure_dir(a.out_dir);
  RunManifest run{"plotdata", {}, {a.features}, {}, {}};
  std::string summary = "grade,feature,n,min,p2.5,q1,median,q3,p97.5,max\n";
  for (int g = 1; g <= HieGrade::kCount; ++g) {
    std::vector<const IbiFeatureVector*> sel;
    for (const IbiFeatureVector& fv : rows) {
      if (fv.true_grade->value() == g) sel.push_back(&fv);
    }
    if (sel.empty()) continue;
    for (const char* feature : {"ibi_percent", "max_ibi"}) {
      const bool is_max = std::string_view(feature) == "max_ibi";
      std::string csv = is_max ? "subject_id,max_ibi_s,ln_max_ibi\n" : "subject_id,ibi_percent\n";
      std::vector<double> values;
      for (const IbiFeatureVector* fv : sel) {
        const double v = is_max ? fv->max_ibi_s : fv->ibi_percent;
        values.push_back(v);
        csv += fv->subject_id + "," + num(v);
        if (is_max) csv += "," + (v > 0.0 ? num(log_feature(v)) : std::string());
        csv += "\n";
      }
      const std::string file = "grade" + std::to_string(g) + "_" + feature + ".csv";
      write_text(dir / file, csv);
      run.outputs.push_back(file);
      summary += std::to_string(g) + "," + feature + "," + std::to_string(values.size());
      for (double p : {0.0, 0.025, 0.25, 0.5, 0.75, 0.975, 1.0}) {
        summary += "," + num(quantile(values, p));
      }
      summary += "\n";
    }
  }
  write_text(dir / "summary.csv", summary);
  run.outputs.push_back("summary.csv");
  run.write(dir / "plotdata.run");
  std::cout << summary;
  return 0;
}

}  // namespace
}  // namespace neoburst::tools

int main(int argc, char** argv) {
  using namespace neoburst::tools;
  CLI::App app{"Inter-burst interval detection and HIE grading for neonatal EEG", "neoburst"};
  app.set_version_flag("--version", NEOBURST_VERSION);
  app.set_config("--config", "", "key = value file supplying options not given on the command line");
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic graded corpus");
  simulate->add_option("--n", sim.n, "Number of subjects")->capture_default_str();
  simulate->add_option("--counts", sim.counts, "Subjects per grade 1..4")
      ->delimiter(',')
      ->expected(4)
      ->capture_default_str();
  simulate->add_option("--epoch-s", sim.epoch_s, "Epoch length in seconds")->capture_default_str();
  simulate->add_option("--fs", sim.fs_hz, "Sampling rate in Hz")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Base seed")->envname("NEOBURST_SEED")->capture_default_str();
  simulate->add_option("--out-dir", sim.out_dir, "Output directory")->required();
  simulate->add_option("--format", sim.format, "Recording format")
      ->check(CLI::IsMember({"csv", "edf"}))
      ->capture_default_str();
  simulate->add_option("--truth-masks", sim.truth, "One shared truth mask or one per channel")
      ->check(CLI::IsMember({"summary", "channels"}))
      ->capture_default_str();

  TrainDetectorArgs td;
  auto* train_det = app.add_subcommand("train-detector", "Train the inter-burst detector");
  train_det->add_option("--corpus", td.corpus, "Corpus manifest.csv")->required();
  train_det->add_option("--out", td.out, "Model file")->required();
  train_det->add_option("--svm-c", td.svm_c, "SVM regularisation C")->capture_default_str();
  train_det->add_option("--k", td.k, "Number of mRMR-selected features")->capture_default_str();
  train_det->add_option("--min-interburst-s", td.min_interburst_s)->capture_default_str();
  train_det->add_option("--min-burst-s", td.min_burst_s)->capture_default_str();
  train_det->add_option("--seed", td.seed)->envname("NEOBURST_SEED")->capture_default_str();

  DetectArgs det;
  auto* detect_cmd = app.add_subcommand("detect", "Detect inter-burst masks");
  detect_cmd->add_option("--model", det.model, "Detector model")->required();
  auto* in_opt = detect_cmd->add_option("--in", det.in, "Single recording (.csv or .edf)");
  auto* corpus_opt = detect_cmd->add_option("--corpus", det.corpus, "Corpus manifest.csv");
  in_opt->excludes(corpus_opt);
  detect_cmd->add_option("--out-dir", det.out_dir, "Directory for masks")->required();

  FeaturesArgs feat;
  auto* features = app.add_subcommand("features", "Compute IBI% and max-IBI per subject");
  features->add_option("--masks", feat.masks, "masks.csv from detect, or summary mask files")
      ->required();
  features->add_option("--out", feat.out, "Features CSV")->required();
  features->add_flag("--plain-max", feat.plain_max, "Use the longest IBI instead of max - min");

  GraderArgs tg;
  auto* train_grader = app.add_subcommand("train-grader", "Train the MLP grader");
  GraderArgs cv;
  auto* crossval = app.add_subcommand("crossval", "Leave-one-subject-out evaluation");
  for (auto [cmd, args] : {std::pair{train_grader, &tg}, std::pair{crossval, &cv}}) {
    cmd->add_option("--features", args->features, "Features CSV")->required();
    cmd->add_option("--theta", args->theta, "Stop at this % change of the error per epoch")
        ->capture_default_str();
    cmd->add_option("--seed", args->seed)->envname("NEOBURST_SEED")->capture_default_str();
    cmd->add_option("--max-epochs", args->max_epochs)->capture_default_str();
    cmd->add_option("--feature-set", args->feature_set)
        ->check(CLI::IsMember({"both", "ibi_percent", "max_ibi"}))
        ->capture_default_str();
  }
  train_grader->add_option("--out", tg.out, "Model file")->required();
  crossval->add_option("--out", cv.out, "Report directory")->required();

  GradeArgs gr;
  auto* grade = app.add_subcommand("grade", "Grade subjects from a features CSV");
  grade->add_option("--grader", gr.grader, "MLP model");
  grade->add_option("--features", gr.features, "Features CSV")->required();
  grade->add_option("--out", gr.out, "Predictions CSV")->required();
  grade->add_flag("--rule", gr.rule, "Use the threshold rule instead of the MLP");

  PlotdataArgs pd;
  auto* plotdata = app.add_subcommand("plotdata", "Per-grade feature distributions");
  plotdata->add_option("--features", pd.features, "Features CSV")->required();
  plotdata->add_option("--out-dir", pd.out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*train_det) return run_train_detector(td);
    if (*detect_cmd) {
      if (det.in.empty() && det.corpus.empty()) throw neoburst::Error("detect needs --in or --corpus");
      return run_detect(det);
    }
    if (*features) return run_features(feat);
    if (*train_grader) return run_train_grader(tg);
    if (*crossval) return run_crossval(cv);
    if (*grade) return run_grade(gr);
    if (*plotdata) return run_plotdata(pd);
  } catch (const neoburst::VersionMismatchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVersion;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
