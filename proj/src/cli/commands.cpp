// Copyright 2026 The intentdiv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "intentdiv/cli.hpp"
#include "intentdiv/errors.hpp"
#include "intentdiv/metrics.hpp"
#include "intentdiv/report_io.hpp"
#include "intentdiv/slate_io.hpp"

namespace intentdiv::cli {

namespace fs = std::filesystem;

namespace {

std::ofstream OpenOut(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::ifstream OpenIn(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

std::string RequiredPath(const Json& config, const char* key) {
  std::string path = config.at(key).get<std::string>();
  if (path.empty()) throw ConfigError(std::string("'") + key + "' is required");
  return path;
}

fs::path OutDir(const Json& config) {
  return fs::path(RequiredPath(config, "out"));
}

// Writes every artifact of one arm into `dir`.
void WriteArm(const fs::path& dir, const ExperimentResult& result) {
  fs::create_directories(dir);
  {
    auto out = OpenOut(dir / "daily.csv");
    WriteDailyCsv(out, result.report);
  }
  {
    auto out = OpenOut(dir / "users.csv");
    WriteUserTotalsCsv(out, result.report);
  }
  {
    auto out = OpenOut(dir / "summary.json");
    WriteSummaryJson(out, result.report);
  }
  if (!result.report.pages.empty()) {
    auto out = OpenOut(dir / "pages.csv");
    WritePagesCsv(out, result.report.pages, CanonicalFeatureNames());
  }
  if (!result.logs.empty()) {
    auto out = OpenOut(dir / "logs.jsonl");
    WriteSessionLogs(out, result.logs);
  }
  if (!result.examples.examples.empty()) {
    auto out = OpenOut(dir / "examples.jsonl");
    WriteDataset(out, result.examples);
  }
}

void WriteCompare(const fs::path& path, const ExperimentReport& treatment,
                  const ExperimentReport& control, const Json& config) {
  const auto rows = compare_arms(treatment, control, config.at("resamples").get<std::size_t>(),
                                 config.at("seed").get<std::uint64_t>());
  auto out = OpenOut(path);
  WriteCompareCsv(out, rows);
}

const ArmDelta& RowFor(const std::vector<ArmDelta>& rows, const std::string& metric) {
  for (const ArmDelta& r : rows) {
    if (r.metric == metric) return r;
  }
  throw InputError("missing metric " + metric);
}

ExperimentReport LoadArm(const fs::path& dir) {
  ExperimentReport report;
  {
    auto in = OpenIn(dir / "summary.json");
    ReadSummaryJson(in, (dir / "summary.json").string(), report);
  }
  {
    auto in = OpenIn(dir / "users.csv");
    report.users = ReadUserTotalsCsv(in, (dir / "users.csv").string());
  }
  if (report.users.size() != report.n_users) {
    throw DataError((dir / "users.csv").string() + ": user count does not match summary.json");
  }
  const fs::path pages = dir / "pages.csv";
  if (!fs::exists(pages)) {
    throw DataError(pages.string() + " missing; run simulate with write_pages enabled");
  }
  auto in = OpenIn(pages);
  report.pages = ReadPagesCsv(in, pages.string(), CanonicalFeatureNames().size());
  return report;
}

}  // namespace

void RunDiversify(const Json& config) {
  const DiversifierConfig div = DiversifierConfigFrom(config);
  const std::string input_path = RequiredPath(config, "input");
  const fs::path out_dir = OutDir(config);
  auto in = OpenIn(input_path);
  const SlateInput input = ReadSlateInput(in, input_path);
  RankedSlate slate;
  try {
    slate = diversify(input.prior, input.candidates, div);
  } catch (const InputError& e) {
    throw DataError(input_path + ": " + e.what());
  }
  WriteResolvedConfig(config, out_dir);
  auto out = OpenOut(out_dir / "slate.jsonl");
  WriteSlate(out, input, slate);
}

void RunSimulate(const Json& config) {
  SimConfig base = SimConfigFrom(config);
  const std::string arm = config.at("arm").get<std::string>();
  if (arm != "control" && arm != "treatment" && arm != "both") {
    throw ConfigError("arm must be control, treatment or both");
  }
  base.record_pages = config.at("write_pages").get<bool>();
  base.record_logs = config.at("write_logs").get<bool>();
  base.collect_examples = config.at("write_examples").get<bool>();
  const fs::path out_dir = OutDir(config);
  WriteResolvedConfig(config, out_dir);

  SimConfig control_cfg = base;
  control_cfg.policy.arm = Arm::kControl;
  SimConfig treatment_cfg = base;
  treatment_cfg.policy.arm = Arm::kTreatment;

  if (arm == "control") {
    WriteArm(out_dir / "control", run_experiment(control_cfg));
    return;
  }
  if (arm == "treatment") {
    WriteArm(out_dir / "treatment", run_experiment(treatment_cfg));
    return;
  }
  ExperimentResult control = run_experiment(control_cfg);
  ExperimentResult treatment = run_experiment(treatment_cfg, &control.labels_by_day);
  WriteArm(out_dir / "control", control);
  WriteArm(out_dir / "treatment", treatment);
  WriteCompare(out_dir / "compare.csv", treatment.report, control.report, config);
}

void RunSweepGamma(const Json& config) {
  SimConfig base = SimConfigFrom(config);
  std::vector<double> gammas = config.at("gammas").get<std::vector<double>>();
  if (gammas.empty()) throw ConfigError("gammas must not be empty");
  for (double g : gammas) {
    if (!(g > 0.0) || !std::isfinite(g)) throw ConfigError("every gamma must be > 0");
  }
  std::sort(gammas.begin(), gammas.end());
  if (std::adjacent_find(gammas.begin(), gammas.end()) != gammas.end()) {
    throw ConfigError("gammas must be distinct");
  }
  const fs::path out_dir = OutDir(config);
  WriteResolvedConfig(config, out_dir);

  SimConfig control_cfg = base;
  control_cfg.policy.arm = Arm::kControl;
  const ExperimentResult control = run_experiment(control_cfg);

  std::size_t workers = config.at("workers").get<std::size_t>();
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, gammas.size());

  // Each point writes only its own slot; the merge below runs in grid order.
  std::vector<ExperimentReport> reports(gammas.size());
  std::vector<std::exception_ptr> errors(gammas.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < gammas.size(); k = next++) {
      try {
        SimConfig cfg = base;
        cfg.policy.arm = Arm::kTreatment;
        cfg.policy.gamma = gammas[k];
        reports[k] = run_experiment(cfg, &control.labels_by_day).report;
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  WriteArm(out_dir / "control", control);
  const std::size_t resamples = config.at("resamples").get<std::size_t>();
  const std::uint64_t seed = config.at("seed").get<std::uint64_t>();
  std::vector<SweepRow> rows;
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    const ExperimentReport& r = reports[k];
    const auto deltas = compare_arms(r, control.report, resamples, seed);
    const fs::path dir = out_dir / ("gamma_" + FormatNumber(gammas[k]));
    ExperimentResult view;
    view.report = r;
    WriteArm(dir, view);
    {
      auto out = OpenOut(dir / "compare.csv");
      WriteCompareCsv(out, deltas);
    }
    SweepRow row;
    row.gamma = gammas[k];
    row.diversity = MetricValue(FindMetric("effective_intents"), r);
    row.novelty = MetricValue(FindMetric("novel_impressions"), r);
    row.relevance = MetricValue(FindMetric("mean_relevance"), r);
    row.dau = MetricValue(FindMetric("dau"), r);
    row.expected_dau = MetricValue(FindMetric("expected_dau"), r);
    row.novel_consumptions = MetricValue(FindMetric("novel_consumptions"), r);
    row.satisfaction_mean = MetricValue(FindMetric("satisfaction_mean"), r);
    row.dau_delta = RowFor(deltas, "dau");
    row.expected_dau_delta = RowFor(deltas, "expected_dau");
    rows.push_back(row);
  }
  auto out = OpenOut(out_dir / "sweep.csv");
  WriteSweepCsv(out, rows);
}

void RunTrainIntent(const Json& config) {
  const TrainConfig train = TrainConfigFrom(config);
  const double holdout = config.at("holdout").get<double>();
  if (!(holdout >= 0.0 && holdout < 1.0)) throw ConfigError("holdout must lie in [0, 1)");
  const std::string dataset_path = RequiredPath(config, "dataset");
  const fs::path out_dir = OutDir(config);

  auto in = OpenIn(dataset_path);
  Dataset data = ReadDataset(in, dataset_path);
  // Records are in logging order, so the held-out tail is the most recent data.
  const std::size_t n = data.examples.size();
  const std::size_t n_eval = static_cast<std::size_t>(std::floor(holdout * static_cast<double>(n)));
  if (n - n_eval == 0) throw DataError(dataset_path + ": no training examples");
  Dataset train_set = data;
  train_set.examples.assign(data.examples.begin(), data.examples.end() - n_eval);
  Dataset eval_set = data;
  if (n_eval > 0) {
    eval_set.examples.assign(data.examples.end() - n_eval, data.examples.end());
  }

  IntentModel model;
  Evaluation eval;
  std::vector<std::vector<double>> predictions;
  try {
    model = TrainIntentModel(train_set, train);
    eval = evaluate(model, eval_set);
    predictions = PredictAll(model, data);
  } catch (const InputError& e) {
    throw DataError(dataset_path + ": " + e.what());
  }

  WriteResolvedConfig(config, out_dir);
  {
    auto out = OpenOut(out_dir / "model.json");
    SaveModel(out, model);
  }
  {
    auto out = OpenOut(out_dir / "evaluation.csv");
    out << "intent,examples,log_loss,accuracy,auc,calibration_ratio,mean_prediction,mean_label\n";
    for (const IntentEvaluation& e : eval.per_intent) {
      out << e.intent << ',' << eval.examples << ',' << FormatNumber(eval.log_loss) << ','
          << FormatNumber(eval.accuracy) << ',' << FormatNumber(e.auc) << ','
          << FormatNumber(e.calibration_ratio) << ',' << FormatNumber(e.mean_prediction) << ','
          << FormatNumber(e.mean_label) << '\n';
    }
  }
  {
    auto out = OpenOut(out_dir / "reliability.csv");
    out << "intent,bin,lower,upper,count,mean_prediction,mean_label\n";
    for (const IntentEvaluation& e : eval.per_intent) {
      for (std::size_t b = 0; b < e.reliability.size(); ++b) {
        const ReliabilityBin& bin = e.reliability[b];
        out << e.intent << ',' << b << ',' << FormatNumber(bin.lower) << ','
            << FormatNumber(bin.upper) << ',' << bin.count << ','
            << FormatNumber(bin.mean_prediction) << ',' << FormatNumber(bin.mean_label) << '\n';
      }
    }
  }
  {
    // Correlation of each raw feature with the predicted first intent.
    std::vector<double> first(predictions.size());
    for (std::size_t i = 0; i < predictions.size(); ++i) first[i] = predictions[i][0];
    auto out = OpenOut(out_dir / "correlations.csv");
    out << "feature,r\n";
    for (const FeatureCorrelation& c : feature_correlations(data, first)) {
      out << c.feature << ',' << FormatNumber(c.r) << '\n';
    }
  }
}

void RunAnalyze(const Json& config) {
  const TrainConfig train = TrainConfigFrom(config);
  const std::size_t buckets = config.at("buckets").get<std::size_t>();
  if (buckets == 0) throw ConfigError("buckets must be >= 1");
  const fs::path control_dir = RequiredPath(config, "control_dir");
  const fs::path treatment_dir = RequiredPath(config, "treatment_dir");
  const fs::path out_dir = OutDir(config);

  ExperimentReport control = LoadArm(control_dir);
  ExperimentReport treatment = LoadArm(treatment_dir);

  IntentModel model;
  const std::string model_path = config.at("model").get<std::string>();
  try {
    if (!model_path.empty()) {
      auto in = OpenIn(model_path);
      model = LoadModel(in, model_path);
    } else {
      const fs::path examples = control_dir / "examples.jsonl";
      auto in = OpenIn(examples);
      model = TrainIntentModel(ReadDataset(in, examples.string()), train);
    }
  } catch (const InputError& e) {
    throw DataError(e.what());
  }
  if (model.feature_names != CanonicalFeatureNames()) {
    throw DataError("analysis model features do not match the simulator's page features");
  }
  std::vector<double> scratch(model.feature_names.size());
  std::vector<double> probs(model.intents.size());
  for (ExperimentReport* report : {&control, &treatment}) {
    for (PageRecord& p : report->pages) {
      model.PredictInto(p.features, scratch, probs);
      p.predicted_explore = probs[0];
    }
  }

  const std::size_t resamples = config.at("resamples").get<std::size_t>();
  const std::uint64_t seed = config.at("seed").get<std::uint64_t>();
  WriteResolvedConfig(config, out_dir);
  {
    auto out = OpenOut(out_dir / "analysis_model.json");
    SaveModel(out, model);
  }
  {
    auto out = OpenOut(out_dir / "compare.csv");
    WriteCompareCsv(out, compare_arms(treatment, control, resamples, seed));
  }
  {
    auto out = OpenOut(out_dir / "slices.csv");
    WriteSliceCsv(out, slice_by_predicted_intent(control.pages, treatment.pages, buckets));
  }
  {
    auto out = OpenOut(out_dir / "slice_trends.csv");
    WriteSliceTrendCsv(out, SliceTrends(control.pages, treatment.pages, buckets, resamples, seed));
  }
}

namespace {

// Flags shared by every subcommand.
struct CommonFlags {
  std::string config_path;
  std::vector<std::string> assignments;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

void AddCommon(CLI::App* sub, CommonFlags& flags) {
  sub->add_option("--config", flags.config_path, "Flat JSON config file");
  sub->add_option("--set", flags.assignments, "Override a config key: key=value")
      ->type_name("KEY=VALUE");
  sub->add_option("--seed", flags.seed, "Root random seed");
  sub->add_option("--out", flags.out, "Output directory");
}

template <typename T>
void Put(Json& overrides, const char* key, const std::optional<T>& value) {
  if (value) overrides[key] = *value;
}

}  // namespace

int Main(int argc, char** argv) {
  CLI::App app{"Intent-aware slate diversification toolkit"};
  app.require_subcommand(1);

  CommonFlags common;
  std::optional<double> gamma;
  std::optional<std::string> mode;
  std::optional<std::string> tie_break;
  std::optional<std::string> arm;
  std::optional<std::string> input;
  std::optional<std::size_t> slate_size;
  std::optional<std::size_t> users;
  std::optional<std::size_t> days;
  std::optional<std::vector<double>> gammas;
  std::optional<std::size_t> workers;
  std::optional<std::string> dataset;
  std::optional<int> epochs;
  std::optional<double> holdout;
  std::optional<std::string> control_dir;
  std::optional<std::string> treatment_dir;
  std::optional<std::string> model;
  std::optional<std::size_t> buckets;
  std::optional<std::size_t> resamples;

  auto* div = app.add_subcommand("diversify", "Rank one candidate file");
  AddCommon(div, common);
  div->add_option("input", input, "Line-delimited prior and candidate records");
  div->add_option("--gamma", gamma, "Diversification strength (> 0)");
  div->add_option("--mode", mode, "paper-literal | exact-bayes | unnormalized");
  div->add_option("--tie-break", tie_break, "lowest-item-id | highest-quality");
  div->add_option("--slate-size", slate_size, "Positions to fill; 0 ranks all");

  auto* sim = app.add_subcommand("simulate", "Run control and/or treatment arms");
  AddCommon(sim, common);
  sim->add_option("--arm", arm, "control | treatment | both");
  sim->add_option("--gamma", gamma, "Treatment diversification strength");
  sim->add_option("--mode", mode, "Treatment posterior mode");
  sim->add_option("--users", users, "Number of simulated users");
  sim->add_option("--days", days, "Number of simulated days");
  sim->add_option("--resamples", resamples, "Bootstrap resamples for compare.csv");

  auto* sweep = app.add_subcommand("sweep-gamma", "Paired runs over a gamma grid");
  AddCommon(sweep, common);
  sweep->add_option("--gammas", gammas, "Grid of gamma values")->expected(1, -1);
  sweep->add_option("--mode", mode, "Treatment posterior mode");
  sweep->add_option("--users", users, "Number of simulated users");
  sweep->add_option("--days", days, "Number of simulated days");
  sweep->add_option("--workers", workers, "Concurrent sweep points; 0 uses all cores");
  sweep->add_option("--resamples", resamples, "Bootstrap resamples per point");

  auto* trn = app.add_subcommand("train-intent", "Fit and evaluate the intent model");
  AddCommon(trn, common);
  trn->add_option("dataset", dataset, "Line-delimited labeled examples");
  trn->add_option("--epochs", epochs, "Training epochs (>= 1)");
  trn->add_option("--holdout", holdout, "Trailing fraction held out for evaluation");

  auto* ana = app.add_subcommand("analyze", "Compare two simulated arms and slice by intent");
  AddCommon(ana, common);
  ana->add_option("--control", control_dir, "Control arm directory from simulate");
  ana->add_option("--treatment", treatment_dir, "Treatment arm directory from simulate");
  ana->add_option("--model", model, "Intent model JSON; trained on control examples if absent");
  ana->add_option("--buckets", buckets, "Number of prediction buckets");
  ana->add_option("--resamples", resamples, "Bootstrap resamples");
  ana->add_option("--epochs", epochs, "Analysis model training epochs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const std::string command = app.get_subcommands().front()->get_name();
    Json config = DefaultConfig(command);
    if (!common.config_path.empty()) {
      MergeConfig(config, LoadConfigFile(common.config_path), common.config_path);
    }
    Json overrides = Json::object();
    for (const std::string& text : common.assignments) {
      auto [key, value] = ParseAssignment(text);
      overrides[key] = value;
    }
    Put(overrides, "seed", common.seed);
    Put(overrides, "out", common.out);
    Put(overrides, "gamma", gamma);
    Put(overrides, "posterior_mode", mode);
    Put(overrides, "tie_break", tie_break);
    Put(overrides, "arm", arm);
    Put(overrides, "input", input);
    Put(overrides, "slate_size", slate_size);
    Put(overrides, "n_users", users);
    Put(overrides, "n_days", days);
    Put(overrides, "gammas", gammas);
    Put(overrides, "workers", workers);
    Put(overrides, "dataset", dataset);
    Put(overrides, "epochs", epochs);
    Put(overrides, "holdout", holdout);
    Put(overrides, "control_dir", control_dir);
    Put(overrides, "treatment_dir", treatment_dir);
    Put(overrides, "model", model);
    Put(overrides, "buckets", buckets);
    Put(overrides, "resamples", resamples);
    MergeConfig(config, overrides, "command line");

    if (command == "diversify") {
      RunDiversify(config);
    } else if (command == "simulate") {
      RunSimulate(config);
    } else if (command == "sweep-gamma") {
      RunSweepGamma(config);
    } else if (command == "train-intent") {
      RunTrainIntent(config);
    } else {
      RunAnalyze(config);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InputError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace intentdiv::cli
