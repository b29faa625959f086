// Copyright 2026 The Judgerank Authors.
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

#include "cli.h"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "judgerank/bias.h"
#include "judgerank/btelo.h"
#include "judgerank/core.h"
#include "judgerank/correlation.h"
#include "judgerank/dataset_io.h"
#include "judgerank/digest.h"
#include "judgerank/errors.h"
#include "judgerank/judgeclient.h"
#include "judgerank/random.h"
#include "judgerank/simjudge.h"
#include "judgerank/text_io.h"
#include "judgerank/tournament.h"
#include "judgerank/transitivity.h"
#include "judgerank/triplet_kernels.h"

namespace judgerank::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

// Every flag of every subcommand lives here; each subcommand registers the
// subset it understands, so anything else is a usage error.
struct Options {
  // shared
  std::string dataset;
  std::string out = ".";
  std::uint64_t seed = 0;
  double tie_lo = 0.475;
  double tie_hi = 0.525;
  bool strict = false;
  double epsilon = kDefaultEpsilon;
  std::string scheme = "soft";
  std::string anchor_model;
  double anchor_elo = kDefaultAnchorElo;
  std::string pd_mode = "antisym";
  int jobs = 0;
  std::string models;  // comma list

  // ingest
  std::vector<std::string> samples;

  // metrics
  std::string triplet;
  bool heatmap = false;
  std::size_t bins = 35;
  double sigma = 1.0;
  std::string reference_model;
  bool serial = false;

  // bias
  std::size_t pd_bins = 6;
  std::size_t hist_bins = 20;
  std::string hist_source = "debiased";

  // fit and tournaments
  double tol = 1e-10;
  int max_iter = 10000;
  bool allow_nonconvergence = false;
  std::string sim_config;

  // judge
  std::string instructions;
  std::string outputs_dir;
  std::string judge_model;
  std::string base_url = "https://api.openai.com/v1";
  std::string api_key_env = "OPENAI_API_KEY";
  std::string cache_dir;
  int calls_per_order = 2;
  bool ablation_single_call = false;
  int max_in_flight = 4;
  int max_retries = 3;
  bool skip_probe = false;

  // baseline
  std::string baseline;

  // simulate
  std::size_t num_models = 5;
  std::size_t num_instructions = 100;
  double gap = 0.5;
  std::vector<double> quality;
  double jitter = 0.0;
  double bias = 0.0;
  double cyclic = 0.0;
  std::string skew = "auto";
  double noise = 0.0;

  // correlate
  std::string ranking_a;
  std::string ranking_b;
  std::string kind_a = "auto";
  std::string kind_b = "auto";
};

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

std::string Fixed(double value, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

TieThresholds Thresholds(const Options& o) {
  TieThresholds t = o.strict ? TieThresholds::Strict()
                             : TieThresholds{o.tie_lo, o.tie_hi};
  t.Validate();
  return t;
}

Triplet ParseTriplet(const std::string& text, const PreferenceDataset& ds) {
  std::vector<std::string> parts = SplitList(text);
  if (parts.size() != 3 || parts[0] == parts[1] || parts[1] == parts[2] ||
      parts[0] == parts[2]) {
    throw Error(ErrorCode::kValidation,
                "--triplet needs three distinct models, got '" + text + "'");
  }
  for (const std::string& m : parts) {
    if (!ds.HasModel(m)) {
      throw Error(ErrorCode::kValidation, "unknown model in --triplet: " + m);
    }
  }
  return {parts[0], parts[1], parts[2]};
}

// Mean preference of each model, against `reference` when given, otherwise
// against every opponent, over every available record.
std::vector<double> ReferenceWinRates(const PreferenceDataset& ds,
                                      const std::string& reference) {
  if (!reference.empty() && !ds.HasModel(reference)) {
    throw Error(ErrorCode::kValidation, "unknown reference model " + reference);
  }
  std::map<ModelId, std::pair<double, std::size_t>> acc;
  for (const auto& [key, pair] : ds.pairs()) {
    for (const ModelId* m : {&pair.model_a, &pair.model_b}) {
      const ModelId& other = *m == pair.model_a ? pair.model_b : pair.model_a;
      if (!reference.empty() && other != reference) continue;
      acc[*m].first += pair.PreferenceFor(*m);
      acc[*m].second += 1;
    }
  }
  std::vector<double> rates;
  for (const ModelId& m : ds.models()) {
    if (m == reference) {
      rates.push_back(0.5);
      continue;
    }
    auto it = acc.find(m);
    if (it == acc.end() || it->second.second == 0) {
      throw Error(ErrorCode::kMissingComparison,
                  "no records to compute a win rate for " + m);
    }
    rates.push_back(it->second.first / static_cast<double>(it->second.second));
  }
  return rates;
}

class Session {
 public:
  Session(const std::vector<std::string>& argv, std::ostream& out)
      : argv_(argv), out_(out), start_(std::chrono::steady_clock::now()) {}

  void set_subcommand(CLI::App* sub) { sub_ = sub; }
  std::ostream& out() { return out_; }

  void AddInput(const fs::path& path) { inputs_.push_back(path); }

  fs::path OutDir(const std::string& dir) {
    fs::create_directories(dir);
    return dir;
  }

  void Write(const fs::path& path, const std::string& content) {
    WriteFileAtomic(path, content);
    outputs_.push_back(path.filename().string());
  }

  void WriteManifest(const fs::path& dir) {
    ordered_json manifest;
    manifest["tool"] = "judgerank";
    manifest["version"] = JUDGERANK_VERSION;
    manifest["subcommand"] = sub_->get_name();
    manifest["argv"] = argv_;
    ordered_json config = ordered_json::object();
    for (const CLI::Option* opt : sub_->get_options()) {
      if (opt == sub_->get_help_ptr()) continue;
      std::string name = opt->get_name();
      const bool flag = opt->get_expected_min() == 0;
      if (flag) {
        config[name] = opt->count() > 0;
      } else if (opt->count() > 0) {
        std::vector<std::string> results = opt->results();
        if (results.size() == 1) {
          config[name] = results.front();
        } else {
          config[name] = results;
        }
      } else {
        config[name] = opt->get_default_str();
      }
    }
    manifest["config"] = config;
    ordered_json inputs = ordered_json::object();
    for (const fs::path& p : inputs_) {
      if (fs::is_regular_file(p)) {
        inputs[p.string()] = "sha256:" + Sha256File(p);
      } else if (fs::is_directory(p)) {
        std::vector<fs::path> files;
        for (const auto& e : fs::recursive_directory_iterator(p)) {
          if (e.is_regular_file()) files.push_back(e.path());
        }
        std::sort(files.begin(), files.end());
        for (const fs::path& f : files) {
          inputs[f.string()] = "sha256:" + Sha256File(f);
        }
      }
    }
    manifest["inputs"] = inputs;
    manifest["outputs"] = outputs_;
    manifest["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      start_)
            .count();
    WriteFileAtomic(dir / "manifest.json", manifest.dump(2) + "\n");
  }

 private:
  std::vector<std::string> argv_;
  std::ostream& out_;
  std::chrono::steady_clock::time_point start_;
  CLI::App* sub_ = nullptr;
  std::vector<fs::path> inputs_;
  std::vector<std::string> outputs_;
};

PreferenceDataset LoadInputDataset(Session& run, const Options& o) {
  run.AddInput(o.dataset);
  PreferenceDataset ds = LoadDataset(o.dataset);
  if (!o.models.empty()) {
    std::vector<ModelId> keep = SplitList(o.models);
    for (const ModelId& m : keep) {
      if (!ds.HasModel(m)) {
        throw Error(ErrorCode::kValidation, "unknown model in --models: " + m);
      }
    }
    ds = ds.RestrictToModels(keep);
  }
  return ds;
}

// --- ingest -----------------------------------------------------------------

void Ingest(Session& run, const Options& o) {
  std::vector<PreferenceSample> samples;
  for (const std::string& file : o.samples) {
    run.AddInput(file);
    auto part = LoadSamples(file);
    samples.insert(samples.end(), part.begin(), part.end());
  }
  PreferenceDataset ds = AggregateSamples(samples);
  fs::path dir = run.OutDir(o.out);
  run.Write(dir / "dataset.csv", DatasetToCsv(ds));
  run.WriteManifest(dir);
  run.out() << "samples=" << samples.size() << " pairs=" << ds.size()
            << " models=" << ds.models().size()
            << " instructions=" << ds.instructions().size() << "\n";
}

// --- metrics ----------------------------------------------------------------

std::string SummaryRow(const Triplet& t, const DatasetMetrics& m) {
  std::string row = CsvField(t.a) + ',' + CsvField(t.b) + ',' + CsvField(t.c);
  if (m.complete_instructions == 0) return row + ",,,0,0\n";
  return row + ',' + FormatDouble(m.pnt_percent) + ',' +
         FormatDouble(m.mean_sntd) + ',' +
         std::to_string(m.complete_instructions) + ',' +
         std::to_string(m.non_transitive) + '\n';
}

constexpr const char* kSummaryHeader =
    "a,b,c,pnt_percent,mean_sntd,complete_instructions,non_transitive\n";

void Metrics(Session& run, const Options& o) {
  PreferenceDataset ds = LoadInputDataset(run, o);
  TieThresholds thresholds = Thresholds(o);
  SetParallelJobs(o.jobs);
  fs::path dir = run.OutDir(o.out);

  std::string summary = kSummaryHeader;
  if (!o.triplet.empty()) {
    Triplet t = ParseTriplet(o.triplet, ds);
    auto per = PerInstructionMetrics(ds, t, thresholds, o.epsilon);
    run.Write(dir / "triplet_metrics.csv", TripletMetricsToCsv(per));
    DatasetMetrics m = ComputeDatasetMetrics(ds, t, thresholds, o.epsilon);
    summary += SummaryRow(t, m);
    run.out() << "PNT=" << Fixed(m.pnt_percent, 4)
              << "% SNTD=" << Fixed(m.mean_sntd, 6)
              << " instructions=" << m.complete_instructions << "\n";
  } else {
    std::vector<Triplet> triplets = AllCombinations(ds.models());
    std::vector<DatasetMetrics> metrics;
    if (o.serial) {
      metrics = EvaluateTripletsSerial(ds, triplets, thresholds, o.epsilon);
    } else {
      PreferenceTensor tensor = PreferenceTensor::FromDataset(ds);
      std::map<ModelId, std::uint32_t> index;
      for (std::size_t i = 0; i < ds.models().size(); ++i) {
        index[ds.models()[i]] = static_cast<std::uint32_t>(i);
      }
      std::vector<TripletIndex> idx;
      for (const Triplet& t : triplets) {
        idx.push_back({index[t.a], index[t.b], index[t.c]});
      }
      metrics = EvaluateTripletsParallel(tensor, idx, thresholds, o.epsilon);
    }
    for (std::size_t i = 0; i < triplets.size(); ++i) {
      summary += SummaryRow(triplets[i], metrics[i]);
    }
    run.out() << "triplets=" << triplets.size() << "\n";
  }
  run.Write(dir / "summary.csv", summary);

  if (o.heatmap) {
    HeatmapOptions h;
    h.bins = o.bins;
    h.smoothing_sigma = o.sigma;
    h.thresholds = thresholds;
    h.epsilon = o.epsilon;
    h.parallel = !o.serial;
    std::vector<double> rates = ReferenceWinRates(ds, o.reference_model);
    HeatmapGrid grid = ComputeHeatmapGrid(ds, rates, h);
    run.Write(dir / "heatmap.csv", HeatmapToCsv(grid));
  }
  run.WriteManifest(dir);
}

// --- bias -------------------------------------------------------------------

void Bias(Session& run, const Options& o) {
  PreferenceDataset ds = LoadInputDataset(run, o);
  TieThresholds thresholds = Thresholds(o);
  PdMode mode = ParsePdMode(o.pd_mode);
  fs::path dir = run.OutDir(o.out);

  std::string consistency = "instruction_id,model_a,model_b,consistent\n";
  std::size_t two_order = 0;
  std::size_t consistent = 0;
  for (const auto& [key, pair] : ds.pairs()) {
    if (pair.single_order()) continue;
    ConsistencyRecord r = PairConsistency(pair, thresholds);
    ++two_order;
    consistent += r.consistent;
    consistency += CsvField(r.instruction_id) + ',' + CsvField(r.model_a) +
                   ',' + CsvField(r.model_b) + ',' +
                   (r.consistent ? "1" : "0") + '\n';
  }
  run.Write(dir / "consistency.csv", consistency);

  std::vector<Triplet> triplets;
  if (!o.triplet.empty()) {
    Triplet t = ParseTriplet(o.triplet, ds);
    triplets.push_back(t);
    std::string pd = "instruction_id,pd_ab,pd_bc,pd_ac,pd_total\n";
    double pd_sum = 0.0;
    std::size_t pd_count = 0;
    for (const InstructionId& instruction : ds.instructions()) {
      auto r = TripletPositionDifference(ds, instruction, t, mode);
      if (!r) continue;
      pd += CsvField(instruction) + ',' + FormatDouble(r->pd_pairs[0]) + ',' +
            FormatDouble(r->pd_pairs[1]) + ',' +
            FormatDouble(r->pd_pairs[2]) + ',' + FormatDouble(r->pd_total) +
            '\n';
      pd_sum += r->pd_total;
      ++pd_count;
    }
    run.Write(dir / "position_difference.csv", pd);

    InstructionPartition part = PartitionInstructions(ds, t, thresholds);
    std::string partition = "instruction_id,status\n";
    for (const InstructionId& instruction : ds.instructions()) {
      const char* status = part.consistent.contains(instruction)   ? "consistent"
                           : part.ambiguous.contains(instruction) ? "ambiguous"
                                                                  : "skipped";
      partition += CsvField(instruction) + ',' + status + '\n';
    }
    run.Write(dir / "partition.csv", partition);
    run.out() << "consistent=" << part.consistent.size()
              << " ambiguous=" << part.ambiguous.size()
              << " skipped=" << part.skipped;
    if (pd_count > 0) {
      run.out() << " mean_pd="
                << Fixed(pd_sum / static_cast<double>(pd_count), 6);
    }
    run.out() << "\n";
  } else if (ds.models().size() >= 3) {
    triplets = AllCombinations(ds.models());
  }
  if (!triplets.empty()) {
    std::vector<double> edges = UniformPdEdges(o.pd_bins + 1);
    auto bins = PdBinnedNonTransitivity(ds, triplets, edges, thresholds,
                                        o.epsilon, mode);
    run.Write(dir / "pd_bins.csv", PdBinsToCsv(bins));
  }
  Histogram hist = PreferenceHistogram(ds, std::nullopt, o.hist_bins,
                                       ParseHistogramSource(o.hist_source));
  run.Write(dir / "histogram.csv", HistogramToCsv(hist));
  run.WriteManifest(dir);
  run.out() << "pairs_two_order=" << two_order
            << " pairs_consistent=" << consistent << "\n";
}

// --- fit --------------------------------------------------------------------

FitOptions MakeFitOptions(const Options& o) {
  FitOptions f;
  f.tol = o.tol;
  f.max_iter = o.max_iter;
  f.require_convergence = !o.allow_nonconvergence;
  return f;
}

EloAnchor MakeAnchor(const Options& o) {
  EloAnchor a;
  if (!o.anchor_model.empty()) a.model = o.anchor_model;
  a.value = o.anchor_elo;
  return a;
}

void PrintRanking(std::ostream& out, const EloTable& elo) {
  Ranking r = elo.ToRanking();
  for (std::size_t i = 0; i < r.size(); ++i) {
    out << (i + 1) << ". " << r.entries()[i].model << " "
        << Fixed(r.entries()[i].score, 2) << "\n";
  }
}

void Fit(Session& run, const Options& o) {
  PreferenceDataset ds = LoadInputDataset(run, o);
  LabelScheme scheme = ParseLabelScheme(o.scheme);
  WinMatrix w = BuildWinMatrix(ds, scheme);
  BtFit fit = FitBradleyTerry(w, MakeFitOptions(o));
  EloTable elo = ToElo(fit, MakeAnchor(o));
  fs::path dir = run.OutDir(o.out);
  run.Write(dir / "win_matrix.csv", WinMatrixToCsv(w));
  run.Write(dir / "elo.csv", EloTableToCsv(elo, scheme));
  run.Write(dir / "ranking.csv", RankingToCsv(elo.ToRanking()));
  run.WriteManifest(dir);
  PrintRanking(run.out(), elo);
  if (!fit.converged) {
    run.out() << "warning: fit did not converge after " << fit.iterations
              << " iterations\n";
  }
}

// --- tournaments ------------------------------------------------------------

// Owns whichever evaluator backs a tournament. Members are destroyed in
// reverse order, so the evaluator goes before what it references.
struct Source {
  std::unique_ptr<OutputCorpus> corpus;
  std::unique_ptr<JudgeClient> client;
  std::unique_ptr<PairEvaluator> evaluator;
  std::vector<ModelId> models;
  std::vector<InstructionId> instructions;
};

std::unique_ptr<JudgeClient> MakeJudgeClient(const Options& o) {
  if (o.judge_model.empty()) {
    throw Error(ErrorCode::kValidation, "--judge-model is required");
  }
  const char* key = std::getenv(o.api_key_env.c_str());
  JudgeClientOptions options;
  options.judge_model = o.judge_model;
  options.max_in_flight = o.max_in_flight;
  options.max_retries = o.max_retries;
  if (!o.cache_dir.empty()) options.cache_dir = o.cache_dir;
  auto transport = std::make_shared<HttpChatTransport>(
      o.base_url, key == nullptr ? "" : key);
  auto client = std::make_unique<JudgeClient>(options, transport);
  if (!o.skip_probe) client->ProbeIdentifiers();
  return client;
}

std::optional<std::uint64_t> AblationSeed(const Options& o) {
  if (!o.ablation_single_call) return std::nullopt;
  return SubstreamSeed(o.seed, "ablation", {});
}

std::vector<ModelId> SelectModels(const Options& o,
                                  std::vector<ModelId> available) {
  if (o.models.empty()) return available;
  std::vector<ModelId> chosen = SplitList(o.models);
  for (const ModelId& m : chosen) {
    if (std::find(available.begin(), available.end(), m) == available.end()) {
      throw Error(ErrorCode::kValidation, "unknown model in --models: " + m);
    }
  }
  return chosen;
}

Source MakeSource(Session& run, const Options& o) {
  int given = !o.dataset.empty() + !o.sim_config.empty() + !o.outputs_dir.empty();
  if (given != 1) {
    throw Error(ErrorCode::kValidation,
                "give exactly one of --dataset, --sim-config or --outputs-dir");
  }
  Source s;
  if (!o.dataset.empty()) {
    run.AddInput(o.dataset);
    PreferenceDataset ds = LoadDataset(o.dataset);
    s.models = SelectModels(o, ds.models());
    s.instructions = ds.instructions();
    s.evaluator = std::make_unique<DatasetEvaluator>(std::move(ds));
  } else if (!o.sim_config.empty()) {
    run.AddInput(o.sim_config);
    SimConfig cfg = SimConfigFromJson(ReadFile(o.sim_config));
    s.models = SelectModels(o, cfg.models);
    s.instructions = cfg.InstructionIds();
    s.evaluator = std::make_unique<SimulatedEvaluator>(std::move(cfg));
  } else {
    run.AddInput(o.instructions);
    run.AddInput(o.outputs_dir);
    s.corpus = std::make_unique<OutputCorpus>(
        OutputCorpus::Load(o.instructions, o.outputs_dir));
    std::vector<ModelId> available;
    for (const auto& [m, outputs] : s.corpus->outputs) available.push_back(m);
    s.models = SelectModels(o, available);
    for (const auto& [id, text] : s.corpus->instructions) {
      s.instructions.push_back(id);
    }
    s.client = MakeJudgeClient(o);
    s.evaluator = std::make_unique<JudgeEvaluator>(
        *s.client, *s.corpus, o.calls_per_order, AblationSeed(o));
  }
  return s;
}

TournamentOptions MakeTournamentOptions(const Options& o) {
  TournamentOptions t;
  t.scheme = ParseLabelScheme(o.scheme);
  t.fit = MakeFitOptions(o);
  t.anchor = MakeAnchor(o);
  return t;
}

void Tournament(Session& run, const Options& o, bool swim) {
  Source source = MakeSource(run, o);
  TournamentOptions options = MakeTournamentOptions(o);
  fs::path dir = run.OutDir(o.out);
  TournamentResult result;
  try {
    if (swim) {
      SwimConfig cfg;
      cfg.rng_seed = SubstreamSeed(o.seed, "swim", {});
      cfg.options = options;
      result = Swim(source.models, source.instructions, *source.evaluator, cfg);
    } else {
      result = RoundRobin(source.models, source.instructions,
                          *source.evaluator, options);
    }
  } catch (const PartialResultError& e) {
    run.Write(dir / "partial_dataset.csv", DatasetToCsv(e.collected()));
    std::string remaining = "model,opponent\n";
    for (const auto& [a, b] : e.remaining()) {
      remaining += CsvField(a) + ',' + CsvField(b) + '\n';
    }
    run.Write(dir / "remaining_pairs.csv", remaining);
    run.WriteManifest(dir);
    throw;
  }
  WriteTournamentResult(result, options.scheme, dir);
  run.Write(dir / "dataset.csv", DatasetToCsv(result.dataset));
  run.WriteManifest(dir);
  PrintRanking(run.out(), result.elo);
  run.out() << "comparisons=" << result.comparisons_made
            << " evaluations=" << source.evaluator->evaluations() << "\n";
}

// --- judge ------------------------------------------------------------------

void Judge(Session& run, const Options& o) {
  if (o.instructions.empty() || o.outputs_dir.empty()) {
    throw Error(ErrorCode::kValidation,
                "--instructions and --outputs-dir are required");
  }
  run.AddInput(o.instructions);
  run.AddInput(o.outputs_dir);
  OutputCorpus corpus = OutputCorpus::Load(o.instructions, o.outputs_dir);
  std::vector<ModelId> available;
  for (const auto& [m, outputs] : corpus.outputs) available.push_back(m);
  std::vector<ModelId> models = SelectModels(o, available);
  std::unique_ptr<JudgeClient> client = MakeJudgeClient(o);
  fs::path dir = run.OutDir(o.out);

  std::vector<PreferenceSample> samples;
  std::size_t missing = 0;
  try {
    for (const auto& [instruction, text] : corpus.instructions) {
      for (std::size_t i = 0; i < models.size(); ++i) {
        for (std::size_t j = i + 1; j < models.size(); ++j) {
          JudgePairResult r = client->JudgePair(
              instruction, text, models[i],
              corpus.Output(models[i], instruction), models[j],
              corpus.Output(models[j], instruction), o.calls_per_order,
              AblationSeed(o));
          samples.insert(samples.end(), r.samples.begin(), r.samples.end());
          missing += r.missing;
        }
      }
    }
  } catch (const TransportError& e) {
    samples.insert(samples.end(), e.partial_samples().begin(),
                   e.partial_samples().end());
    run.Write(dir / "samples.partial.jsonl", SamplesToJsonl(samples));
    run.WriteManifest(dir);
    throw;
  }
  run.Write(dir / "samples.jsonl", SamplesToJsonl(samples));
  run.Write(dir / "dataset.csv", DatasetToCsv(AggregateSamples(samples)));
  run.WriteManifest(dir);
  run.out() << "samples=" << samples.size() << " missing=" << missing
            << " network_calls=" << client->network_calls()
            << " cache_hits=" << client->cache_hits() << "\n";
}

// --- baseline ---------------------------------------------------------------

void Baseline(Session& run, const Options& o) {
  PreferenceDataset ds = LoadInputDataset(run, o);
  fs::path dir = run.OutDir(o.out);
  if (!o.baseline.empty()) {
    run.Write(dir / "baseline_ranking.csv",
              RankingToCsv(BaselineRating(ds, o.baseline)));
  }
  BaselineSensitivity s = ComputeBaselineSensitivity(ds);
  std::string lists = "baseline,rank,model,score\n";
  for (std::size_t l = 0; l < s.baselines.size(); ++l) {
    const auto& entries = s.rankings[l].entries();
    for (std::size_t i = 0; i < entries.size(); ++i) {
      lists += CsvField(s.baselines[l]) + ',' + std::to_string(i + 1) + ',' +
               CsvField(entries[i].model) + ',' +
               FormatDouble(entries[i].score) + '\n';
    }
  }
  run.Write(dir / "baseline_rankings.csv", lists);
  run.Write(dir / "sensitivity.csv",
            "stable_fraction,mean_pairwise_agreement\n" +
                FormatDouble(s.stable_fraction) + ',' +
                FormatDouble(s.mean_pairwise_agreement) + '\n');
  run.WriteManifest(dir);
  run.out() << "stable_fraction=" << Fixed(s.stable_fraction, 4)
            << " mean_pairwise_agreement="
            << Fixed(s.mean_pairwise_agreement, 4) << "\n";
}

// --- simulate ---------------------------------------------------------------

void Simulate(Session& run, const Options& o) {
  std::vector<double> quality = o.quality;
  if (quality.empty()) {
    for (std::size_t m = 0; m < o.num_models; ++m) {
      quality.push_back(o.gap * static_cast<double>(o.num_models - 1 - m));
    }
  }
  std::uint64_t seed = SubstreamSeed(o.seed, "simulate", {});
  SimConfig cfg = MakeSimConfig(quality, o.num_instructions, seed, o.jitter);
  cfg.bias_b = o.bias;
  cfg.cyclic_c = o.cyclic;
  cfg.noise_sd = o.noise;
  cfg.calls_per_order = o.calls_per_order;
  if (o.cyclic != 0.0) {
    std::string kind = o.skew;
    if (kind == "auto") kind = quality.size() == 3 ? "rps" : "random";
    if (kind == "rps") {
      if (quality.size() != 3) {
        throw Error(ErrorCode::kValidation,
                    "--skew rps needs exactly three models");
      }
      cfg.skew = RockPaperScissorsSkew();
    } else if (kind == "random") {
      cfg.skew = RandomSkew(quality.size(), seed);
    } else {
      throw Error(ErrorCode::kConfiguration,
                  "unknown --skew '" + kind + "' (expected auto, rps, random)");
    }
  }
  cfg.Validate();
  std::vector<PreferenceSample> samples = Generate(cfg);
  PreferenceDataset ds = AggregateSamples(samples);
  GroundTruth truth = GroundTruthRanking(cfg);

  fs::path dir = run.OutDir(o.out);
  run.Write(dir / "sim_config.json", SimConfigToJson(cfg));
  run.Write(dir / "samples.jsonl", SamplesToJsonl(samples));
  run.Write(dir / "dataset.csv", DatasetToCsv(ds));
  run.Write(dir / "ground_truth.csv", RankingToCsv(truth.ranking));
  run.WriteManifest(dir);
  run.out() << "samples=" << samples.size() << " models=" << cfg.models.size()
            << " instructions=" << cfg.instructions
            << (truth.degenerate ? " ground_truth=degenerate" : "") << "\n";
}

// --- correlate --------------------------------------------------------------

void Correlate(Session& run, const Options& o) {
  run.AddInput(o.ranking_a);
  run.AddInput(o.ranking_b);
  Ranking a = LoadReferenceRanking(o.ranking_a, ParseReferenceKind(o.kind_a));
  Ranking b = LoadReferenceRanking(o.ranking_b, ParseReferenceKind(o.kind_b));
  double rho = Spearman(a, b);
  double tau = Kendall(a, b);
  run.out() << "spearman=" << Fixed(rho, 6) << " kendall=" << Fixed(tau, 6)
            << "\n";
  if (!o.out.empty() && o.out != "-") {
    fs::path dir = run.OutDir(o.out);
    run.Write(dir / "correlation.csv", "spearman,kendall\n" +
                                           FormatDouble(rho) + ',' +
                                           FormatDouble(tau) + '\n');
    run.WriteManifest(dir);
  }
}

// --- flag registration ------------------------------------------------------

void AddOut(CLI::App* sub, Options& o) {
  sub->add_option("--out", o.out, "Output directory");
}

void AddDataset(CLI::App* sub, Options& o, bool required = true) {
  auto* opt = sub->add_option("--dataset", o.dataset,
                              "Preference dataset (CSV export or JSONL samples)");
  if (required) opt->required()->check(CLI::ExistingFile);
  sub->add_option("--models", o.models, "Comma-separated model subset");
}

void AddThresholds(CLI::App* sub, Options& o) {
  sub->add_option("--tie-lo", o.tie_lo, "Lower edge of the tie band");
  sub->add_option("--tie-hi", o.tie_hi, "Upper edge of the tie band");
  sub->add_flag("--strict", o.strict, "Only exactly 0.5 is a tie");
  sub->add_option("--epsilon", o.epsilon, "Clamp applied before log-odds");
}

void AddFit(CLI::App* sub, Options& o) {
  sub->add_option("--scheme", o.scheme, "Labeling scheme")
      ->check(CLI::IsMember({"soft", "hard", "rounded"}));
  sub->add_option("--anchor-model", o.anchor_model,
                  "Model pinned to --anchor-elo (default: lowest rated)");
  sub->add_option("--anchor-elo", o.anchor_elo, "Elo of the anchor model");
  sub->add_option("--tol", o.tol, "Convergence tolerance on coefficients");
  sub->add_option("--max-iter", o.max_iter, "Iteration cap");
  sub->add_flag("--allow-nonconvergence", o.allow_nonconvergence,
                "Report a non-converged fit instead of failing");
}

void AddJudge(CLI::App* sub, Options& o) {
  sub->add_option("--instructions", o.instructions,
                  "JSON object instruction_id -> text");
  sub->add_option("--outputs-dir", o.outputs_dir,
                  "Directory of <model>.json output files");
  sub->add_option("--judge-model", o.judge_model, "Judge model name");
  sub->add_option("--base-url", o.base_url, "Chat-completions base URL");
  sub->add_option("--api-key-env", o.api_key_env,
                  "Environment variable holding the API key");
  sub->add_option("--cache-dir", o.cache_dir, "Response cache directory");
  sub->add_option("--calls-per-order", o.calls_per_order,
                  "Judge calls per presentation order")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--ablation-single-call", o.ablation_single_call,
                "One call per pair in a random order");
  sub->add_option("--max-in-flight", o.max_in_flight,
                  "Concurrent request ceiling")
      ->check(CLI::PositiveNumber);
  sub->add_option("--max-retries", o.max_retries, "Retries per call");
  sub->add_flag("--skip-probe", o.skip_probe,
                "Skip the identifier token probe");
}

void AddSeed(CLI::App* sub, Options& o) {
  sub->add_option("--seed", o.seed, "Root seed");
}

}  // namespace

int Run(const std::vector<std::string>& argv, std::ostream& out,
        std::ostream& err) {
  Options o;
  CLI::App app{"Pairwise LLM-judge ranking toolkit", "judgerank"};
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", std::string(JUDGERANK_VERSION));
  app.set_config("--config", "", "TOML/INI file with flag values");
  app.require_subcommand(1);

  CLI::App* ingest = app.add_subcommand("ingest", "Aggregate JSONL samples");
  ingest->add_option("--samples", o.samples, "JSONL sample files")
      ->required()
      ->check(CLI::ExistingFile);
  AddOut(ingest, o);

  CLI::App* judge = app.add_subcommand("judge", "Run the live judge sweep");
  AddJudge(judge, o);
  judge->add_option("--models", o.models, "Comma-separated model subset");
  AddSeed(judge, o);
  AddOut(judge, o);

  CLI::App* metrics =
      app.add_subcommand("metrics", "PNT, SNTD and the win-rate heatmap");
  AddDataset(metrics, o);
  AddThresholds(metrics, o);
  metrics->add_option("--triplet", o.triplet, "A,B,C");
  metrics->add_flag("--heatmap", o.heatmap, "Also write heatmap.csv");
  metrics->add_option("--bins", o.bins, "Heatmap bins per axis")
      ->check(CLI::PositiveNumber);
  metrics->add_option("--sigma", o.sigma, "Heatmap smoothing sigma (bins)");
  metrics->add_option("--reference-model", o.reference_model,
                      "Model the heatmap win rates are measured against");
  metrics->add_option("--jobs", o.jobs, "Thread ceiling");
  metrics->add_flag("--serial", o.serial, "Use the serial reference kernel");
  AddOut(metrics, o);

  CLI::App* bias =
      app.add_subcommand("bias", "Position consistency and difference");
  AddDataset(bias, o);
  AddThresholds(bias, o);
  bias->add_option("--triplet", o.triplet, "A,B,C");
  bias->add_option("--pd-mode", o.pd_mode, "Position-difference form")
      ->check(CLI::IsMember({"antisym", "literal"}));
  bias->add_option("--pd-bins", o.pd_bins, "Equal-width bins over [0, 3]")
      ->check(CLI::PositiveNumber);
  bias->add_option("--hist-bins", o.hist_bins, "Preference histogram bins");
  bias->add_option("--hist-source", o.hist_source, "debiased or raw")
      ->check(CLI::IsMember({"debiased", "raw"}));
  AddOut(bias, o);

  CLI::App* fit = app.add_subcommand("fit", "Bradley-Terry fit and Elo table");
  AddDataset(fit, o);
  AddFit(fit, o);
  AddOut(fit, o);

  CLI::App* round_robin =
      app.add_subcommand("round-robin", "Every pair on every instruction");
  CLI::App* swim =
      app.add_subcommand("swim", "Swiss-wise iterative matchmaking");
  for (CLI::App* sub : {round_robin, swim}) {
    AddDataset(sub, o, /*required=*/false);
    sub->add_option("--sim-config", o.sim_config, "Simulator config JSON");
    AddJudge(sub, o);
    AddFit(sub, o);
    AddSeed(sub, o);
    AddOut(sub, o);
  }

  CLI::App* baseline =
      app.add_subcommand("baseline", "Baseline-fixed rankings and sensitivity");
  AddDataset(baseline, o);
  baseline->add_option("--baseline", o.baseline, "Write this baseline's list");
  AddOut(baseline, o);

  CLI::App* simulate =
      app.add_subcommand("simulate", "Generate a synthetic judge dataset");
  simulate->add_option("--models", o.num_models, "Number of models")
      ->check(CLI::Range(2, 1000));
  simulate->add_option("--instructions", o.num_instructions,
                       "Number of instructions")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--gap", o.gap, "Quality step between adjacent models");
  simulate->add_option("--quality", o.quality,
                       "Explicit per-model quality (overrides --models/--gap)")
      ->delimiter(',');
  simulate->add_option("--jitter", o.jitter,
                       "Per-instruction quality noise (sd)");
  simulate->add_option("--bias", o.bias, "First-position log-odds boost");
  simulate->add_option("--cyclic", o.cyclic, "Scale of the cyclic component");
  simulate->add_option("--skew", o.skew, "auto, rps or random");
  simulate->add_option("--noise", o.noise, "Per-call log-odds noise (sd)");
  simulate->add_option("--calls-per-order", o.calls_per_order,
                       "Calls per presentation order")
      ->check(CLI::PositiveNumber);
  AddSeed(simulate, o);
  AddOut(simulate, o);

  CLI::App* correlate =
      app.add_subcommand("correlate", "Spearman and Kendall between rankings");
  correlate->add_option("ranking_a", o.ranking_a, "First ranking CSV")
      ->required()
      ->check(CLI::ExistingFile);
  correlate->add_option("ranking_b", o.ranking_b, "Second ranking CSV")
      ->required()
      ->check(CLI::ExistingFile);
  correlate->add_option("--kind-a", o.kind_a, "auto, rank or score");
  correlate->add_option("--kind-b", o.kind_b, "auto, rank or score");
  correlate->add_option("--out", o.out, "Output directory ('-' for none)")
      ->default_val("-");

  std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1),
                                argv.end());
  std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << JUDGERANK_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  Session run(argv, out);
  try {
    CLI::App* sub = app.get_subcommands().front();
    run.set_subcommand(sub);
    if (sub == ingest) {
      Ingest(run, o);
    } else if (sub == judge) {
      Judge(run, o);
    } else if (sub == metrics) {
      Metrics(run, o);
    } else if (sub == bias) {
      Bias(run, o);
    } else if (sub == fit) {
      Fit(run, o);
    } else if (sub == round_robin) {
      Tournament(run, o, /*swim=*/false);
    } else if (sub == swim) {
      Tournament(run, o, /*swim=*/true);
    } else if (sub == baseline) {
      Baseline(run, o);
    } else if (sub == simulate) {
      Simulate(run, o);
    } else if (sub == correlate) {
      Correlate(run, o);
    }
  } catch (const Error& e) {
    err << "error [" << ErrorCodeName(e.code()) << "]: " << e.what() << "\n";
    return e.IsValidationError() ? kExitValidation : kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace judgerank::cli
