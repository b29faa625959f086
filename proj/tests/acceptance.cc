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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "judgerank/bias.h"
#include "judgerank/btelo.h"
#include "judgerank/core.h"
#include "judgerank/correlation.h"
#include "judgerank/judgeclient.h"
#include "judgerank/simjudge.h"
#include "judgerank/text_io.h"
#include "judgerank/tournament.h"
#include "judgerank/transitivity.h"

namespace judgerank {
namespace {

using json = nlohmann::json;

double Logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

std::vector<double> Ladder(std::size_t n, double gap) {
  std::vector<double> q;
  for (std::size_t i = 0; i < n; ++i) {
    q.push_back(gap * static_cast<double>(n - 1 - i));
  }
  return q;
}

// --- 1: worked win-rate example ----------------------------------------------

Outcome WorkedWinRate() {
  double s_ab = QualityGap(0.50);
  double s_bc = QualityGap(0.68);
  double implied = ExpectedWinRate(s_ab, -s_bc);
  return {std::abs(implied - 0.68) <= 0.005, Fmt("implied=%.6f", implied)};
}

// --- 2: two-player closed form -------------------------------------------------

Outcome TwoPlayerClosedForm() {
  WinMatrix w({"a", "b"});
  w.at(0, 1) = 3.0;
  w.at(1, 0) = 1.0;
  BtFit fit = FitBradleyTerry(w);
  EloTable elo = ToElo(fit);
  double dbeta = fit.beta[0] - fit.beta[1];
  double delo = elo.xi[0] - elo.xi[1];
  bool ok = std::abs(dbeta - std::log(3.0)) <= 1e-6 &&
            std::abs(delo - 190.85) <= 0.01;
  return {ok, Fmt("dbeta=%.9f delo=%.4f", dbeta, delo)};
}

// --- 3: Elo self-consistency ---------------------------------------------------

Outcome EloSelfConsistency() {
  std::mt19937_64 rng(20240603);
  std::uniform_int_distribution<int> size(2, 12);
  std::uniform_real_distribution<double> count(0.05, 30.0);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int n = size(rng);
    std::vector<ModelId> models;
    for (int i = 0; i < n; ++i) models.push_back("m" + std::to_string(i));
    WinMatrix w(models);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j) w.at(i, j) = count(rng);
      }
    }
    BtFit fit = FitBradleyTerry(w);
    EloTable elo = ToElo(fit);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double diff = std::abs(EloWinProbability(elo.xi[i], elo.xi[j]) -
                               Logistic(fit.beta[i] - fit.beta[j]));
        worst = std::max(worst, diff);
      }
    }
  }
  return {worst <= 1e-12, Fmt("max_abs_diff=%.3g", worst)};
}

// --- 4: SNTD soundness and the cyclic case -------------------------------------

Outcome SntdSoundness() {
  SimConfig clean = MakeSimConfig(Ladder(5, 0.4), 50, 4, 0.5);
  PreferenceDataset ds = AggregateSamples(Generate(clean));
  double max_sntd = 0.0;
  double max_pnt = 0.0;
  for (const Triplet& t : AllPermutations(ds.models())) {
    for (const TripletMetrics& m :
         PerInstructionMetrics(ds, t, TieThresholds::Strict())) {
      max_sntd = std::max(max_sntd, m.sntd);
    }
    max_pnt = std::max(
        max_pnt, ComputeDatasetMetrics(ds, t, TieThresholds::Strict()).pnt_percent);
  }

  SimConfig cyc = MakeSimConfig({0.0, 0.0, 0.0}, 50, 4);
  cyc.cyclic_c = 2.2;
  cyc.skew = RockPaperScissorsSkew();
  PreferenceDataset cd = AggregateSamples(Generate(cyc));
  auto model_j = [&](const ModelId& x, const ModelId& y) {
    double sum = 0.0;
    for (const InstructionId& id : cd.instructions()) {
      sum += *cd.Preference(id, x, y);
    }
    return sum / static_cast<double>(cd.instructions().size());
  };
  double j12 = model_j("m01", "m02");
  double j23 = model_j("m02", "m03");
  double j31 = model_j("m03", "m01");
  BaselineSensitivity sens = ComputeBaselineSensitivity(cd);
  bool cycle = std::abs(j12 - 0.90) <= 0.005 && std::abs(j23 - 0.90) <= 0.005 &&
               std::abs(j31 - 0.90) <= 0.005;
  bool ok = max_sntd <= 1e-9 && max_pnt == 0.0 && cycle &&
            sens.stable_fraction < 1.0;
  return {ok, Fmt("max_sntd=%.3g strict_pnt=%.1f", max_sntd, max_pnt) +
                  Fmt(" J=(%.4f,%.4f,%.4f)", j12, j23, j31) +
                  Fmt(" stable_fraction=%.3f", sens.stable_fraction)};
}

// --- 5: SNTD oracle equivalence ------------------------------------------------

// Independent transcription of the deviation score.
double SntdOracle(double ab, double bc, double ac) {
  const double eps = 1e-6;
  auto clamp = [&](double p) { return std::min(std::max(p, eps), 1.0 - eps); };
  auto s = [](double p) { return std::log(p) - std::log(1.0 - p); };
  auto sig = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
  auto h = [](double p) {
    double v = 0.0;
    if (p > 0.0) v -= p * std::log(p);
    if (p < 1.0) v -= (1.0 - p) * std::log(1.0 - p);
    return v;
  };
  // JSD(P||Q) = H(M) - (H(P) + H(Q)) / 2.
  auto jsd = [&](double p, double q) {
    return h(0.5 * (p + q)) - 0.5 * (h(p) + h(q));
  };
  ab = clamp(ab);
  bc = clamp(bc);
  ac = clamp(ac);
  double e_ab = sig(s(ac) - s(bc));
  double e_bc = sig(s(ac) - s(ab));
  double e_ac = sig(s(ab) + s(bc));
  return (jsd(ab, e_ab) + jsd(bc, e_bc) + jsd(ac, e_ac)) / 3.0;
}

Outcome SntdOracleEquivalence() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  const Triplet t{"A", "B", "C"};
  for (int k = 0; k < 1000; ++k) {
    double ab = u(rng), bc = u(rng), ac = u(rng);
    PairPreference pab = MakePairPreference("i", "A", "B", ab, 1.0 - ab);
    PairPreference pbc = MakePairPreference("i", "B", "C", bc, 1.0 - bc);
    PairPreference pac = MakePairPreference("i", "A", "C", ac, 1.0 - ac);
    double got = SntdTriplet(t, &pab, &pbc, &pac);
    worst = std::max(worst,
                     std::abs(got - SntdOracle(pab.j_ab, pbc.j_ab, pac.j_ab)));
  }
  return {worst <= 1e-10, Fmt("max_abs_diff=%.3g", worst)};
}

// --- 6: SWIM cost ----------------------------------------------------------------

Outcome SwimCost() {
  SimConfig cfg = MakeSimConfig(Ladder(20, 0.3), 10, 6, 0.2);
  auto ids = cfg.InstructionIds();
  SimulatedEvaluator swim_eval(cfg);
  TournamentResult swim = Swim(cfg.models, ids, swim_eval, {6, {}});
  SimulatedEvaluator rr_eval(cfg);
  TournamentResult rr = RoundRobin(cfg.models, ids, rr_eval);

  std::vector<std::size_t> per_insertion;
  ModelId current;
  for (const ScheduleEntry& e : swim.schedule) {
    if (per_insertion.empty() || e.model != current) {
      per_insertion.push_back(0);
      current = e.model;
    }
    ++per_insertion.back();
  }
  bool ok = per_insertion.size() == 19;
  for (std::size_t s = 1; ok && s <= 19; ++s) {
    double expected = std::ceil(std::max(std::log2(static_cast<double>(s)), 1.0));
    ok = static_cast<double>(per_insertion[s - 1]) == expected;
  }
  ok = ok && swim.comparisons_made == 65 && rr.comparisons_made == 190 &&
       swim_eval.evaluations() == 65 * 10;
  return {ok, "swim=" + std::to_string(swim.comparisons_made) +
                  " round_robin=" + std::to_string(rr.comparisons_made)};
}

// --- 7: SWIM fidelity ----------------------------------------------------------

Outcome SwimFidelity() {
  SimConfig exact = MakeSimConfig(Ladder(10, 0.5), 100, 7);
  auto ids = exact.InstructionIds();
  SimulatedEvaluator rr_eval(exact);
  std::vector<ModelId> rr_order = RoundRobin(exact.models, ids, rr_eval).ranking.Order();
  int identical = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SimulatedEvaluator e(exact);
    identical += Swim(exact.models, ids, e, {seed, {}}).ranking.Order() == rr_order;
  }

  double rho_sum = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SimConfig noisy = MakeSimConfig(Ladder(10, 0.5), 100, 1000 + seed);
    noisy.noise_sd = 0.3;
    SimulatedEvaluator a(noisy), b(noisy);
    Ranking rr = RoundRobin(noisy.models, ids, a).ranking;
    Ranking sw = Swim(noisy.models, ids, b, {seed, {}}).ranking;
    rho_sum += Spearman(rr, sw);
  }
  double mean_rho = rho_sum / 100.0;
  return {identical == 100 && mean_rho >= 0.95,
          "identical=" + std::to_string(identical) + "/100" +
              Fmt(" mean_spearman_noisy=%.4f", mean_rho)};
}

// --- 8: correlation oracles ----------------------------------------------------

Outcome CorrelationOracles() {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> size(3, 20);
  int mismatches = 0;
  for (int t = 0; t < 200; ++t) {
    const int n = size(rng);
    std::vector<int> p(n), q(n);
    std::iota(p.begin(), p.end(), 1);
    std::iota(q.begin(), q.end(), 1);
    std::shuffle(p.begin(), p.end(), rng);
    std::shuffle(q.begin(), q.end(), rng);
    std::vector<RankedModel> ea, eb;
    for (int i = 0; i < n; ++i) {
      std::string id = "x" + std::to_string(100 + i);
      ea.push_back({id, -static_cast<double>(p[i])});
      eb.push_back({id, -static_cast<double>(q[i])});
    }
    Ranking a = Ranking::FromScores(ea), b = Ranking::FromScores(eb);

    // Definitional Spearman: Pearson of integer rank vectors, as one exact
    // integer ratio. Kendall: pair counting.
    long long nn = n, sum = 0, net = 0;
    for (int i = 0; i < n; ++i) sum += static_cast<long long>(p[i]) * q[i];
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        net += ((p[i] < p[j]) == (q[i] < q[j])) ? 1 : -1;
      }
    }
    double rho = static_cast<double>(12 * sum - 3 * nn * (nn + 1) * (nn + 1)) /
                 static_cast<double>(nn * (nn * nn - 1));
    double tau = static_cast<double>(net) / static_cast<double>(nn * (nn - 1) / 2);
    mismatches += Spearman(a, b) != rho;
    mismatches += Kendall(a, b) != tau;
  }
  return {mismatches == 0, "mismatches=" + std::to_string(mismatches)};
}

// --- 9: position-bias machinery ------------------------------------------------

Outcome PositionBias() {
  SimConfig biased = MakeSimConfig({0.0, 0.0, 0.0, 0.0, 0.0}, 100, 9);
  biased.bias_b = 2.0;
  biased.noise_sd = 0.2;
  biased.calls_per_order = 1;
  std::vector<PreferenceSample> samples = Generate(biased);
  PreferenceDataset ds = AggregateSamples(samples);
  double pd_sum = 0.0;
  for (const auto& [key, pair] : ds.pairs()) pd_sum += PositionDifference(pair);
  double mean_pd = pd_sum / static_cast<double>(ds.size());
  double target = std::abs(2.0 * Logistic(2.0) - 1.0);

  std::size_t ambiguous = 0, total = 0;
  for (const Triplet& t : AllCombinations(ds.models())) {
    InstructionPartition part = PartitionInstructions(ds, t, TieThresholds::Strict());
    ambiguous += part.ambiguous.size();
    total += part.ambiguous.size() + part.consistent.size();
  }
  double ambiguous_share = static_cast<double>(ambiguous) / static_cast<double>(total);

  SimConfig fair = MakeSimConfig(Ladder(5, 1.0), 100, 9);
  PreferenceDataset fd = AggregateSamples(Generate(fair));
  std::size_t consistent = 0, fair_total = 0;
  for (const Triplet& t : AllCombinations(fd.models())) {
    InstructionPartition part = PartitionInstructions(fd, t, TieThresholds::Strict());
    consistent += part.consistent.size();
    fair_total += part.ambiguous.size() + part.consistent.size();
  }
  bool ok = samples.size() == 2000 && std::abs(mean_pd - target) <= 0.02 &&
            ambiguous_share >= 0.95 && consistent == fair_total && fair_total > 0;
  return {ok, "samples=" + std::to_string(samples.size()) +
                  Fmt(" mean_pd=%.4f target=%.4f ambiguous=%.3f", mean_pd,
                      target, ambiguous_share) +
                  " consistent=" + std::to_string(consistent) + "/" +
                  std::to_string(fair_total)};
}

// --- 10: judge-client contract (offline) ---------------------------------------

std::string MockReply(const std::string& request_body) {
  json req = json::parse(request_body);
  std::string user = req["messages"][1]["content"];
  const std::string marker = R"("output": """)";
  std::size_t first = user.find(marker);
  bool first_is_long = user.find("Sure!", first) < user.find(marker, first + 1);
  double p = first_is_long ? 0.75 : 0.25;
  json top = json::array({{{"token", "m"}, {"logprob", std::log(p)}},
                          {{"token", "M"}, {"logprob", std::log(1.0 - p)}}});
  json body = {{"choices",
                {{{"logprobs",
                   {{"content",
                     {{{"token", "m"}, {"logprob", std::log(p)},
                       {"top_logprobs", top}}}}}}}}}};
  return body.dump();
}

Outcome JudgeClientContract(const std::filesystem::path& root) {
  JudgeRequest request;
  request.instruction_text = "Name a prime number greater than 10.";
  request.output_first = "11 is prime.";
  request.output_second = "Sure! 13 has no divisors other than 1 and itself.";
  request.judge_model = "judge";
  Prompt prompt = BuildPrompt(request);
  bool golden =
      prompt.system == ReadFile(root / "golden" / "direct_comparison_system.txt") &&
      prompt.user == ReadFile(root / "golden" / "direct_comparison_user.txt");

  double p = ExtractPreference({{"m", std::log(9.0)}, {"M", 0.0}});
  bool extract = std::abs(p - 0.9) <= 1e-12;

  httplib::Server server;
  std::atomic<int> hits{0};
  server.Post("/v1/chat/completions",
              [&](const httplib::Request& req, httplib::Response& res) {
                ++hits;
                res.set_content(MockReply(req.body), "application/json");
              });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread listener([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  std::string url = "http://127.0.0.1:" + std::to_string(port) + "/v1";

  std::filesystem::path cache =
      std::filesystem::temp_directory_path() /
      ("judgerank-acceptance-" + std::to_string(std::random_device{}()));
  JudgeClientOptions options;
  options.judge_model = "judge";
  options.cache_dir = cache;
  auto sweep = [&](JudgeClient& client) {
    std::vector<PreferenceSample> all;
    for (const char* id : {"i1", "i2", "i3"}) {
      auto r = client.JudgePair(id, request.instruction_text, "a",
                                request.output_first, "b", request.output_second);
      all.insert(all.end(), r.samples.begin(), r.samples.end());
    }
    return all;
  };
  JudgeClient cold(options, std::make_shared<HttpChatTransport>(url, ""));
  auto first = sweep(cold);
  int cold_hits = hits.load();
  JudgeClient warm(options, std::make_shared<HttpChatTransport>(url, ""));
  auto second = sweep(warm);
  int warm_hits = hits.load() - cold_hits;
  server.stop();
  listener.join();
  std::filesystem::remove_all(cache);

  bool cached = cold_hits == 12 && warm_hits == 0 && warm.network_calls() == 0 &&
                first == second;
  return {golden && extract && cached,
          std::string("golden=") + (golden ? "match" : "DIFF") +
              Fmt(" p=%.12f", p) + " cold_calls=" + std::to_string(cold_hits) +
              " warm_calls=" + std::to_string(warm_hits)};
}

// --- 11: soft vs hard labels ---------------------------------------------------

Outcome SoftVersusHard() {
  int soft_wins = 0;
  FitOptions lenient;
  lenient.require_convergence = false;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SimConfig cfg = MakeSimConfig(Ladder(10, 0.15), 50, 11000 + seed, 0.5);
    cfg.noise_sd = 1.0;
    PreferenceDataset ds = AggregateSamples(Generate(cfg));
    Ranking truth = GroundTruthRanking(cfg).ranking;
    auto rank_with = [&](LabelScheme scheme) {
      return ToElo(FitBradleyTerry(BuildWinMatrix(ds, scheme), lenient)).ToRanking();
    };
    double soft = Spearman(rank_with(LabelScheme::kSoft), truth);
    double hard = Spearman(rank_with(LabelScheme::kHard), truth);
    soft_wins += soft >= hard;
  }
  return {soft_wins >= 80, "soft>=hard in " + std::to_string(soft_wins) + "/100"};
}

}  // namespace
}  // namespace judgerank

int main() {
  using namespace judgerank;
  const std::filesystem::path root = JUDGERANK_TEST_ROOT;
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"worked win-rate example", WorkedWinRate},
      {"two-player closed form", TwoPlayerClosedForm},
      {"Elo self-consistency", EloSelfConsistency},
      {"SNTD soundness", SntdSoundness},
      {"SNTD oracle equivalence", SntdOracleEquivalence},
      {"SWIM cost", SwimCost},
      {"SWIM fidelity", SwimFidelity},
      {"correlation oracles", CorrelationOracles},
      {"position-bias machinery", PositionBias},
      {"judge-client contract", [&] { return JudgeClientContract(root); }},
      {"soft vs hard labels", SoftVersusHard},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                start)
                      .count();
    failures += !o.pass;
    std::printf("AC%zu %s: %s (%s; %.2fs)\n", i + 1, o.pass ? "PASS" : "FAIL",
                criteria[i].name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
