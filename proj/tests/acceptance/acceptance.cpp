// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.
//
//   acceptance <desk-dataset-dir> <scratch-dir>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doppelkit/analyses/analyses.hpp"
#include "doppelkit/analyses/stats.hpp"
#include "doppelkit/app/pipeline.hpp"
#include "doppelkit/app/synth.hpp"
#include "doppelkit/corpus.hpp"
#include "doppelkit/doppel.hpp"
#include "doppelkit/dsm/count_model.hpp"
#include "doppelkit/dsm/sgns.hpp"
#include "doppelkit/entities.hpp"
#include "doppelkit/error.hpp"
#include "doppelkit/random.hpp"
#include "oracles.hpp"

using namespace doppelkit;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and budgets.
constexpr double kPpmiTolerance = 1e-12;
constexpr double kPpmiBudgetSeconds = 1.0;
constexpr double kGradientStep = 1e-5;
constexpr double kGradientTolerance = 1e-4;
constexpr double kGradientBudgetSeconds = 5.0;
constexpr double kChanceTolerance = 0.02;
constexpr double kChanceBudgetSeconds = 10.0;
// Ranks must match exactly. The correlation itself is computed in a different
// summation order (the oracle uses long double), so a few ulp are allowed.
constexpr double kSpearmanTolerance = 1e-15;
constexpr double kDeskBudgetSecondsPerNovel = 600.0;
constexpr double kSynthAlpha = 0.05;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome ppmi_oracle() {
  static const char* vocab[] = {"the", "a", "house", "ran", "red", "slowly", "dog", "__ent_x__", "__ent_y__", ","};
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  bool shape_ok = true;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    TaggedDocument doc;
    std::size_t s = 0;
    for (std::size_t i = 0; i < 50; ++i) {
      doc.tokens.push_back({vocab[rng.below(std::size(vocab))], {}, {}, s, i});
      if (rng.uniform() < 0.12) ++s;
    }
    const std::set<std::string> targets = {"__ent_x__", "__ent_y__"};
    for (std::size_t window : {1, 2, 5}) {
      CountModelConfig cfg;
      cfg.window = window;
      const auto space = build_count_space(doc, targets, cfg);
      const auto want = oracle::count_matrix(doc, targets, window, cfg.max_context_vocab, true);
      for (const auto& t : targets) {
        std::map<std::string, double> got;
        if (space.sparse.count(t)) {
          const auto& row = space.sparse.at(t);
          for (std::size_t k = 0; k < row.index.size(); ++k) {
            if (row.value[k] != 0) got[space.columns[row.index[k]]] = row.value[k];
          }
        }
        const auto it = want.find(t);
        const std::map<std::string, double> w = it == want.end() ? std::map<std::string, double>{} : it->second;
        if (got.size() != w.size()) shape_ok = false;
        for (const auto& [c, v] : w) {
          if (!got.count(c)) {
            shape_ok = false;
            continue;
          }
          worst = std::max(worst, std::abs(got.at(c) - v));
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  return {shape_ok && worst <= kPpmiTolerance && secs < kPpmiBudgetSeconds,
          "max abs diff " + fmt("%.3g", worst) + (shape_ok ? "" : ", support differs") + ", 60 corpora in " +
              fmt("%.3f", secs) + " s"};
}

Outcome sgns_gradient() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(2024);
  double worst = 0;
  auto randv = [&](std::size_t dim) {
    std::vector<double> v(dim);
    for (auto& x : v) x = 0.7 * rng.normal();
    return v;
  };
  auto rel = [](const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0;
    double na = 0;
    double nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      num += (a[i] - b[i]) * (a[i] - b[i]);
      na += a[i] * a[i];
      nb += b[i] * b[i];
    }
    return std::sqrt(num) / std::max(std::sqrt(std::max(na, nb)), 1e-12);
  };
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = 3 + rng.below(30);
    const std::size_t k = 1 + rng.below(6);
    auto v = randv(dim);
    auto pos = randv(dim);
    std::vector<std::vector<double>> neg;
    for (std::size_t i = 0; i < k; ++i) neg.push_back(randv(dim));
    auto objective = [&] {
      std::vector<std::span<const double>> spans(neg.begin(), neg.end());
      return sgns_pair_objective(v, pos, spans);
    };
    auto numeric = [&](std::vector<double>& x) {
      std::vector<double> out(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double keep = x[i];
        x[i] = keep + kGradientStep;
        const double up = objective();
        x[i] = keep - kGradientStep;
        const double down = objective();
        x[i] = keep;
        out[i] = (up - down) / (2 * kGradientStep);
      }
      return out;
    };
    std::vector<std::span<const double>> spans(neg.begin(), neg.end());
    const auto g = sgns_pair_gradient(v, pos, spans);
    worst = std::max(worst, rel(g.d_v, numeric(v)));
    worst = std::max(worst, rel(g.d_pos, numeric(pos)));
    for (std::size_t i = 0; i < k; ++i) worst = std::max(worst, rel(g.d_neg[i], numeric(neg[i])));
  }
  const double secs = seconds_since(t0);
  return {worst < kGradientTolerance && secs < kGradientBudgetSeconds,
          "max relative error " + fmt("%.3g", worst) + " over 100 triples in " + fmt("%.3f", secs) + " s"};
}

EmbeddingSpace gaussian_space(Rng& rng, PartId part, std::size_t n, std::size_t dim) {
  EmbeddingSpace s;
  s.part = part;
  s.dim = dim;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(dim);
    for (auto& x : v) x = rng.normal();
    s.dense["e" + std::to_string(i)] = v;
  }
  return s;
}

Outcome identity_and_chance() {
  const auto t0 = std::chrono::steady_clock::now();
  bool identity = true;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const auto a = gaussian_space(rng, PartId::A, 10, 16);
    const auto s = doppelganger_scores(a, a, Category::proper_names);
    for (Direction d : {Direction::a_to_b, Direction::b_to_a, Direction::symmetric}) {
      identity = identity && s.get(d).mrr == 1.0 && s.get(d).accuracy_at_1 == 1.0;
    }
  }
  double total = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Rng rng(derive_seed(seed, "chance"));
    const auto a = gaussian_space(rng, PartId::A, 10, 16);
    const auto b = gaussian_space(rng, PartId::B, 10, 16);
    total += doppelganger_score(a, b, Category::proper_names, Direction::a_to_b).mrr;
  }
  const double mean_mrr = total / 1000;
  const double expected = oracle::chance_mrr(10);
  const double secs = seconds_since(t0);
  return {identity && std::abs(mean_mrr - expected) <= kChanceTolerance && secs < kChanceBudgetSeconds,
          std::string(identity ? "identity 1.0" : "identity FAILED") + ", mean mrr " + fmt("%.5f", mean_mrr) +
              " vs H_10/10 " + fmt("%.5f", expected) + " in " + fmt("%.2f", secs) + " s"};
}

Outcome statistics_kernel() {
  Rng rng(77);
  double worst = 0;
  int compared = 0;
  bool ranks_equal = true;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + rng.below(30);
    std::vector<double> x(n);
    std::vector<double> y(n);
    const bool ties = trial % 2 == 0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = ties ? static_cast<double>(rng.below(4)) : rng.normal();
      y[i] = ties ? static_cast<double>(rng.below(4)) : rng.normal();
    }
    if (population_sd(x) == 0 || population_sd(y) == 0) continue;
    ranks_equal = ranks_equal && average_ranks(x) == oracle::ranks(x) && average_ranks(y) == oracle::ranks(y);
    worst = std::max(worst, std::abs(spearman(x, y) - oracle::spearman(x, y)));
    ++compared;
  }
  Rng srng(5);
  const auto space = gaussian_space(srng, PartId::A, 12, 8);
  const double self = rsa(space, space).rho;
  std::vector<double> px(20);
  std::vector<double> py(20);
  for (std::size_t i = 0; i < 20; ++i) {
    px[i] = srng.normal();
    py[i] = px[i] + srng.normal();
  }
  const double p1 = permutation_pvalue(px, py, 5000, 11);
  const double p2 = permutation_pvalue(px, py, 5000, 11);
  return {ranks_equal && worst <= kSpearmanTolerance && self == 1.0 && p1 == p2,
          std::to_string(compared) + " vectors, ranks " + (ranks_equal ? "identical" : "DIFFER") + ", max rho diff " + fmt("%.3g", worst) + ", rsa(identical) " +
              fmt("%.17g", self) + ", p " + fmt("%.6f", p1) + (p1 == p2 ? " (repeatable)" : " (NOT repeatable)")};
}

Outcome pos_oracle(const fs::path& desk) {
  // Toy document: "the dog barked ." with "dog" as the mention.
  TaggedDocument toy;
  toy.tagged = true;
  const std::pair<const char*, Upos> words[] = {
      {"the", Upos::DET}, {"dog", Upos::NOUN}, {"barked", Upos::VERB}, {".", Upos::PUNCT}};
  for (std::size_t i = 0; i < 4; ++i) toy.tokens.push_back({words[i].first, words[i].first, words[i].second, 0, i});
  MentionIndex toy_idx;
  toy_idx.spans["__noun_dog__"] = {{1, 2}};
  const auto toy_prof = pos_profile({{&toy, {&toy_idx}}});
  const std::array<std::uint64_t, 6> expected_row = {0, 0, 1, 0, 0, 1};
  bool ok = toy_prof.counts[1] == expected_row && toy_prof.counts[0] == std::array<std::uint64_t, 6>{};
  ok = ok && toy_prof.counts == oracle::pos_scan(toy, toy_idx);

  // The same comparison on the real tagged texts, character mentions.
  std::size_t novels = 0;
  std::uint64_t total = 0;
  for (const auto& entry : fs::directory_iterator(desk)) {
    const fs::path conllu = entry.path() / "novel.conllu";
    if (!fs::exists(conllu)) continue;
    const auto doc = load_document(conllu.string(), entry.path().filename().string(), SourceKind::novel);
    const auto chars = load_characters((entry.path() / "characters.json").string());
    const auto sub = substitute_aliases(doc, chars);
    const auto prof = pos_profile({{&doc, {&sub.mentions}}});
    ok = ok && prof.counts == oracle::pos_scan(doc, sub.mentions);
    total += prof.total();
    ++novels;
  }
  return {ok && novels > 0,
          "toy document exact; " + std::to_string(novels) + " tagged novels, " + std::to_string(total) +
              " window tokens, exact"};
}

struct DeskOutcomes {
  Outcome desk;
  Outcome determinism;
};

DeskOutcomes desk_and_determinism(const fs::path& desk, const fs::path& scratch) {
  RunConfig cfg;
  cfg.dataset_root = desk.string();
  cfg.models = {"count", "sgns"};
  cfg.output_dir = (scratch / "desk_serial").string();
  cfg.workers = 1;
  const auto t0 = std::chrono::steady_clock::now();
  const auto serial = cmd_run(cfg);
  const double secs = seconds_since(t0);
  const Json& report = serial.report;
  const std::size_t n_novels = report["dataset"]["n_evaluated"].get<std::size_t>();

  // novel/model -> category -> (mrr, rsa)
  std::map<std::string, std::map<std::string, std::pair<double, std::optional<double>>>> cells;
  for (const auto& r : report["results"]) {
    if (!r["error"].is_null()) continue;
    std::optional<double> rho;
    if (r["rsa"].is_object() && r["rsa"]["rho"].is_number()) rho = r["rsa"]["rho"].get<double>();
    cells[r["novel"].get<std::string>() + "/" + r["model"].get<std::string>()][r["category"].get<std::string>()] = {
        r["directions"]["symmetric"]["mrr"].get<double>(), rho};
  }
  std::size_t paired = 0;
  std::size_t mrr_lower = 0;
  std::size_t rsa_paired = 0;
  std::size_t rsa_lower = 0;
  std::string rsa_losers;
  for (const auto& [key, by_cat] : cells) {
    if (!by_cat.count("proper_names") || !by_cat.count("common_nouns")) continue;
    const auto& pn = by_cat.at("proper_names");
    const auto& cn = by_cat.at("common_nouns");
    ++paired;
    mrr_lower += pn.first < cn.first;
    if (pn.second && cn.second) {
      ++rsa_paired;
      if (*pn.second < *cn.second) {
        ++rsa_lower;
      } else {
        rsa_losers += (rsa_losers.empty() ? "" : " ") + key;
      }
    }
  }
  const auto& norm = report["pos_profile"]["normalized"];
  auto rate = [&](std::size_t row, std::size_t col) { return norm[row][col].get<double>(); };
  const bool det_lower = rate(0, 2) < rate(1, 2);
  const bool noun_higher = rate(0, 3) > rate(1, 3);
  const bool verb_higher = rate(0, 5) > rate(1, 5);
  const bool mrr_major = 2 * mrr_lower > paired;
  const bool rsa_major = 2 * rsa_lower > rsa_paired;
  const double per_novel = n_novels ? secs / static_cast<double>(n_novels) : 0;

  std::string d = std::to_string(n_novels) + " novels; PN mrr < CN mrr in " + std::to_string(mrr_lower) + "/" +
                  std::to_string(paired) + " cells" + (mrr_major ? "" : " (NOT a majority)") + "; PN rsa < CN rsa in " +
                  std::to_string(rsa_lower) + "/" + std::to_string(rsa_paired) + " cells" +
                  (rsa_major ? "" : " (NOT a majority; PN not lower in: " + rsa_losers + ")") + "; DET " +
                  fmt("%.3f", rate(0, 2)) + " vs " + fmt("%.3f", rate(1, 2)) + ", NOUN " + fmt("%.3f", rate(0, 3)) +
                  " vs " + fmt("%.3f", rate(1, 3)) + ", VERB " + fmt("%.3f", rate(0, 5)) + " vs " +
                  fmt("%.3f", rate(1, 5)) + "; " + fmt("%.1f", per_novel) + " s per novel single-threaded";
  DeskOutcomes out;
  out.desk = {n_novels >= 3 && paired > 0 && mrr_major && rsa_major && det_lower && noun_higher && verb_higher &&
                  per_novel < kDeskBudgetSecondsPerNovel,
              d};

  // Rerun with default workers into another directory; reports must match.
  cfg.output_dir = (scratch / "desk_parallel").string();
  cfg.workers = 0;
  cmd_run(cfg);
  cfg.output_dir = (scratch / "desk_parallel2").string();
  cmd_run(cfg);
  const std::string a = slurp(scratch / "desk_serial" / "report.json");
  const std::string b = slurp(scratch / "desk_parallel" / "report.json");
  const std::string c = slurp(scratch / "desk_parallel2" / "report.json");
  out.determinism = {!a.empty() && a == b && b == c,
                     "3 runs (workers 1, default, default), report " + std::to_string(a.size()) + " bytes, sha256 " +
                         sha256_hex(a).substr(0, 16) + (a == b && b == c ? ", identical" : ", DIFFERENT")};
  return out;
}

Outcome synth_correlation(const fs::path& scratch) {
  const fs::path data = scratch / "synth";
  fs::remove_all(data);
  SynthConfig base;
  base.tokens = 20000;
  write_synth_dataset(data.string(), {5, 10, 20, 40}, 3, base, 1);
  RunConfig cfg;
  cfg.dataset_root = data.string();
  cfg.output_dir = (scratch / "synth_out").string();
  cfg.models = {"count", "sgns"};
  const auto outcome = cmd_run(cfg);
  std::string d;
  bool ok = true;
  std::size_t found = 0;
  for (const auto& cell : outcome.report["correlations"]["cells"]) {
    if (cell["category"] != "proper_names" || cell["covariate"] != "n_characters") continue;
    ++found;
    const bool have = cell["spearman_rho"].is_number() && cell["p_value"].is_number();
    const double rho = have ? cell["spearman_rho"].get<double>() : 0;
    const double p = have ? cell["p_value"].get<double>() : 1;
    ok = ok && have && rho < 0 && p < kSynthAlpha;
    d += (d.empty() ? "" : "; ") + cell["model"].get<std::string>() + " rho " + fmt("%.3f", rho) + " p " +
         fmt("%.4f", p) + " (n=" + std::to_string(cell["n"].get<std::size_t>()) + ")";
  }
  return {ok && found == cfg.models.size(), "12 novels of 20000 tokens, k in {5,10,20,40}; " + d};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: acceptance <desk-dataset-dir> <scratch-dir>\n");
    return 1;
  }
  const fs::path desk = argv[1];
  const fs::path scratch = argv[2];
  fs::create_directories(scratch);

  int failures = 0;
  auto report = [&](const char* name, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  };

  report("ppmi-oracle", ppmi_oracle);
  report("sgns-gradient", sgns_gradient);
  report("doppelganger-identity-and-chance", identity_and_chance);
  report("statistics-kernel", statistics_kernel);
  report("pos-oracle", [&] { return pos_oracle(desk); });
  DeskOutcomes desk_out;
  bool desk_ran = false;
  auto run_desk = [&] {
    if (!desk_ran) {
      desk_out = desk_and_determinism(desk, scratch);
      desk_ran = true;
    }
  };
  report("desk-directional", [&] {
    run_desk();
    return desk_out.desk;
  });
  report("synth-correlation", [&] { return synth_correlation(scratch); });
  report("end-to-end-determinism", [&] {
    run_desk();
    return desk_out.determinism;
  });
  std::printf("%d of 8 criteria failed\n", failures);
  return failures ? 1 : 0;
}
