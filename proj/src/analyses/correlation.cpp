#include <algorithm>
#include <tuple>

#include "doppelkit/analyses/analyses.hpp"
#include "doppelkit/analyses/stats.hpp"
#include "doppelkit/error.hpp"
#include "doppelkit/random.hpp"

namespace doppelkit {

NovelCovariates compute_covariates(std::string novel_id, std::size_t length_tokens,
                                   const std::vector<std::size_t>& character_mentions) {
  NovelCovariates c;
  c.novel_id = std::move(novel_id);
  c.length_tokens = length_tokens;
  c.n_characters = character_mentions.size();
  std::vector<double> m(character_mentions.begin(), character_mentions.end());
  c.mention_sd = population_sd(m);
  return c;
}

namespace {

double covariate_value(const NovelCovariates& c, std::string_view name) {
  if (name == "length_tokens") return static_cast<double>(c.length_tokens);
  if (name == "n_characters") return static_cast<double>(c.n_characters);
  return c.mention_sd;
}

}  // namespace

CorrelationReport correlate_scores(const std::vector<DoppelResult>& results,
                                   const std::vector<NovelCovariates>& covariates, std::size_t n_perm,
                                   std::uint64_t seed) {
  std::map<std::string, const NovelCovariates*> by_novel;
  for (const auto& c : covariates) by_novel[c.novel_id] = &c;

  // (model, category) -> novel -> mrr; map order makes the output stable.
  std::map<std::tuple<std::string, int>, std::map<std::string, double>> groups;
  for (const auto& r : results) {
    if (!by_novel.count(r.novel_id)) continue;
    groups[{r.model_id, static_cast<int>(r.category)}][r.novel_id] = r.mrr;
  }
  std::size_t largest = 0;
  for (const auto& [key, rows] : groups) largest = std::max(largest, rows.size());
  if (largest < 3) throw TooFewNovels(largest);

  CorrelationReport report;
  for (const auto& [key, rows] : groups) {
    for (const char* name : kCovariateNames) {
      CorrelationCell cell;
      cell.model_id = std::get<0>(key);
      cell.category = static_cast<Category>(std::get<1>(key));
      cell.covariate = name;
      for (const auto& [novel, mrr] : rows) {
        cell.novels.push_back(novel);
        cell.x.push_back(covariate_value(*by_novel.at(novel), name));
        cell.y.push_back(mrr);
      }
      cell.n = cell.novels.size();
      if (cell.n < 3) {
        cell.error = "TooFewNovels";
      } else {
        try {
          cell.spearman_rho = spearman(cell.x, cell.y);
          cell.pearson_r = pearson(cell.x, cell.y);
          const std::string label = cell.model_id + "/" + std::string(to_string(cell.category)) + "/" + name;
          cell.p_value = permutation_pvalue(cell.x, cell.y, n_perm, derive_seed(seed, label));
        } catch (const Error& e) {
          cell.spearman_rho.reset();
          cell.pearson_r.reset();
          cell.error = std::string(e.kind());
        }
      }
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

}  // namespace doppelkit
