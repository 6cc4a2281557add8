#include <algorithm>
#include <cmath>

#include "doppelkit/dsm/sgns.hpp"
#include "doppelkit/entities.hpp"
#include "doppelkit/error.hpp"
#include "doppelkit/kernels/kernels.hpp"
#include "doppelkit/random.hpp"

namespace doppelkit {

namespace {

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double log_sigmoid(double x) { return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }

double dot_span(std::span<const double> a, std::span<const double> b) {
  return kernels::active().dot(a.data(), b.data(), a.size());
}

}  // namespace

void validate(const SgnsConfig& cfg) {
  if (cfg.dim < 2) throw ConfigError("sgns dim must be at least 2");
  if (cfg.window == 0 || cfg.epochs == 0 || cfg.negatives == 0 || cfg.min_count == 0) {
    throw ConfigError("sgns window, epochs, negatives and min_count must be positive");
  }
  if (!(cfg.initial_lr > 0) || !(cfg.min_lr > 0) || cfg.min_lr > cfg.initial_lr) {
    throw ConfigError("sgns learning rates must satisfy 0 < min_lr <= initial_lr");
  }
  if (cfg.subsample < 0) throw ConfigError("sgns subsample must be non-negative");
}

const double* EmbeddingTable::find(const std::string& word) const {
  const auto it = index.find(word);
  return it == index.end() ? nullptr : vector(it->second);
}

double sgns_pair_objective(std::span<const double> v, std::span<const double> u_pos,
                           const std::vector<std::span<const double>>& u_neg) {
  double obj = log_sigmoid(dot_span(u_pos, v));
  for (const auto& u : u_neg) obj += log_sigmoid(-dot_span(u, v));
  return obj;
}

SgnsGradient sgns_pair_gradient(std::span<const double> v, std::span<const double> u_pos,
                                const std::vector<std::span<const double>>& u_neg) {
  const std::size_t d = v.size();
  SgnsGradient g;
  g.d_v.assign(d, 0.0);
  // d/dx ln s(x) = 1 - s(x);  d/dx ln s(-x) = -s(x)
  const double gp = 1.0 - sigmoid(dot_span(u_pos, v));
  g.d_pos.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    g.d_v[i] += gp * u_pos[i];
    g.d_pos[i] = gp * v[i];
  }
  for (const auto& u : u_neg) {
    const double gn = -sigmoid(dot_span(u, v));
    std::vector<double> du(d);
    for (std::size_t i = 0; i < d; ++i) {
      g.d_v[i] += gn * u[i];
      du[i] = gn * v[i];
    }
    g.d_neg.push_back(std::move(du));
  }
  return g;
}

double sgns_step(double* v, double* u_pos, const std::vector<double*>& u_neg, std::size_t dim, double lr,
                 double* scratch) {
  const auto& k = kernels::active();
  std::fill(scratch, scratch + dim, 0.0);
  const double fp = k.dot(u_pos, v, dim);
  double obj = log_sigmoid(fp);
  const double gp = lr * (1.0 - sigmoid(fp));
  k.axpy(gp, u_pos, scratch, dim);
  k.axpy(gp, v, u_pos, dim);
  for (double* u : u_neg) {
    const double fn = k.dot(u, v, dim);
    obj += log_sigmoid(-fn);
    const double gn = -lr * sigmoid(fn);
    k.axpy(gn, u, scratch, dim);
    k.axpy(gn, v, u, dim);
  }
  k.axpy(1.0, scratch, v, dim);
  return obj;
}

EmbeddingTable train_sgns(const std::vector<const TaggedDocument*>& docs, const SgnsConfig& cfg) {
  validate(cfg);
  std::unordered_map<std::string, std::uint64_t> raw;
  for (const TaggedDocument* doc : docs) {
    for (const Token& tok : doc->tokens) ++raw[tok.surface];
  }
  std::vector<std::pair<std::string, std::uint64_t>> vocab;
  for (const auto& [w, n] : raw) {
    if (n >= cfg.min_count) vocab.emplace_back(w, n);
  }
  std::sort(vocab.begin(), vocab.end(),
            [](const auto& a, const auto& b) { return a.second != b.second ? a.second > b.second : a.first < b.first; });
  if (vocab.size() < cfg.negatives + 1) throw VocabularyTooSmall(vocab.size(), cfg.negatives + 1);

  EmbeddingTable table;
  table.dim = cfg.dim;
  for (const auto& [w, n] : vocab) {
    table.index.emplace(w, table.words.size());
    table.words.push_back(w);
    table.counts.push_back(n);
  }
  const std::size_t V = table.size();
  const std::size_t D = cfg.dim;

  std::vector<std::vector<std::uint32_t>> sentences;
  std::uint64_t total_words = 0;
  for (const TaggedDocument* doc : docs) {
    for (const SentenceRange& r : doc->sentence_ranges()) {
      std::vector<std::uint32_t> ids;
      for (std::size_t i = r.begin; i < r.end; ++i) {
        const auto it = table.index.find(doc->tokens[i].surface);
        if (it != table.index.end()) ids.push_back(static_cast<std::uint32_t>(it->second));
      }
      total_words += ids.size();
      if (!ids.empty()) sentences.push_back(std::move(ids));
    }
  }

  Rng rng(cfg.seed);
  table.input.resize(V * D);
  const double half = 0.5 / static_cast<double>(D);
  for (double& x : table.input) x = rng.uniform(-half, half);
  table.output.assign(V * D, 0.0);

  std::vector<double> cumulative(V);
  double acc = 0;
  for (std::size_t i = 0; i < V; ++i) {
    acc += std::pow(static_cast<double>(table.counts[i]), 0.75);
    cumulative[i] = acc;
  }
  auto draw_negative = [&]() -> std::uint32_t {
    const double x = rng.uniform() * acc;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
    return static_cast<std::uint32_t>(std::min<std::size_t>(it - cumulative.begin(), V - 1));
  };

  std::vector<double> keep_prob(V, 1.0);
  std::vector<bool> entity(V, false);
  for (std::size_t i = 0; i < V; ++i) {
    entity[i] = is_entity_token(table.words[i]);
    if (cfg.subsample > 0 && !entity[i]) {
      const double f = static_cast<double>(table.counts[i]);
      const double thresh = cfg.subsample * static_cast<double>(total_words);
      keep_prob[i] = std::min(1.0, (std::sqrt(f / thresh) + 1.0) * thresh / f);
    }
  }

  const double schedule = static_cast<double>(cfg.epochs) * static_cast<double>(std::max<std::uint64_t>(1, total_words));
  std::uint64_t processed = 0;
  std::vector<double> scratch(D);
  std::vector<double*> negs;
  std::vector<std::uint32_t> kept;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    double loss = 0;
    std::uint64_t pairs = 0;
    for (const auto& sent : sentences) {
      kept.clear();
      for (std::uint32_t w : sent) {
        if (keep_prob[w] >= 1.0 || rng.uniform() < keep_prob[w]) kept.push_back(w);
      }
      const double lr =
          std::max(cfg.min_lr, cfg.initial_lr - (cfg.initial_lr - cfg.min_lr) * static_cast<double>(processed) / schedule);
      processed += sent.size();
      for (std::size_t i = 0; i < kept.size(); ++i) {
        const std::size_t b = 1 + rng.below(cfg.window);
        const std::size_t lo = i >= b ? i - b : 0;
        const std::size_t hi = std::min(kept.size(), i + b + 1);
        double* v = table.input.data() + std::size_t{kept[i]} * D;
        for (std::size_t j = lo; j < hi; ++j) {
          if (j == i) continue;
          const std::uint32_t c = kept[j];
          negs.clear();
          for (std::size_t n = 0; n < cfg.negatives; ++n) {
            const std::uint32_t neg = draw_negative();
            if (neg != c) negs.push_back(table.output.data() + std::size_t{neg} * D);
          }
          loss -= sgns_step(v, table.output.data() + std::size_t{c} * D, negs, D, lr, scratch.data());
          ++pairs;
        }
      }
    }
    table.epoch_loss.push_back(pairs ? loss / static_cast<double>(pairs) : 0.0);
  }
  return table;
}

EmbeddingTable train_sgns(const TaggedDocument& doc, const SgnsConfig& cfg) {
  return train_sgns(std::vector<const TaggedDocument*>{&doc}, cfg);
}

EmbeddingSpace extract_sgns_space(const EmbeddingTable& table, const std::set<std::string>& targets, PartId part,
                                  std::string model_id) {
  EmbeddingSpace space;
  space.part = part;
  space.model_id = std::move(model_id);
  space.dim = table.dim;
  for (const std::string& t : targets) {
    const double* v = table.find(t);
    if (!v) {
      space.excluded[t] = "not in vocabulary";
      continue;
    }
    space.dense.emplace(t, std::vector<double>(v, v + table.dim));
  }
  return space;
}

}  // namespace doppelkit
