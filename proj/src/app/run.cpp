#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "doppelkit/analyses/analyses.hpp"
#include "doppelkit/app/pipeline.hpp"
#include "doppelkit/doppel.hpp"
#include "doppelkit/dsm/additive.hpp"
#include "doppelkit/dsm/contextual.hpp"
#include "doppelkit/dsm/count_model.hpp"
#include "doppelkit/dsm/sgns.hpp"
#include "doppelkit/entities.hpp"
#include "doppelkit/error.hpp"
#include "doppelkit/random.hpp"

namespace fs = std::filesystem;

namespace doppelkit {

namespace {

enum class Mode { run, quality };

struct EntityStats {
  std::string id;
  std::string label;  // display name or lemma
  std::string matched;  // nouns: character they were matched to
  std::size_t total = 0;
  std::size_t a = 0;
  std::size_t b = 0;
  bool eligible = false;
};

struct Prepared {
  NovelSource src;
  bool ok = false;
  std::string skip_kind;
  std::string skip_detail;

  TaggedDocument original;
  Substitution sub;
  std::size_t split_sentence = 0;
  std::vector<EntityStats> characters;
  std::vector<EntityStats> nouns;
  std::optional<EntityInventory> inventory;
  std::string noun_error;
  std::string noun_error_detail;
  MentionIndex noun_mentions;
  TaggedDocument side_a;
  TaggedDocument side_b;
  std::set<std::string> char_targets;
  std::set<std::string> noun_targets;
  NovelCovariates covariates;

  // quality mode only
  TaggedDocument wiki_original;
  Substitution wiki_sub;
  MentionIndex wiki_noun_mentions;
};

std::map<std::string, std::size_t> entity_counts(const TaggedDocument& doc) {
  std::map<std::string, std::size_t> counts;
  for (const Token& t : doc.tokens) {
    if (is_entity_token(t.surface)) ++counts[t.surface];
  }
  return counts;
}

std::size_t lookup(const std::map<std::string, std::size_t>& m, const std::string& k) {
  const auto it = m.find(k);
  return it == m.end() ? 0 : it->second;
}

TaggedDocument take_sentences(const TaggedDocument& doc, std::size_t last_a, bool part_a) {
  TaggedDocument out;
  out.doc_id = doc.doc_id;
  out.source_kind = doc.source_kind;
  out.tagged = doc.tagged;
  for (const Token& t : doc.tokens) {
    if ((t.sentence_index <= last_a) == part_a) out.tokens.push_back(t);
  }
  return out;
}

MentionIndex keep_only(const MentionIndex& index, const std::set<std::string>& ids) {
  MentionIndex out;
  out.doc_id = index.doc_id;
  for (const auto& [id, spans] : index.spans) {
    if (ids.count(id)) out.spans[id] = spans;
  }
  return out;
}

void skip(Prepared& p, std::string kind, std::string detail) {
  p.ok = false;
  p.skip_kind = std::move(kind);
  p.skip_detail = std::move(detail);
}

// Matched nouns, their occurrences, and the two model documents.
void attach_nouns(Prepared& p, const std::vector<CharacterEntry>& eligible,
                  const std::map<std::string, std::size_t>& whole_counts, const Stoplist& stoplist) {
  try {
    p.inventory = select_matched_nouns(p.sub.doc, eligible, whole_counts, stoplist);
  } catch (const InsufficientNouns& e) {
    p.noun_error = std::string(e.kind());
    p.noun_error_detail = e.what();
  }
  if (p.inventory) p.noun_mentions = index_common_nouns(p.sub.doc, *p.inventory);
}

void finish_entities(Prepared& p, const RunConfig& cfg) {
  const auto counts_a = entity_counts(p.side_a);
  const auto counts_b = entity_counts(p.side_b);
  if (p.inventory) {
    for (const CommonNoun& n : p.inventory->common_nouns) {
      EntityStats s;
      s.id = n.entity_id;
      s.label = n.lemma;
      s.matched = n.matched_character_id;
      s.total = n.frequency;
      s.a = lookup(counts_a, n.entity_id);
      s.b = lookup(counts_b, n.entity_id);
      s.eligible = s.a >= cfg.min_mentions && s.b >= cfg.min_mentions;
      if (s.eligible) p.noun_targets.insert(s.id);
      p.nouns.push_back(std::move(s));
    }
  }
  std::vector<std::size_t> mentions;
  for (const EntityStats& c : p.characters) {
    if (c.eligible) {
      p.char_targets.insert(c.id);
      mentions.push_back(c.total);
    }
  }
  p.covariates = compute_covariates(p.src.novel_id, p.original.tokens.size(), mentions);
}

Prepared prepare(const NovelSource& src, const RunConfig& cfg, const Stoplist& stoplist, Mode mode) {
  Prepared p;
  p.src = src;
  if (!src.text_path) {
    skip(p, "MissingText", "no novel.conllu or novel.txt");
    return p;
  }
  if (!src.characters_path) {
    skip(p, "MissingCharacters", "no characters.json");
    return p;
  }
  if (mode == Mode::quality && !src.wiki_path) {
    skip(p, "MissingWiki", "no wiki.txt or wiki.conllu");
    return p;
  }
  try {
    p.original = load_document(*src.text_path, src.novel_id, SourceKind::novel);
    const auto characters = load_characters(*src.characters_path);
    p.sub = substitute_aliases(p.original, characters);
    std::vector<std::string> ids;
    for (const auto& c : characters) ids.push_back(c.entity_id);
    const auto whole = count_mentions(p.sub.mentions, ids);

    std::map<std::string, std::size_t> counts_a;
    std::map<std::string, std::size_t> counts_b;
    if (mode == Mode::run) {
      p.split_sentence = split_document(p.sub.doc, cfg.split).split_sentence_index;
      counts_a = entity_counts(take_sentences(p.sub.doc, p.split_sentence, true));
      counts_b = entity_counts(take_sentences(p.sub.doc, p.split_sentence, false));
    } else {
      p.wiki_original = load_document(*src.wiki_path, src.novel_id, SourceKind::wiki);
      p.wiki_sub = substitute_aliases(p.wiki_original, characters);
      counts_a = whole;
      counts_b = entity_counts(p.wiki_sub.doc);
    }

    std::vector<CharacterEntry> eligible;
    for (const auto& c : characters) {
      EntityStats s;
      s.id = c.entity_id;
      s.label = c.display_name;
      s.total = lookup(whole, c.entity_id);
      s.a = lookup(counts_a, c.entity_id);
      s.b = lookup(counts_b, c.entity_id);
      s.eligible = s.a >= cfg.min_mentions && s.b >= cfg.min_mentions;
      if (s.eligible) eligible.push_back(c);
      p.characters.push_back(std::move(s));
    }
    if (eligible.size() < 2) {
      skip(p, "TooFewEntities",
           std::to_string(eligible.size()) + " characters reach min_mentions on both sides, need at least 2");
      return p;
    }

    attach_nouns(p, eligible, whole, stoplist);
    const TaggedDocument model_doc = p.inventory ? substitute_nouns(p.sub.doc, p.noun_mentions) : p.sub.doc;
    if (mode == Mode::run) {
      p.side_a = take_sentences(model_doc, p.split_sentence, true);
      p.side_b = take_sentences(model_doc, p.split_sentence, false);
    } else {
      p.side_a = model_doc;
      if (p.inventory) {
        p.wiki_noun_mentions = index_common_nouns(p.wiki_sub.doc, *p.inventory);
        p.side_b = substitute_nouns(p.wiki_sub.doc, p.wiki_noun_mentions);
      } else {
        p.side_b = p.wiki_sub.doc;
      }
    }
    finish_entities(p, cfg);
    p.ok = true;
  } catch (const Error& e) {
    skip(p, std::string(e.kind()), e.what());
  }
  return p;
}

EmbeddingSpace restrict_to(const EmbeddingSpace& s, const std::set<std::string>& ids) {
  EmbeddingSpace out;
  out.part = s.part;
  out.model_id = s.model_id;
  out.is_sparse = s.is_sparse;
  out.dim = s.dim;
  out.columns = s.columns;
  out.warnings = s.warnings;
  for (const auto& [id, v] : s.dense) {
    if (ids.count(id)) out.dense.emplace(id, v);
  }
  for (const auto& [id, v] : s.sparse) {
    if (ids.count(id)) out.sparse.emplace(id, v);
  }
  for (const auto& [id, why] : s.excluded) {
    if (ids.count(id)) out.excluded.emplace(id, why);
  }
  return out;
}

struct Sides {
  EmbeddingSpace a;
  EmbeddingSpace b;
  std::vector<std::string> warnings;
};

Sides build_sides(const std::string& model, const Prepared& p, const std::set<std::string>& targets, PartId pa,
                  PartId pb, const RunConfig& cfg, const EmbeddingTable* background) {
  Sides s;
  if (model == "count") {
    s.a = build_count_space(p.side_a, targets, cfg.count, pa);
    s.b = build_count_space(p.side_b, targets, cfg.count, pb);
  } else if (model == "sgns") {
    SgnsConfig train = cfg.sgns.train;
    train.seed = derive_seed(cfg.seed, p.src.novel_id + "/sgns");
    const EmbeddingTable ta = train_sgns(p.side_a, train);
    const EmbeddingTable tb = train_sgns(p.side_b, train);
    s.a = extract_sgns_space(ta, targets, pa);
    s.b = extract_sgns_space(tb, targets, pb);
    if (cfg.sgns.align) {
      const Alignment al = procrustes_alignment(tb, ta, cfg.sgns.align_min_count, cfg.sgns.align_max_anchors);
      if (al.rotation.empty()) {
        s.warnings.push_back("too few shared anchor words to align the two sides; compared unaligned");
      } else {
        rotate_space(s.b, al.rotation);
      }
    }
  } else if (model == "additive") {
    if (!background) throw MissingBackground();
    const Stoplist stop = cfg.stoplist.empty() ? english_stoplist() : load_stoplist(cfg.stoplist);
    s.a = build_additive_space(p.side_a, targets, *background, cfg.additive.window, stop, pa);
    s.b = build_additive_space(p.side_b, targets, *background, cfg.additive.window, stop, pb);
  } else if (model == "contextual") {
    s.a = import_contextual_space(cfg.contextual.file, p.src.novel_id, pa);
    s.b = import_contextual_space(cfg.contextual.file, p.src.novel_id, pb);
    for (const auto& t : targets) {
      if (!s.a.contains(t) && !s.a.excluded.count(t)) s.a.excluded[t] = "no imported mentions";
      if (!s.b.contains(t) && !s.b.excluded.count(t)) s.b.excluded[t] = "no imported mentions";
    }
  } else {
    throw ConfigError("unknown model '" + model + "'");
  }
  for (const auto& w : s.a.warnings) s.warnings.push_back(std::string(to_string(pa)) + ": " + w);
  for (const auto& w : s.b.warnings) s.warnings.push_back(std::string(to_string(pb)) + ": " + w);
  return s;
}

Json rr_object(const DoppelResult& r) {
  Json rr = Json::object();
  for (const auto& [id, v] : r.per_entity_rr) rr[id] = v;
  return Json{{"mrr", r.mrr}, {"accuracy_at_1", r.accuracy_at_1}, {"per_entity_rr", rr}};
}

struct NovelOutput {
  std::vector<Json> cells;
  std::vector<DoppelResult> symmetric;
  std::vector<std::string> mention_lines;
  std::size_t failed_cells = 0;
};

Json exclusion_list(const std::map<std::string, std::string>& reasons) {
  Json list = Json::array();
  for (const auto& [id, why] : reasons) list.push_back(Json{{"entity", id}, {"reason", why}});
  return list;
}

void evaluate_novel(const Prepared& p, const RunConfig& cfg, Mode mode, const EmbeddingTable* background,
                    const std::string& background_error, NovelOutput& out) {
  const PartId pa = mode == Mode::run ? PartId::A : PartId::novel;
  const PartId pb = mode == Mode::run ? PartId::B : PartId::wiki;
  std::set<std::string> targets = p.char_targets;
  targets.insert(p.noun_targets.begin(), p.noun_targets.end());

  for (const std::string& model : cfg.models) {
    std::optional<Sides> sides;
    std::string model_error_kind;
    std::string model_error;
    try {
      if (model == "additive" && !background && !background_error.empty()) throw Error("MissingBackground", background_error);
      sides = build_sides(model, p, targets, pa, pb, cfg, background);
    } catch (const Error& e) {
      model_error_kind = std::string(e.kind());
      model_error = e.what();
    }
    for (Category category : {Category::proper_names, Category::common_nouns}) {
      const bool names = category == Category::proper_names;
      const std::set<std::string>& ids = names ? p.char_targets : p.noun_targets;
      Json cell;
      cell["novel"] = p.src.novel_id;
      cell["model"] = model;
      cell["category"] = to_string(category);

      // Inventory-level exclusions first, then whatever the model dropped.
      std::map<std::string, std::string> excluded;
      for (const EntityStats& s : names ? p.characters : p.nouns) {
        if (!s.eligible) {
          excluded[s.id] = "fewer than " + std::to_string(cfg.min_mentions) + " mentions on a side (" +
                           std::to_string(s.a) + "/" + std::to_string(s.b) + ")";
        }
      }
      auto fail = [&](const std::string& kind, const std::string& message) {
        cell["n"] = 0;
        cell["error"] = Json{{"kind", kind}, {"message", message}};
        ++out.failed_cells;
      };
      if (!names && !p.inventory) {
        cell["excluded"] = exclusion_list(excluded);
        fail(p.noun_error, p.noun_error_detail);
        out.cells.push_back(std::move(cell));
        continue;
      }
      if (!sides) {
        cell["excluded"] = exclusion_list(excluded);
        fail(model_error_kind, model_error);
        out.cells.push_back(std::move(cell));
        continue;
      }
      const EmbeddingSpace a = restrict_to(sides->a, ids);
      const EmbeddingSpace b = restrict_to(sides->b, ids);
      for (const auto& [id, why] : a.excluded) excluded[id] = std::string(to_string(pa)) + ": " + why;
      for (const auto& [id, why] : b.excluded) {
        if (!excluded.count(id)) excluded[id] = std::string(to_string(pb)) + ": " + why;
      }
      try {
        const DoppelScores scores = doppelganger_scores(a, b, category);
        for (const auto& id : scores.only_in_a) excluded.try_emplace(id, "missing from side " + std::string(to_string(pb)));
        for (const auto& id : scores.only_in_b) excluded.try_emplace(id, "missing from side " + std::string(to_string(pa)));
        cell["n"] = scores.symmetric.n;
        cell["chance_mrr"] = chance_baseline(scores.symmetric.n).expected_mrr;
        cell["directions"] = Json{{"a_to_b", rr_object(scores.a_to_b)},
                                  {"b_to_a", rr_object(scores.b_to_a)},
                                  {"symmetric", rr_object(scores.symmetric)}};
        DoppelResult sym = scores.symmetric;
        sym.novel_id = p.src.novel_id;
        sym.model_id = model;
        out.symmetric.push_back(std::move(sym));
        try {
          const RsaResult r = rsa(a, b, category);
          cell["rsa"] = Json{{"rho", r.rho}, {"n_pairs", r.n_pairs}};
        } catch (const Error& e) {
          cell["rsa"] = Json{{"error", std::string(e.kind())}};
        }
        cell["error"] = nullptr;
      } catch (const Error& e) {
        fail(std::string(e.kind()), e.what());
      }
      cell["excluded"] = exclusion_list(excluded);
      cell["warnings"] = sides->warnings;
      out.cells.push_back(std::move(cell));
    }
  }
}

// MentionContext records for the external contextual extractor.
void export_mentions(const Prepared& p, Mode mode, std::vector<std::string>& lines) {
  auto emit = [&](const TaggedDocument& doc, const MentionIndex& index, const std::set<std::string>& keep,
                  auto part_of) {
    std::map<std::pair<std::string, std::string>, long long> ordinal;
    std::vector<std::pair<Span, std::string>> all;
    for (const auto& [id, spans] : index.spans) {
      if (!keep.count(id)) continue;
      for (const Span& s : spans) all.emplace_back(s, id);
    }
    std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.first.begin < y.first.begin; });
    const auto ranges = doc.sentence_ranges();
    std::vector<std::size_t> sentence_of(doc.tokens.size());
    for (std::size_t s = 0; s < ranges.size(); ++s) {
      for (std::size_t i = ranges[s].begin; i < ranges[s].end; ++i) sentence_of[i] = s;
    }
    for (const auto& [span, id] : all) {
      // Source documents number tokens by position.
      const SentenceRange r = ranges[sentence_of[span.begin]];
      const std::string part(to_string(part_of(doc.tokens[span.begin].sentence_index)));
      Json sentence = Json::array();
      for (std::size_t i = r.begin; i < r.end; ++i) sentence.push_back(doc.tokens[i].surface);
      Json rec;
      rec["novel_id"] = p.src.novel_id;
      rec["part"] = part;
      rec["entity_id"] = id;
      rec["mention"] = ordinal[{part, id}]++;
      rec["sentence"] = std::move(sentence);
      rec["span"] = Json::array({span.begin - r.begin, span.end - r.begin});
      lines.push_back(rec.dump());
    }
  };
  if (mode == Mode::run) {
    auto part_of = [&](std::size_t s) { return s <= p.split_sentence ? PartId::A : PartId::B; };
    emit(p.original, p.sub.mentions, p.char_targets, part_of);
    emit(p.original, p.noun_mentions, p.noun_targets, part_of);
  } else {
    auto novel = [](std::size_t) { return PartId::novel; };
    auto wiki = [](std::size_t) { return PartId::wiki; };
    emit(p.original, p.sub.mentions, p.char_targets, novel);
    emit(p.original, p.noun_mentions, p.noun_targets, novel);
    emit(p.wiki_original, p.wiki_sub.mentions, p.char_targets, wiki);
    emit(p.wiki_original, p.wiki_noun_mentions, p.noun_targets, wiki);
  }
}

Json entity_list(const std::vector<EntityStats>& list, bool nouns) {
  Json arr = Json::array();
  for (const EntityStats& s : list) {
    Json e;
    e["id"] = s.id;
    e[nouns ? "lemma" : "name"] = s.label;
    if (nouns) e["matched_character"] = s.matched;
    e["mentions"] = s.total;
    e["mentions_a"] = s.a;
    e["mentions_b"] = s.b;
    e["eligible"] = s.eligible;
    arr.push_back(std::move(e));
  }
  return arr;
}

Json novel_record(const Prepared& p, const RunConfig& cfg, Mode mode) {
  Json n;
  n["novel_id"] = p.src.novel_id;
  n["source"] = fs::path(*p.src.text_path).filename().string();
  n["tagged"] = p.original.tagged;
  n["approximate"] = p.inventory ? p.inventory->approximate : !p.original.tagged;
  n["length_tokens"] = p.original.tokens.size();
  n["n_sentences"] = p.original.sentence_count();
  if (mode == Mode::run) {
    n["split"] = Json{{"rule", to_string(cfg.split)},
                      {"last_sentence_of_a", p.split_sentence},
                      {"tokens_a", p.side_a.tokens.size()},
                      {"tokens_b", p.side_b.tokens.size()}};
  } else {
    n["wiki"] = Json{{"source", fs::path(*p.src.wiki_path).filename().string()},
                     {"length_tokens", p.wiki_original.tokens.size()}};
  }
  n["covariates"] = Json{{"length_tokens", p.covariates.length_tokens},
                         {"n_characters", p.covariates.n_characters},
                         {"mention_sd", p.covariates.mention_sd}};
  n["characters"] = entity_list(p.characters, false);
  n["common_nouns"] = entity_list(p.nouns, true);
  n["noun_error"] = p.noun_error.empty() ? Json(nullptr) : Json{{"kind", p.noun_error}, {"message", p.noun_error_detail}};
  return n;
}

Json aggregates(const std::vector<Json>& cells, const RunConfig& cfg) {
  Json out = Json::array();
  for (const std::string& model : cfg.models) {
    for (Category category : {Category::proper_names, Category::common_nouns}) {
      std::size_t n = 0;
      std::size_t n_rsa = 0;
      double rsa_sum = 0;
      double chance = 0;
      std::map<std::string, std::pair<double, double>> by_dir;
      for (const Json& c : cells) {
        if (c["model"] != model || c["category"] != to_string(category) || !c["error"].is_null()) continue;
        ++n;
        chance += c["chance_mrr"].get<double>();
        for (const char* d : {"a_to_b", "b_to_a", "symmetric"}) {
          by_dir[d].first += c["directions"][d]["mrr"].get<double>();
          by_dir[d].second += c["directions"][d]["accuracy_at_1"].get<double>();
        }
        if (c["rsa"].contains("rho")) {
          ++n_rsa;
          rsa_sum += c["rsa"]["rho"].get<double>();
        }
      }
      Json a;
      a["model"] = model;
      a["category"] = to_string(category);
      a["n_novels"] = n;
      if (n > 0) {
        const double dn = static_cast<double>(n);
        Json dirs;
        for (const char* d : {"a_to_b", "b_to_a", "symmetric"}) {
          dirs[d] = Json{{"mean_mrr", by_dir[d].first / dn}, {"mean_accuracy_at_1", by_dir[d].second / dn}};
        }
        a["directions"] = dirs;
        a["mean_chance_mrr"] = chance / dn;
      }
      a["mean_rsa_rho"] = n_rsa ? Json(rsa_sum / static_cast<double>(n_rsa)) : Json(nullptr);
      out.push_back(std::move(a));
    }
  }
  return out;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json correlation_json(const std::vector<DoppelResult>& results, const std::vector<NovelCovariates>& covariates,
                      const RunConfig& cfg) {
  try {
    const CorrelationReport rep = correlate_scores(results, covariates, cfg.permutations,
                                                   derive_seed(cfg.seed, "correlations"));
    Json cells = Json::array();
    for (const CorrelationCell& c : rep.cells) {
      Json j;
      j["model"] = c.model_id;
      j["category"] = to_string(c.category);
      j["covariate"] = c.covariate;
      j["n"] = c.n;
      j["spearman_rho"] = optional_number(c.spearman_rho);
      j["pearson_r"] = optional_number(c.pearson_r);
      j["p_value"] = optional_number(c.p_value);
      j["error"] = c.error.empty() ? Json(nullptr) : Json(c.error);
      Json points = Json::array();
      for (std::size_t i = 0; i < c.n; ++i) points.push_back(Json{{"novel", c.novels[i]}, {"x", c.x[i]}, {"y", c.y[i]}});
      j["points"] = std::move(points);
      cells.push_back(std::move(j));
    }
    return Json{{"direction", "symmetric"}, {"permutations", cfg.permutations}, {"cells", cells}, {"error", nullptr}};
  } catch (const Error& e) {
    return Json{{"direction", "symmetric"}, {"permutations", cfg.permutations}, {"cells", Json::array()},
                {"error", std::string(e.kind())}};
  }
}

Json pos_json(const std::vector<Prepared>& prepared) {
  std::vector<MentionIndex> kept;
  kept.reserve(prepared.size() * 2);
  std::vector<ProfileInput> inputs;
  Json untagged = Json::array();
  for (const Prepared& p : prepared) {
    if (!p.ok) continue;
    if (!p.original.tagged) {
      untagged.push_back(p.src.novel_id);
      continue;
    }
    kept.push_back(keep_only(p.sub.mentions, p.char_targets));
    kept.push_back(keep_only(p.noun_mentions, p.noun_targets));
  }
  std::size_t k = 0;
  for (const Prepared& p : prepared) {
    if (!p.ok || !p.original.tagged) continue;
    inputs.push_back({&p.original, {&kept[k], &kept[k + 1]}});
    k += 2;
  }
  Json out;
  Json tags = Json::array();
  for (Upos t : kProfileTags) tags.push_back(to_string(t));
  out["columns"] = tags;
  out["rows"] = Json::array({"proper_names", "common_nouns"});
  out["untagged_novels"] = untagged;
  if (inputs.empty()) {
    out["error"] = "RequiresTaggedInput";
    return out;
  }
  const PosProfile prof = pos_profile(inputs);
  Json counts = Json::array();
  Json norm = Json::array();
  Json norm_det = Json::array();
  const auto n1 = prof.normalized();
  const auto n2 = prof.normalized_without_det();
  for (std::size_t r = 0; r < 2; ++r) {
    counts.push_back(Json(std::vector<std::uint64_t>(prof.counts[r].begin(), prof.counts[r].end())));
    norm.push_back(Json(std::vector<double>(n1[r].begin(), n1[r].end())));
    norm_det.push_back(Json(std::vector<double>(n2[r].begin(), n2[r].end())));
  }
  out["counts"] = counts;
  out["normalized"] = norm;
  out["normalized_without_det"] = norm_det;
  out["n_novels"] = inputs.size();
  out["error"] = nullptr;
  return out;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("IoError", "cannot write " + path);
  out << content;
  if (!out) throw Error("IoError", "failed writing " + path);
}

Json manifest(const RunConfig& cfg, const std::vector<NovelSource>& sources,
              const std::vector<std::pair<std::string, std::string>>& outputs) {
  Json inputs = Json::array();
  for (const NovelSource& s : sources) {
    for (const auto& path : {s.text_path, s.wiki_path, s.characters_path}) {
      if (!path) continue;
      inputs.push_back(Json{{"path", fs::relative(*path, cfg.dataset_root).generic_string()},
                            {"bytes", fs::file_size(*path)},
                            {"sha256", sha256_file(*path)}});
    }
  }
  Json outs = Json::array();
  for (const auto& [name, content] : outputs) {
    outs.push_back(Json{{"path", name}, {"bytes", content.size()}, {"sha256", sha256_hex(content)}});
  }
  return Json{{"schema", kReportSchema},
              {"config_sha256", sha256_hex(to_toml(cfg))},
              {"inputs", inputs},
              {"outputs", outs}};
}

RunOutcome execute(const RunConfig& cfg, Mode mode) {
  validate(cfg);
  const auto sources = discover_dataset(cfg.dataset_root);
  const Stoplist stoplist = cfg.stoplist.empty() ? english_stoplist() : load_stoplist(cfg.stoplist);

  std::vector<Prepared> prepared(sources.size());
  parallel_for(sources.size(), cfg.workers, [&](std::size_t i) { prepared[i] = prepare(sources[i], cfg, stoplist, mode); });

  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < prepared.size(); ++i) {
    if (prepared[i].ok) usable.push_back(i);
  }
  if (usable.empty()) {
    throw EmptyRun(mode == Mode::quality ? "no novel with a wiki page could be evaluated"
                                         : "no novel in " + cfg.dataset_root + " could be evaluated");
  }

  const bool additive = std::find(cfg.models.begin(), cfg.models.end(), "additive") != cfg.models.end();
  std::optional<EmbeddingTable> shared_background;
  std::string shared_background_error;
  if (additive && !cfg.additive.background.empty()) {
    try {
      shared_background = read_word2vec_text(cfg.additive.background);
    } catch (const Error& e) {
      shared_background_error = e.what();
    }
  }

  std::vector<NovelOutput> outputs(prepared.size());
  parallel_for(usable.size(), cfg.workers, [&](std::size_t u) {
    const Prepared& p = prepared[usable[u]];
    std::optional<EmbeddingTable> loo;
    std::string background_error = shared_background_error;
    if (additive && cfg.additive.background.empty()) {
      // Leave-one-out background: every other usable novel.
      std::vector<const TaggedDocument*> others;
      for (std::size_t v : usable) {
        if (v != usable[u]) others.push_back(&prepared[v].sub.doc);
      }
      try {
        if (others.empty()) throw MissingBackground();
        SgnsConfig bg = cfg.additive.background_sgns;
        bg.seed = derive_seed(cfg.seed, p.src.novel_id + "/background");
        loo = train_sgns(others, bg);
      } catch (const Error& e) {
        background_error = e.what();
      }
    }
    const EmbeddingTable* background = shared_background ? &*shared_background : (loo ? &*loo : nullptr);
    evaluate_novel(p, cfg, mode, background, background_error, outputs[usable[u]]);
    if (cfg.export_mentions) export_mentions(p, mode, outputs[usable[u]].mention_lines);
  });

  // Single-threaded merge in novel-id order.
  Json novels = Json::array();
  Json skipped = Json::array();
  Json approximate = Json::array();
  std::vector<Json> cells;
  std::vector<DoppelResult> symmetric;
  std::vector<NovelCovariates> covariates;
  std::string mentions;
  std::size_t failed_cells = 0;
  for (std::size_t i = 0; i < prepared.size(); ++i) {
    const Prepared& p = prepared[i];
    if (!p.ok) {
      skipped.push_back(Json{{"novel", p.src.novel_id}, {"reason", p.skip_kind}, {"detail", p.skip_detail}});
      continue;
    }
    novels.push_back(novel_record(p, cfg, mode));
    if (!p.original.tagged) approximate.push_back(p.src.novel_id);
    covariates.push_back(p.covariates);
    for (auto& c : outputs[i].cells) cells.push_back(std::move(c));
    for (auto& r : outputs[i].symmetric) symmetric.push_back(std::move(r));
    for (const auto& line : outputs[i].mention_lines) mentions += line + "\n";
    failed_cells += outputs[i].failed_cells;
  }

  Json report;
  report["schema"] = kReportSchema;
  report["command"] = mode == Mode::run ? "run" : "quality";
  // Output location and worker count do not affect results, so they are left
  // out to keep reports of identical runs byte-identical.
  RunConfig shown = cfg;
  shown.output_dir.clear();
  shown.workers = 0;
  report["config"] = Json{{"toml", to_toml(shown)}};
  report["dataset"] = Json{{"root", cfg.dataset_root},
                           {"n_novels", sources.size()},
                           {"n_evaluated", usable.size()},
                           {"approximate", approximate},
                           {"skipped", skipped}};
  report["novels"] = novels;
  report["results"] = cells;
  report["aggregates"] = aggregates(cells, cfg);
  if (mode == Mode::run) {
    report["correlations"] = correlation_json(symmetric, covariates, cfg);
    report["pos_profile"] = pos_json(prepared);
  }
  report["failed_cells"] = failed_cells;

  RunOutcome outcome;
  outcome.exit_code = (!skipped.empty() || failed_cells > 0) ? 2 : 0;
  fs::create_directories(cfg.output_dir);
  const std::string report_text = report.dump(1) + "\n";
  std::vector<std::pair<std::string, std::string>> produced = {{"report.json", report_text}};
  if (cfg.export_mentions) produced.emplace_back("mentions.jsonl", mentions);
  for (const auto& [name, content] : produced) {
    const std::string path = (fs::path(cfg.output_dir) / name).string();
    write_text(path, content);
    outcome.written.push_back(path);
  }
  const std::string manifest_path = (fs::path(cfg.output_dir) / "manifest.json").string();
  write_text(manifest_path, manifest(cfg, sources, produced).dump(1) + "\n");
  outcome.written.push_back(manifest_path);
  outcome.report = std::move(report);
  return outcome;
}

}  // namespace

RunOutcome cmd_run(const RunConfig& cfg) { return execute(cfg, Mode::run); }

RunOutcome cmd_quality(const RunConfig& cfg) { return execute(cfg, Mode::quality); }

}  // namespace doppelkit
