#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "doppelkit/app/config.hpp"
#include "doppelkit/error.hpp"

namespace doppelkit {

namespace {

using Keys = std::set<std::string_view>;

void reject_unknown(const toml::table& t, const Keys& allowed, const std::string& where) {
  for (auto&& [k, v] : t) {
    if (!allowed.count(k.str())) throw ConfigError("unknown key '" + std::string(k.str()) + "' in " + where);
  }
}

const toml::table* subtable(const toml::table& t, std::string_view key) {
  const toml::node* n = t.get(key);
  if (!n) return nullptr;
  if (!n->is_table()) throw ConfigError("'" + std::string(key) + "' must be a table");
  return n->as_table();
}

void read(const toml::table& t, std::string_view key, std::string& out) {
  if (const toml::node* n = t.get(key)) {
    const auto v = n->value_exact<std::string>();
    if (!v) throw ConfigError("'" + std::string(key) + "' must be a string");
    out = *v;
  }
}

void read(const toml::table& t, std::string_view key, bool& out) {
  if (const toml::node* n = t.get(key)) {
    const auto v = n->value_exact<bool>();
    if (!v) throw ConfigError("'" + std::string(key) + "' must be a boolean");
    out = *v;
  }
}

void read(const toml::table& t, std::string_view key, std::size_t& out) {
  if (const toml::node* n = t.get(key)) {
    const auto v = n->value_exact<std::int64_t>();
    if (!v || *v < 0) throw ConfigError("'" + std::string(key) + "' must be a non-negative integer");
    out = static_cast<std::size_t>(*v);
  }
}

void read(const toml::table& t, std::string_view key, double& out) {
  if (const toml::node* n = t.get(key)) {
    if (const auto f = n->value_exact<double>()) {
      out = *f;
    } else if (const auto i = n->value_exact<std::int64_t>()) {
      out = static_cast<double>(*i);
    } else {
      throw ConfigError("'" + std::string(key) + "' must be a number");
    }
  }
}

void read_sgns(const toml::table& t, SgnsConfig& c, const std::string& where, const Keys& extra) {
  Keys keys = {"dim", "window", "epochs", "negatives", "initial_lr", "min_lr", "subsample", "min_count"};
  keys.insert(extra.begin(), extra.end());
  reject_unknown(t, keys, where);
  read(t, "dim", c.dim);
  read(t, "window", c.window);
  read(t, "epochs", c.epochs);
  read(t, "negatives", c.negatives);
  read(t, "initial_lr", c.initial_lr);
  read(t, "min_lr", c.min_lr);
  read(t, "subsample", c.subsample);
  read(t, "min_count", c.min_count);
}

std::string number(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, static_cast<std::size_t>(res.ptr - buf));
  // TOML floats need a fraction or an exponent.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        out.push_back(c);
    }
  }
  return out + "\"";
}

void write_sgns(std::ostringstream& o, const SgnsConfig& c) {
  o << "dim = " << c.dim << "\n"
    << "window = " << c.window << "\n"
    << "epochs = " << c.epochs << "\n"
    << "negatives = " << c.negatives << "\n"
    << "initial_lr = " << number(c.initial_lr) << "\n"
    << "min_lr = " << number(c.min_lr) << "\n"
    << "subsample = " << number(c.subsample) << "\n"
    << "min_count = " << c.min_count << "\n";
}

}  // namespace

RunConfig parse_config(std::string_view toml_text) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "line " << e.source().begin.line << ": " << e.description();
    throw ConfigError(msg.str());
  }
  RunConfig cfg;
  reject_unknown(root,
                 {"dataset", "output", "seed", "split", "min_mentions", "workers", "permutations", "export_mentions",
                  "stoplist", "models", "count", "sgns", "additive", "contextual"},
                 "top level");
  read(root, "dataset", cfg.dataset_root);
  read(root, "output", cfg.output_dir);
  read(root, "seed", cfg.seed);
  if (root.get("split")) {
    std::string rule;
    read(root, "split", rule);
    const auto parsed = parse_split_rule(rule);
    if (!parsed) throw ConfigError("split must be 'tokens' or 'sentences'");
    cfg.split = *parsed;
  }
  read(root, "min_mentions", cfg.min_mentions);
  read(root, "workers", cfg.workers);
  read(root, "permutations", cfg.permutations);
  read(root, "export_mentions", cfg.export_mentions);
  read(root, "stoplist", cfg.stoplist);
  if (const toml::node* n = root.get("models")) {
    const toml::array* arr = n->as_array();
    if (!arr) throw ConfigError("'models' must be an array of strings");
    cfg.models.clear();
    for (const toml::node& item : *arr) {
      const auto name = item.value_exact<std::string>();
      if (!name) throw ConfigError("'models' must be an array of strings");
      cfg.models.push_back(*name);
    }
  }
  if (const toml::table* t = subtable(root, "count")) {
    reject_unknown(*t, {"window", "max_context_vocab", "weighting", "shards"}, "[count]");
    read(*t, "window", cfg.count.window);
    read(*t, "max_context_vocab", cfg.count.max_context_vocab);
    read(*t, "shards", cfg.count.shards);
    if (t->get("weighting")) {
      std::string w;
      read(*t, "weighting", w);
      if (w == "ppmi") {
        cfg.count.weighting = Weighting::ppmi;
      } else if (w == "raw") {
        cfg.count.weighting = Weighting::raw;
      } else {
        throw ConfigError("count.weighting must be 'ppmi' or 'raw'");
      }
    }
  }
  if (const toml::table* t = subtable(root, "sgns")) {
    read_sgns(*t, cfg.sgns.train, "[sgns]", {"align", "align_min_count", "align_max_anchors"});
    read(*t, "align", cfg.sgns.align);
    read(*t, "align_min_count", cfg.sgns.align_min_count);
    read(*t, "align_max_anchors", cfg.sgns.align_max_anchors);
  }
  if (const toml::table* t = subtable(root, "additive")) {
    reject_unknown(*t, {"window", "background", "background_sgns"}, "[additive]");
    read(*t, "window", cfg.additive.window);
    read(*t, "background", cfg.additive.background);
    if (const toml::table* b = subtable(*t, "background_sgns")) {
      read_sgns(*b, cfg.additive.background_sgns, "[additive.background_sgns]", {});
    }
  }
  if (const toml::table* t = subtable(root, "contextual")) {
    reject_unknown(*t, {"file"}, "[contextual]");
    read(*t, "file", cfg.contextual.file);
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate(const RunConfig& cfg) {
  if (cfg.models.empty()) throw ConfigError("at least one model must be enabled");
  std::set<std::string> seen;
  for (const auto& m : cfg.models) {
    const auto& known = known_models();
    if (std::find(known.begin(), known.end(), m) == known.end()) throw ConfigError("unknown model '" + m + "'");
    if (!seen.insert(m).second) throw ConfigError("model '" + m + "' listed twice");
  }
  if (seen.count("contextual") && cfg.contextual.file.empty()) {
    throw ConfigError("the contextual model needs contextual.file");
  }
  if (cfg.min_mentions == 0) throw ConfigError("min_mentions must be at least 1");
  if (cfg.count.window == 0 || cfg.count.max_context_vocab == 0 || cfg.count.shards == 0) {
    throw ConfigError("count window, max_context_vocab and shards must be positive");
  }
  if (cfg.additive.window == 0) throw ConfigError("additive window must be positive");
  if (cfg.sgns.align_max_anchors == 0) throw ConfigError("sgns.align_max_anchors must be positive");
  doppelkit::validate(cfg.sgns.train);
  doppelkit::validate(cfg.additive.background_sgns);
}

std::string to_toml(const RunConfig& cfg) {
  std::ostringstream o;
  o << "dataset = " << quoted(cfg.dataset_root) << "\n"
    << "output = " << quoted(cfg.output_dir) << "\n"
    << "seed = " << cfg.seed << "\n"
    << "split = " << quoted(std::string(to_string(cfg.split))) << "\n"
    << "min_mentions = " << cfg.min_mentions << "\n"
    << "workers = " << cfg.workers << "\n"
    << "permutations = " << cfg.permutations << "\n"
    << "export_mentions = " << (cfg.export_mentions ? "true" : "false") << "\n"
    << "stoplist = " << quoted(cfg.stoplist) << "\n"
    << "models = [";
  for (std::size_t i = 0; i < cfg.models.size(); ++i) o << (i ? ", " : "") << quoted(cfg.models[i]);
  o << "]\n\n[count]\n"
    << "window = " << cfg.count.window << "\n"
    << "max_context_vocab = " << cfg.count.max_context_vocab << "\n"
    << "weighting = " << (cfg.count.weighting == Weighting::ppmi ? "\"ppmi\"" : "\"raw\"") << "\n"
    << "shards = " << cfg.count.shards << "\n\n[sgns]\n";
  write_sgns(o, cfg.sgns.train);
  o << "align = " << (cfg.sgns.align ? "true" : "false") << "\n"
    << "align_min_count = " << cfg.sgns.align_min_count << "\n"
    << "align_max_anchors = " << cfg.sgns.align_max_anchors << "\n\n[additive]\n"
    << "window = " << cfg.additive.window << "\n"
    << "background = " << quoted(cfg.additive.background) << "\n\n[additive.background_sgns]\n";
  write_sgns(o, cfg.additive.background_sgns);
  o << "\n[contextual]\n"
    << "file = " << quoted(cfg.contextual.file) << "\n";
  return o.str();
}

}  // namespace doppelkit
