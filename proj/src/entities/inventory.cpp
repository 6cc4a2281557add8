#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "doppelkit/entities.hpp"
#include "doppelkit/error.hpp"
#include "doppelkit/text.hpp"

namespace doppelkit {

namespace {

constexpr std::string_view kCharPrefix = "__ent_";
constexpr std::string_view kNounPrefix = "__noun_";
constexpr std::string_view kSuffix = "__";

bool wrapped(std::string_view s, std::string_view prefix) {
  return s.size() > prefix.size() + kSuffix.size() && s.substr(0, prefix.size()) == prefix &&
         s.substr(s.size() - kSuffix.size()) == kSuffix;
}

std::size_t alias_length(const std::string& alias) {
  std::istringstream in(alias);
  std::size_t n = 0;
  for (std::string w; in >> w;) ++n;
  return n;
}

}  // namespace

std::string slugify(std::string_view id) {
  std::string out;
  bool pending_sep = false;
  std::size_t pos = 0;
  while (pos < id.size()) {
    const auto d = text::decode(id, pos);
    if (!d) throw InvalidInventory("character id is not valid UTF-8");
    pos += d->length;
    if (text::is_letter(d->code_point) || text::is_digit(d->code_point)) {
      if (pending_sep && !out.empty()) out.push_back('_');
      pending_sep = false;
      text::append_utf8(out, text::to_lower(d->code_point));
    } else {
      pending_sep = true;
    }
  }
  return out;
}

std::string character_token(std::string_view slug) {
  return std::string(kCharPrefix) + std::string(slug) + std::string(kSuffix);
}

std::string noun_token(std::string_view lemma) {
  return std::string(kNounPrefix) + std::string(lemma) + std::string(kSuffix);
}

bool is_character_token(std::string_view surface) { return wrapped(surface, kCharPrefix); }
bool is_noun_token(std::string_view surface) { return wrapped(surface, kNounPrefix); }

void validate_characters(const std::vector<CharacterEntry>& characters) {
  std::set<std::string> ids;
  std::map<std::string, std::string> alias_owner;
  for (const auto& c : characters) {
    if (!is_character_token(c.entity_id)) throw InvalidInventory("malformed entity id '" + c.entity_id + "'");
    if (!ids.insert(c.entity_id).second) throw InvalidInventory("duplicate character id " + c.entity_id);
    if (c.aliases.empty()) throw InvalidInventory("character " + c.entity_id + " has no aliases");
    for (const auto& alias : c.aliases) {
      const std::size_t len = alias_length(alias);
      if (len == 0 || len > 5) {
        throw InvalidInventory("alias '" + alias + "' of " + c.entity_id + " must have 1 to 5 tokens");
      }
      const auto [it, inserted] = alias_owner.emplace(alias, c.entity_id);
      if (!inserted && it->second != c.entity_id) {
        throw InvalidInventory("alias '" + alias + "' is shared by " + it->second + " and " + c.entity_id);
      }
    }
  }
}

std::vector<CharacterEntry> parse_characters_json(std::string_view text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // nlohmann reports a byte offset; convert it to a line number.
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + upto, '\n'));
    throw ParseError(line, e.what());
  }
  if (!root.is_object() || !root.contains("characters") || !root["characters"].is_array()) {
    throw InvalidInventory("expected an object with a \"characters\" array");
  }
  std::vector<CharacterEntry> out;
  for (const auto& item : root["characters"]) {
    if (!item.is_object() || !item.contains("id") || !item["id"].is_string()) {
      throw InvalidInventory("every character needs a string \"id\"");
    }
    CharacterEntry entry;
    const std::string slug = slugify(item["id"].get<std::string>());
    if (slug.empty()) throw InvalidInventory("character id slugifies to nothing");
    entry.entity_id = character_token(slug);
    entry.display_name = item.value("name", item["id"].get<std::string>());
    if (item.contains("aliases")) {
      if (!item["aliases"].is_array()) throw InvalidInventory("aliases of " + slug + " must be an array");
      std::set<std::string> seen;
      for (const auto& a : item["aliases"]) {
        if (!a.is_string()) throw InvalidInventory("aliases of " + slug + " must be strings");
        const std::string alias = a.get<std::string>();
        if (seen.insert(alias).second) entry.aliases.push_back(alias);
      }
    }
    out.push_back(std::move(entry));
  }
  validate_characters(out);
  return out;
}

std::vector<CharacterEntry> load_characters(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IoError", "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_characters_json(buf.str());
}

std::string characters_to_json(const std::vector<CharacterEntry>& characters) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& c : characters) {
    const std::string_view id = c.entity_id;
    nlohmann::ordered_json item;
    item["id"] = std::string(id.substr(kCharPrefix.size(), id.size() - kCharPrefix.size() - kSuffix.size()));
    item["name"] = c.display_name;
    item["aliases"] = c.aliases;
    arr.push_back(std::move(item));
  }
  nlohmann::ordered_json root;
  root["characters"] = std::move(arr);
  return root.dump(1) + "\n";
}

std::vector<std::string> EntityInventory::character_ids() const {
  std::vector<std::string> ids;
  for (const auto& c : characters) ids.push_back(c.entity_id);
  return ids;
}

std::vector<std::string> EntityInventory::noun_ids() const {
  std::vector<std::string> ids;
  for (const auto& n : common_nouns) ids.push_back(n.entity_id);
  return ids;
}

std::size_t MentionIndex::total() const {
  std::size_t n = 0;
  for (const auto& [id, list] : spans) n += list.size();
  return n;
}

std::map<std::string, std::size_t> count_mentions(const MentionIndex& index, const std::vector<std::string>& ids) {
  std::map<std::string, std::size_t> counts;
  for (const auto& id : ids) counts[id] = 0;
  for (const auto& [id, list] : index.spans) counts[id] = list.size();
  return counts;
}

}  // namespace doppelkit
