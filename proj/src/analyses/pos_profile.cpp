#include <algorithm>

#include "doppelkit/analyses/analyses.hpp"
#include "doppelkit/error.hpp"

namespace doppelkit {

namespace {

int column_of(std::optional<Upos> tag) {
  if (!tag) return -1;
  for (std::size_t c = 0; c < kProfileTags.size(); ++c) {
    if (kProfileTags[c] == *tag) return static_cast<int>(c);
  }
  return -1;
}

// Position of the token carrying `token_index`, or the size when absent.
std::size_t position_of(const TaggedDocument& doc, std::size_t token_index) {
  const auto it = std::lower_bound(doc.tokens.begin(), doc.tokens.end(), token_index,
                                   [](const Token& t, std::size_t v) { return t.token_index < v; });
  if (it == doc.tokens.end() || it->token_index != token_index) return doc.tokens.size();
  return static_cast<std::size_t>(it - doc.tokens.begin());
}

}  // namespace

std::array<std::array<double, 6>, 2> PosProfile::normalized() const {
  std::array<std::array<double, 6>, 2> out{};
  for (std::size_t r = 0; r < 2; ++r) {
    std::uint64_t sum = 0;
    for (auto v : counts[r]) sum += v;
    if (sum == 0) continue;
    for (std::size_t c = 0; c < 6; ++c) out[r][c] = static_cast<double>(counts[r][c]) / static_cast<double>(sum);
  }
  return out;
}

std::array<std::array<double, 6>, 2> PosProfile::normalized_without_det() const {
  constexpr std::size_t det = 2;
  std::array<std::array<double, 6>, 2> out{};
  for (std::size_t r = 0; r < 2; ++r) {
    std::uint64_t sum = 0;
    for (std::size_t c = 0; c < 6; ++c) {
      if (c != det) sum += counts[r][c];
    }
    if (sum == 0) continue;
    for (std::size_t c = 0; c < 6; ++c) {
      if (c != det) out[r][c] = static_cast<double>(counts[r][c]) / static_cast<double>(sum);
    }
  }
  return out;
}

std::uint64_t PosProfile::total() const {
  std::uint64_t sum = 0;
  for (const auto& row : counts) {
    for (auto v : row) sum += v;
  }
  return sum;
}

PosProfile pos_profile(const std::vector<ProfileInput>& inputs) {
  PosProfile profile;
  for (const ProfileInput& in : inputs) {
    const TaggedDocument& doc = *in.doc;
    if (!doc.tagged) throw RequiresTaggedInput(doc.doc_id);
    for (const MentionIndex* index : in.mentions) {
      for (const auto& [id, spans] : index->spans) {
        std::size_t row;
        if (is_character_token(id)) {
          row = 0;
        } else if (is_noun_token(id)) {
          row = 1;
        } else {
          continue;
        }
        for (const Span& span : spans) {
          const std::size_t first = position_of(doc, span.begin);
          const std::size_t last = position_of(doc, span.end - 1);
          if (first == doc.tokens.size() || last == doc.tokens.size()) {
            throw Error("InvalidSpan", "mention span of " + id + " is outside document " + doc.doc_id);
          }
          const std::size_t lo = first >= 2 ? first - 2 : 0;
          const std::size_t hi = std::min(doc.tokens.size(), last + 3);
          for (std::size_t p = lo; p < hi; ++p) {
            if (p >= first && p <= last) continue;
            const int col = column_of(doc.tokens[p].upos);
            if (col >= 0) ++profile.counts[row][static_cast<std::size_t>(col)];
          }
        }
      }
    }
  }
  return profile;
}

}  // namespace doppelkit
