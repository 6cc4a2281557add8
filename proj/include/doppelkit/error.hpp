#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace doppelkit {

// Every failure the library reports carries a stable kind name so that run
// reports can record it without string-matching messages.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  std::string_view kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class EmptyDocument : public Error {
 public:
  EmptyDocument() : Error("EmptyDocument", "document contains no tokens") {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& detail)
      : Error("ParseError", "line " + std::to_string(line) + ": " + detail), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class UnsplittableDocument : public Error {
 public:
  UnsplittableDocument()
      : Error("UnsplittableDocument", "document needs at least two sentences to split") {}
};

class InvalidInventory : public Error {
 public:
  explicit InvalidInventory(const std::string& detail) : Error("InvalidInventory", detail) {}
};

class InsufficientNouns : public Error {
 public:
  InsufficientNouns(std::size_t needed, std::size_t available)
      : Error("InsufficientNouns", "need " + std::to_string(needed) + " candidate nouns, found " +
                                       std::to_string(available)),
        needed_(needed),
        available_(available) {}
  std::size_t needed() const noexcept { return needed_; }
  std::size_t available() const noexcept { return available_; }

 private:
  std::size_t needed_;
  std::size_t available_;
};

class EmptyVocabulary : public Error {
 public:
  EmptyVocabulary() : Error("EmptyVocabulary", "no context vocabulary left after excluding targets") {}
};

class VocabularyTooSmall : public Error {
 public:
  VocabularyTooSmall(std::size_t size, std::size_t needed)
      : Error("VocabularyTooSmall", "vocabulary has " + std::to_string(size) + " types, need at least " +
                                        std::to_string(needed)) {}
};

class MissingBackground : public Error {
 public:
  MissingBackground() : Error("MissingBackground", "background embedding table is empty") {}
};

class DimMismatch : public Error {
 public:
  DimMismatch(const std::string& entity, std::size_t expected, std::size_t got)
      : Error("DimMismatch", "entity " + entity + ": expected dim " + std::to_string(expected) + ", got " +
                                 std::to_string(got)),
        entity_(entity),
        expected_(expected),
        got_(got) {}
  const std::string& entity() const noexcept { return entity_; }
  std::size_t expected() const noexcept { return expected_; }
  std::size_t got() const noexcept { return got_; }

 private:
  std::string entity_;
  std::size_t expected_;
  std::size_t got_;
};

class EmptySpace : public Error {
 public:
  EmptySpace() : Error("EmptySpace", "no vectors matched the requested filter") {}
};

class TooFewEntities : public Error {
 public:
  TooFewEntities(std::size_t n, std::size_t needed)
      : Error("TooFewEntities", std::to_string(n) + " entities available, need at least " + std::to_string(needed)) {}
};

class ZeroVector : public Error {
 public:
  explicit ZeroVector(const std::string& entity)
      : Error("ZeroVector", "entity " + entity + " has a zero vector"), entity_(entity) {}
  const std::string& entity() const noexcept { return entity_; }

 private:
  std::string entity_;
};

class UndefinedCorrelation : public Error {
 public:
  UndefinedCorrelation() : Error("UndefinedCorrelation", "correlation undefined for a constant input") {}
};

class TooFewNovels : public Error {
 public:
  explicit TooFewNovels(std::size_t n)
      : Error("TooFewNovels", "only " + std::to_string(n) + " novels joined, need at least 3") {}
};

class RequiresTaggedInput : public Error {
 public:
  explicit RequiresTaggedInput(const std::string& doc_id)
      : Error("RequiresTaggedInput", "document " + doc_id + " carries no UPOS tags") {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& detail) : Error("ConfigError", detail) {}
};

class EmptyRun : public Error {
 public:
  explicit EmptyRun(const std::string& detail) : Error("EmptyRun", detail) {}
};

}  // namespace doppelkit
