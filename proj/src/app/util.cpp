#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <openssl/evp.h>

#include "doppelkit/app/pipeline.hpp"
#include "doppelkit/entities.hpp"
#include "doppelkit/error.hpp"

namespace fs = std::filesystem;

namespace doppelkit {

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("HashError", "SHA-256 computation failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IoError", "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, static_cast<std::size_t>(res.ptr - buf));
}

std::vector<NovelSource> discover_dataset(const std::string& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw EmptyRun("dataset root " + root + " is not a directory");
  std::vector<NovelSource> out;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (!entry.is_directory()) continue;
    NovelSource src;
    src.novel_id = entry.path().filename().string();
    src.dir = entry.path().string();
    auto pick = [&](std::initializer_list<const char*> names) -> std::optional<std::string> {
      for (const char* name : names) {
        const fs::path p = entry.path() / name;
        if (fs::is_regular_file(p)) return p.string();
      }
      return std::nullopt;
    };
    src.text_path = pick({"novel.conllu", "novel.txt"});
    src.wiki_path = pick({"wiki.conllu", "wiki.txt"});
    src.characters_path = pick({"characters.json"});
    out.push_back(std::move(src));
  }
  std::sort(out.begin(), out.end(), [](const NovelSource& a, const NovelSource& b) { return a.novel_id < b.novel_id; });
  return out;
}

std::vector<std::string> cmd_bootstrap_characters(const std::string& dataset_root, std::size_t min_count) {
  std::vector<std::string> written;
  for (const NovelSource& src : discover_dataset(dataset_root)) {
    if (!src.text_path) continue;
    const TaggedDocument doc = load_document(*src.text_path, src.novel_id, SourceKind::novel);
    const auto draft = bootstrap_characters(doc, min_count);
    const std::string path = (fs::path(src.dir) / "characters.draft.json").string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("IoError", "cannot write " + path);
    out << characters_to_json(draft);
    written.push_back(path);
  }
  return written;
}

}  // namespace doppelkit
