#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "crmoji/emoji_codec.hpp"
#include "crmoji/sentiment.hpp"

namespace crmoji::testing {

/// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::string file(std::string_view name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

void write_text(const std::string& path, std::string_view content);
std::string read_text(const std::string& path);

/// Path of a bundled resource table.
std::string data_file(std::string_view name);

/// Small hand-written tables: :smile: 😊, :slightly_smiling_face: 🙂,
/// :thumbsup:/:+1: 👍, :thinking: 🤔, :heart: ❤️ and emoticons :) :-) <3.
const CodecTables& small_codec();

/// The shipped resource tables.
const CodecTables& bundled_codec();
const SentimentResources& bundled_sentiment();

}  // namespace crmoji::testing
