#include "fixtures.hpp"

#include <atomic>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "crmoji/pipeline.hpp"

namespace crmoji::testing {

namespace fs = std::filesystem;

TempDir::TempDir() {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto candidate = fs::temp_directory_path() /
                     ("crmoji-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    if (fs::create_directory(candidate)) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("cannot create a temporary directory");
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_text(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string data_file(std::string_view name) { return (fs::path(CRMOJI_TEST_DATA_DIR) / name).string(); }

const CodecTables& small_codec() {
  static const CodecTables tables(
      {{":)", "slightly_smiling_face"}, {":-)", "slightly_smiling_face"}, {"<3", "heart"}},
      {{"smile", "\U0001F60A"},
       {"slightly_smiling_face", "\U0001F642"},
       {"thumbsup", "\U0001F44D"},
       {"+1", "\U0001F44D"},
       {"thinking", "\U0001F914"},
       {"heart", "❤️"}});
  return tables;
}

const CodecTables& bundled_codec() {
  static const CodecTables tables = load_codec_tables(data_file("emoticons.csv"), data_file("shortcodes.csv"));
  return tables;
}

const SentimentResources& bundled_sentiment() {
  static const SentimentResources resources = [] {
    RunConfig config;
    config.paths = ResourcePaths::in_dir(CRMOJI_TEST_DATA_DIR);
    return load_resources(config, false).sentiment;
  }();
  return resources;
}

}  // namespace crmoji::testing
