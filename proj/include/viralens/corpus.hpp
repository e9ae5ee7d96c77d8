#ifndef VIRALENS_CORPUS_HPP
#define VIRALENS_CORPUS_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

namespace viralens {

enum class Label { True, Fake, Unlabeled };

std::string label_name(Label l);
std::optional<Label> label_from_name(const std::string& s);

struct AuthorProfile {
  std::string user_id;
  std::int64_t followers = 0;
  std::int64_t friends = 0;
  bool verified = false;
};

struct RetweetEvent {
  std::string event_id;
  std::string news_id;
  std::optional<std::string> parent_id; // absent = direct retweet of the root
  std::int64_t created_at = 0;
  AuthorProfile user;
};

// Binary/scalar content signals used as regression controls.
struct ContentFeatures {
  bool mention = false;
  bool hashtag = false;
  bool location = false;
  bool date = false;
  bool url = false;
  std::int64_t length = 0;
  bool emergency = false;
};

// Subset of ContentFeatures supplied in the input record; provided fields
// override extraction heuristics.
struct PartialFeatures {
  std::optional<bool> mention, hashtag, location, date, url, emergency;
  std::optional<std::int64_t> length;
};

struct NewsItem {
  std::string id;
  std::vector<std::string> tokens;
  std::optional<std::string> raw_text;
  std::int64_t created_at = 0;
  AuthorProfile author;
  Label label = Label::Unlabeled;
  std::optional<std::string> topic;
  std::optional<bool> emergency;
  std::optional<PartialFeatures> provided_features;
  std::vector<RetweetEvent> retweets;
};

struct RejectedLine {
  std::size_t line_number = 0;
  std::string reason;
};

struct SourceManifest {
  std::vector<std::string> files;
  std::size_t news_accepted = 0;
  std::size_t retweets_accepted = 0;
  std::vector<RejectedLine> rejects;
};

struct Corpus {
  std::vector<NewsItem> items;
  SourceManifest manifest;

  const NewsItem* find(const std::string& id) const;
  void rebuild_index();

private:
  std::unordered_map<std::string, std::size_t> index_;
};

struct LoadOptions {
  // Lenient mode rejects bad lines into the manifest; strict mode throws.
  bool strict = false;
};

Corpus load_corpus(const std::string& path, const LoadOptions& opts = {});
Corpus parse_corpus(std::istream& in, const std::string& source_name,
                    const LoadOptions& opts = {});

// JSONL writer, one news record per item followed by its retweet records.
// parse(save(c)) reproduces every field value.
void save_corpus(const Corpus& corpus, std::ostream& out);

struct FeatureConfig {
  // Weibo hashtags are "#...#" pairs; plain style matches "#word".
  bool weibo_hashtag = true;
  // Matches ISO-like dates, CJK year/month/day forms and clock times.
  std::string date_pattern =
      "[0-9]{4}[-/.][0-9]{1,2}[-/.][0-9]{1,2}|[0-9]{4}\xE5\xB9\xB4|"
      "[0-9]{1,2}\xE6\x9C\x88[0-9]{1,2}\xE6\x97\xA5|[0-9]{1,2}:[0-9]{2}";
  // Default list covers the 2015 Tianjin port explosion, the one disaster
  // event inside the reference sampling window.
  std::vector<std::string> emergency_keywords = {
      "\xE5\xA4\xA9\xE6\xB4\xA5",         // Tianjin
      "\xE6\xBB\xA8\xE6\xB5\xB7",         // Binhai
      "\xE7\x88\x86\xE7\x82\xB8",         // explosion
      "tianjin", "binhai", "explosion"};
};

// Provided fields win; everything else comes from raw-text heuristics.
// Throws FeatureError when the item has neither raw text nor provided
// features.
ContentFeatures extract_features(const NewsItem& item, const FeatureConfig& config = {});

// Unicode code points in a UTF-8 string (all characters count).
std::int64_t utf8_length(const std::string& s);

} // namespace viralens

#endif
