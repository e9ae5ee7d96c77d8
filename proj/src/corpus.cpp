#include "viralens/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "viralens/errors.hpp"

namespace viralens {

using nlohmann::json;

std::string label_name(Label l) {
  switch (l) {
    case Label::True: return "true";
    case Label::Fake: return "fake";
    default: return "unlabeled";
  }
}

std::optional<Label> label_from_name(const std::string& s) {
  if (s == "true") return Label::True;
  if (s == "fake") return Label::Fake;
  if (s == "unlabeled") return Label::Unlabeled;
  return std::nullopt;
}

const NewsItem* Corpus::find(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &items[it->second];
}

void Corpus::rebuild_index() {
  index_.clear();
  index_.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) index_.emplace(items[i].id, i);
}

namespace {

struct LineError {
  std::string reason;
};

std::string require_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) throw LineError{std::string("missing or non-string \"") + key + "\""};
  return it->get<std::string>();
}

std::int64_t require_int(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number_integer()) throw LineError{std::string("missing or non-integer \"") + key + "\""};
  return it->get<std::int64_t>();
}

AuthorProfile parse_author(const json& j, bool friends_required) {
  auto it = j.find("author");
  if (it == j.end()) it = j.find("user");
  if (it == j.end() || !it->is_object()) throw LineError{"missing author/user object"};
  const json& a = *it;
  AuthorProfile out;
  out.user_id = require_string(a, "user_id");
  out.followers = require_int(a, "followers");
  if (out.followers < 0) throw LineError{"negative follower count"};
  if (auto f = a.find("friends"); f != a.end() && f->is_number_integer()) {
    out.friends = f->get<std::int64_t>();
    if (out.friends < 0) throw LineError{"negative friend count"};
  } else if (friends_required) {
    throw LineError{"missing or non-integer \"friends\""};
  }
  if (auto v = a.find("verified"); v != a.end() && v->is_boolean()) out.verified = v->get<bool>();
  return out;
}

PartialFeatures parse_partial_features(const json& f) {
  PartialFeatures out;
  auto get_bool = [&](const char* key, std::optional<bool>& slot) {
    auto it = f.find(key);
    if (it != f.end() && it->is_boolean()) slot = it->get<bool>();
  };
  get_bool("mention", out.mention);
  get_bool("hashtag", out.hashtag);
  get_bool("location", out.location);
  get_bool("date", out.date);
  get_bool("url", out.url);
  get_bool("emergency", out.emergency);
  if (auto it = f.find("length"); it != f.end() && it->is_number_integer()) {
    auto v = it->get<std::int64_t>();
    if (v < 0) throw LineError{"negative length"};
    out.length = v;
  }
  return out;
}

NewsItem parse_news(const json& j) {
  NewsItem item;
  item.id = require_string(j, "id");
  if (auto it = j.find("tokens"); it != j.end() && it->is_array()) {
    for (const auto& t : *it) {
      if (!t.is_string()) throw LineError{"non-string token"};
      item.tokens.push_back(t.get<std::string>());
    }
  }
  if (auto it = j.find("raw_text"); it != j.end() && it->is_string())
    item.raw_text = it->get<std::string>();
  if (item.tokens.empty() && !item.raw_text)
    throw LineError{"record needs tokens or raw_text"};
  item.created_at = require_int(j, "created_at");
  item.author = parse_author(j, /*friends_required=*/true);
  auto label = label_from_name(require_string(j, "label"));
  if (!label) throw LineError{"unknown label"};
  item.label = *label;
  if (auto it = j.find("topic"); it != j.end() && it->is_string())
    item.topic = it->get<std::string>();
  if (auto it = j.find("emergency"); it != j.end() && it->is_boolean())
    item.emergency = it->get<bool>();
  if (auto it = j.find("features"); it != j.end() && it->is_object())
    item.provided_features = parse_partial_features(*it);
  return item;
}

RetweetEvent parse_retweet(const json& j) {
  RetweetEvent ev;
  ev.event_id = require_string(j, "event_id");
  ev.news_id = require_string(j, "news_id");
  if (auto it = j.find("parent_id"); it != j.end() && it->is_string())
    ev.parent_id = it->get<std::string>();
  ev.created_at = require_int(j, "created_at");
  ev.user = parse_author(j, /*friends_required=*/false);
  return ev;
}

} // namespace

Corpus parse_corpus(std::istream& in, const std::string& source_name, const LoadOptions& opts) {
  Corpus corpus;
  corpus.manifest.files.push_back(source_name);

  std::unordered_map<std::string, std::size_t> index;
  std::unordered_map<std::string, std::size_t> events_seen; // event_id -> line
  std::string line;
  std::size_t line_number = 0;

  auto reject = [&](const std::string& reason) {
    if (opts.strict) {
      std::ostringstream msg;
      msg << source_name << ":" << line_number << ": " << reason;
      throw LoadError(msg.str());
    }
    corpus.manifest.rejects.push_back({line_number, reason});
  };

  // Retweet records may precede their news record; buffer and attach after.
  std::vector<std::pair<std::size_t, RetweetEvent>> pending;

  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      reject("invalid JSON object");
      continue;
    }
    try {
      auto rec = j.find("record");
      if (rec != j.end() && rec->is_string() && rec->get<std::string>() == "retweet") {
        pending.emplace_back(line_number, parse_retweet(j));
      } else {
        NewsItem item = parse_news(j);
        if (index.count(item.id)) {
          reject("duplicate news id \"" + item.id + "\"");
          continue;
        }
        index.emplace(item.id, corpus.items.size());
        corpus.items.push_back(std::move(item));
        ++corpus.manifest.news_accepted;
      }
    } catch (const LineError& e) {
      reject(e.reason);
    }
  }

  for (auto& [lineno, ev] : pending) {
    line_number = lineno;
    auto it = index.find(ev.news_id);
    if (it == index.end()) {
      reject("retweet references unknown news id \"" + ev.news_id + "\"");
      continue;
    }
    NewsItem& item = corpus.items[it->second];
    if (ev.created_at < item.created_at) {
      reject("retweet predates news item \"" + ev.news_id + "\"");
      continue;
    }
    std::string event_key = ev.news_id + "\x1f" + ev.event_id;
    if (!events_seen.emplace(event_key, lineno).second) {
      reject("duplicate event id \"" + ev.event_id + "\" for news \"" + ev.news_id + "\"");
      continue;
    }
    item.retweets.push_back(std::move(ev));
    ++corpus.manifest.retweets_accepted;
  }

  corpus.rebuild_index();
  return corpus;
}

Corpus load_corpus(const std::string& path, const LoadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open corpus file: " + path);
  return parse_corpus(in, path, opts);
}

namespace {

json author_to_json(const AuthorProfile& a, bool full) {
  json j{{"user_id", a.user_id}, {"followers", a.followers}};
  if (full) {
    j["friends"] = a.friends;
    j["verified"] = a.verified;
  } else if (a.friends != 0 || a.verified) {
    j["friends"] = a.friends;
    j["verified"] = a.verified;
  }
  return j;
}

} // namespace

void save_corpus(const Corpus& corpus, std::ostream& out) {
  for (const auto& item : corpus.items) {
    json j;
    j["id"] = item.id;
    j["tokens"] = item.tokens;
    j["raw_text"] = item.raw_text ? json(*item.raw_text) : json(nullptr);
    j["created_at"] = item.created_at;
    j["author"] = author_to_json(item.author, true);
    j["label"] = label_name(item.label);
    j["topic"] = item.topic ? json(*item.topic) : json(nullptr);
    j["emergency"] = item.emergency ? json(*item.emergency) : json(nullptr);
    if (item.provided_features) {
      const auto& f = *item.provided_features;
      json fj = json::object();
      if (f.mention) fj["mention"] = *f.mention;
      if (f.hashtag) fj["hashtag"] = *f.hashtag;
      if (f.location) fj["location"] = *f.location;
      if (f.date) fj["date"] = *f.date;
      if (f.url) fj["url"] = *f.url;
      if (f.emergency) fj["emergency"] = *f.emergency;
      if (f.length) fj["length"] = *f.length;
      j["features"] = fj;
    } else {
      j["features"] = json(nullptr);
    }
    out << j.dump() << '\n';
    for (const auto& ev : item.retweets) {
      json r;
      r["record"] = "retweet";
      r["event_id"] = ev.event_id;
      r["news_id"] = ev.news_id;
      r["parent_id"] = ev.parent_id ? json(*ev.parent_id) : json(nullptr);
      r["created_at"] = ev.created_at;
      r["user"] = author_to_json(ev.user, false);
      out << r.dump() << '\n';
    }
  }
}

std::int64_t utf8_length(const std::string& s) {
  std::int64_t n = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++n; // skip continuation bytes
  return n;
}

ContentFeatures extract_features(const NewsItem& item, const FeatureConfig& config) {
  if (!item.raw_text && !item.provided_features)
    throw FeatureError("item \"" + item.id + "\" has neither raw_text nor provided features");

  ContentFeatures out;
  const std::string text = item.raw_text.value_or("");

  if (item.raw_text) {
    out.mention = text.find('@') != std::string::npos;
    if (config.weibo_hashtag) {
      static const std::regex weibo_tag("#[^#]+#");
      out.hashtag = std::regex_search(text, weibo_tag);
    } else {
      static const std::regex plain_tag("#[A-Za-z0-9_]+");
      out.hashtag = std::regex_search(text, plain_tag);
    }
    out.url = text.find("http://") != std::string::npos ||
              text.find("https://") != std::string::npos;
    std::regex date_re(config.date_pattern);
    out.date = std::regex_search(text, date_re);
    out.length = utf8_length(text);
    std::string lowered = text;
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (const auto& kw : config.emergency_keywords) {
      if (!kw.empty() && lowered.find(kw) != std::string::npos) {
        out.emergency = true;
        break;
      }
    }
  }

  // Location has no text heuristic; it is input-provided or false.
  out.location = false;

  if (item.emergency) out.emergency = *item.emergency;

  if (item.provided_features) {
    const auto& p = *item.provided_features;
    if (p.mention) out.mention = *p.mention;
    if (p.hashtag) out.hashtag = *p.hashtag;
    if (p.location) out.location = *p.location;
    if (p.date) out.date = *p.date;
    if (p.url) out.url = *p.url;
    if (p.emergency) out.emergency = *p.emergency;
    if (p.length) out.length = *p.length;
  }
  return out;
}

} // namespace viralens
