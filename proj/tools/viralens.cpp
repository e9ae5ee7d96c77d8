// viralens: batch analytics over news corpora with retweet cascades.
// Subcommands cover ingestion, diffusion metrics, emotion inference, group
// partitioning, divergence tests, regression models, keyword extraction,
// the anger-tagging sweep, synthetic corpora and a combined report run.
#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "viralens/cascade.hpp"
#include "viralens/corpus.hpp"
#include "viralens/emotion.hpp"
#include "viralens/errors.hpp"
#include "viralens/inference.hpp"
#include "viralens/intervention.hpp"
#include "viralens/keywords.hpp"
#include "viralens/partition.hpp"
#include "viralens/stats.hpp"
#include "viralens/synth.hpp"
#include "viralens/util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace viralens;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

struct RunContext {
  std::string command;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string out_dir = ".";
  std::uint64_t seed = 42;
  std::string config_blob; // canonical option dump for the manifest hash
};

std::ofstream open_output(RunContext& ctx, const std::string& name) {
  fs::create_directories(ctx.out_dir);
  fs::path path = fs::path(ctx.out_dir) / name;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write output file: " + path.string());
  ctx.outputs.push_back(path.string());
  return out;
}

void write_manifest(const RunContext& ctx) {
  json m;
  m["command"] = ctx.command;
  m["inputs"] = ctx.inputs;
  m["outputs"] = ctx.outputs;
  m["seed"] = ctx.seed;
  m["tool_version"] = "viralens 0.1.0";
  m["config_hash"] = fnv1a64(ctx.command + "\n" + ctx.config_blob);
  fs::create_directories(ctx.out_dir);
  std::ofstream out(fs::path(ctx.out_dir) / "run_manifest.json");
  out << m.dump(2) << '\n';
}

std::string csv_na(const std::optional<double>& v) {
  return v ? format_double(*v) : "NA";
}

// Quotes a cell when it contains CSV metacharacters, so identifiers and
// terms from arbitrary corpora keep the files round-trippable.
std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n\r") == std::string::npos) return value;
  std::string quoted = "\"";
  for (char c : value) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

Corpus load_input_corpus(RunContext& ctx, const std::string& path, bool strict) {
  ctx.inputs.push_back(path);
  return load_corpus(path, {strict});
}

Lexicon load_input_lexicon(RunContext& ctx, const std::string& path) {
  ctx.inputs.push_back(path);
  return load_lexicon(path);
}

// Per-item emotion distributions, computed in parallel in corpus order.
std::unordered_map<std::string, EmotionDistribution> infer_all(const Corpus& corpus,
                                                               const Lexicon& lexicon) {
  std::vector<EmotionDistribution> dists(corpus.items.size());
  parallel_for(corpus.items.size(), [&](std::size_t i) {
    dists[i] = infer_distribution(corpus.items[i].tokens, lexicon);
  });
  std::unordered_map<std::string, EmotionDistribution> map;
  map.reserve(corpus.items.size());
  for (std::size_t i = 0; i < corpus.items.size(); ++i)
    map.emplace(corpus.items[i].id, std::move(dists[i]));
  return map;
}

std::vector<const NewsItem*> select_items(const Corpus& corpus,
                                          const std::unordered_map<std::string, GroupTag>& groups,
                                          const std::vector<GroupFilter>& filters) {
  std::vector<const NewsItem*> out;
  for (const auto& item : corpus.items) {
    const GroupTag& tag = groups.at(item.id);
    for (const auto& filter : filters)
      if (filter.matches(tag)) {
        out.push_back(&item);
        break;
      }
  }
  return out;
}

std::vector<GroupFilter> parse_filters(const std::string& comma_separated) {
  std::vector<GroupFilter> filters;
  std::stringstream ss(comma_separated);
  std::string token;
  while (std::getline(ss, token, ',')) filters.push_back(GroupFilter::parse(token));
  if (filters.empty()) throw ConfigError("no group patterns given");
  return filters;
}

std::vector<std::int64_t> parse_grid(const std::string& comma_separated) {
  std::vector<std::int64_t> grid;
  std::stringstream ss(comma_separated);
  std::string token;
  while (std::getline(ss, token, ',')) grid.push_back(std::stoll(token));
  return grid;
}

// ---------------------------------------------------------------- commands

void cmd_ingest(RunContext& ctx, const std::string& corpus_path, bool strict) {
  Corpus corpus = load_input_corpus(ctx, corpus_path, strict);
  json report;
  report["files"] = corpus.manifest.files;
  report["news_accepted"] = corpus.manifest.news_accepted;
  report["retweets_accepted"] = corpus.manifest.retweets_accepted;
  report["rejects"] = json::array();
  for (const auto& reject : corpus.manifest.rejects)
    report["rejects"].push_back({{"line", reject.line_number}, {"reason", reject.reason}});
  auto out = open_output(ctx, "ingest_report.json");
  out << report.dump(2) << '\n';
  std::cout << "accepted " << corpus.manifest.news_accepted << " news items, "
            << corpus.manifest.retweets_accepted << " retweets, rejected "
            << corpus.manifest.rejects.size() << " lines\n";
}

void emit_virality_csv(RunContext& ctx, const Corpus& corpus) {
  std::vector<std::optional<double>> virality(corpus.items.size());
  std::vector<std::size_t> sizes(corpus.items.size());
  parallel_for(corpus.items.size(), [&](std::size_t i) {
    DiffusionTree tree = build_tree(corpus.items[i]);
    sizes[i] = tree.size();
    virality[i] = structural_virality(tree);
  });
  auto out = open_output(ctx, "virality.csv");
  out << "news_id,label,n,structural_virality\n";
  for (std::size_t i = 0; i < corpus.items.size(); ++i)
    out << csv_field(corpus.items[i].id) << ',' << label_name(corpus.items[i].label) << ',' << sizes[i]
        << ',' << csv_na(virality[i]) << '\n';
}

void cmd_timeline(RunContext& ctx, const std::string& corpus_path, bool strict,
                  std::int64_t bin_width) {
  Corpus corpus = load_input_corpus(ctx, corpus_path, strict);
  auto out = open_output(ctx, "timeline.csv");
  out << "news_id,bin,proportion\n";
  for (const auto& item : corpus.items) {
    TimelineProfile profile = timeline_profile(build_tree(item), bin_width);
    for (std::size_t bin = 0; bin < profile.proportions.size(); ++bin)
      out << csv_field(item.id) << ',' << bin << ',' << format_double(profile.proportions[bin]) << '\n';
  }
}

void emit_emotions_csv(RunContext& ctx, const Corpus& corpus, const Lexicon& lexicon,
                       const std::unordered_map<std::string, EmotionDistribution>& emotions) {
  auto out = open_output(ctx, "emotions.csv");
  out << "news_id";
  for (const auto& name : lexicon.emotions.names) out << ',' << csv_field(name);
  out << ",neutral\n";
  for (const auto& item : corpus.items) {
    const EmotionDistribution& d = emotions.at(item.id);
    out << csv_field(item.id);
    for (double o : d.occupations) out << ',' << format_double(o);
    out << ',' << (d.neutral ? 1 : 0) << '\n';
  }
}

void cmd_emotions(RunContext& ctx, const std::string& corpus_path,
                  const std::string& lexicon_path, bool strict,
                  const std::string& scorer_path) {
  Corpus corpus = load_input_corpus(ctx, corpus_path, strict);
  Lexicon lexicon = load_input_lexicon(ctx, lexicon_path);
  auto emotions = infer_all(corpus, lexicon);
  emit_emotions_csv(ctx, corpus, lexicon, emotions);

  auto coverage = coverage_stats(corpus, lexicon);
  if (coverage)
    std::cout << "item coverage " << format_double(coverage->item_coverage)
              << ", token coverage " << format_double(coverage->token_coverage) << '\n';

  if (scorer_path.empty()) return;
  // Scorer probabilities: JSONL {"news_id","scorer","probs":[...]} rows,
  // aggregated into per-item rank distributions.
  ctx.inputs.push_back(scorer_path);
  std::ifstream in(scorer_path);
  if (!in) throw LoadError("cannot open scorer file: " + scorer_path);
  std::map<std::string, std::vector<std::vector<double>>> by_item;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("news_id") || !j.contains("probs"))
      throw LoadError(scorer_path + ":" + std::to_string(line_number) + ": bad scorer record");
    by_item[j["news_id"].get<std::string>()].push_back(j["probs"].get<std::vector<double>>());
  }
  auto out = open_output(ctx, "rank_distribution.csv");
  out << "news_id,emotion,mean_rank";
  for (std::size_t r = 1; r <= lexicon.emotions.size(); ++r) out << ",rank" << r;
  out << '\n';
  for (const auto& [news_id, scores] : by_item) {
    RankDistribution ranks = rank_aggregate(scores, ctx.seed);
    auto means = ranks.mean_ranks();
    for (std::size_t e = 0; e < ranks.categories; ++e) {
      out << csv_field(news_id) << ',' << csv_field(lexicon.emotions.names[e]) << ','
          << format_double(means[e]);
      for (std::size_t r = 0; r < ranks.categories; ++r) out << ',' << ranks.histogram[e][r];
      out << '\n';
    }
  }
}

void emit_surface_csv(RunContext& ctx, const DivisionSurface& surface) {
  auto out = open_output(ctx, "division_surface.csv");
  out << "x,y,D\n";
  for (std::size_t i = 0; i < surface.x_grid.size(); ++i)
    for (std::size_t j = 0; j < surface.y_grid.size(); ++j)
      out << surface.x_grid[i] << ',' << surface.y_grid[j] << ','
          << csv_na(surface.scores[i][j]) << '\n';
}

void emit_groups_csv(RunContext& ctx, const Corpus& corpus,
                     const std::unordered_map<std::string, GroupTag>& groups) {
  auto out = open_output(ctx, "groups.csv");
  out << "news_id,group\n";
  for (const auto& item : corpus.items)
    out << csv_field(item.id) << ',' << groups.at(item.id).code() << '\n';
}

void cmd_partition(RunContext& ctx, const std::string& corpus_path, bool strict,
                   const std::string& x_grid_text, const std::string& y_grid_text,
                   std::int64_t assign_x, std::int64_t assign_y) {
  Corpus corpus = load_input_corpus(ctx, corpus_path, strict);
  std::vector<std::int64_t> xs = x_grid_text.empty() ? default_x_grid() : parse_grid(x_grid_text);
  std::vector<std::int64_t> ys = y_grid_text.empty() ? default_y_grid() : parse_grid(y_grid_text);
  DivisionSurface surface = optimize_division(corpus, xs, ys);
  emit_surface_csv(ctx, surface);
  if (surface.best)
    std::cout << "best tuple (x, y) = (" << surface.best->follower_threshold << ", "
              << surface.best->retweet_threshold << ")\n";
  emit_groups_csv(ctx, corpus, assign_groups(corpus, {assign_x, assign_y}));
}

void emit_dominance_csv(RunContext& ctx, const Corpus& corpus) {
  DominanceMatrix dom = information_dominance(corpus);
  auto out = open_output(ctx, "dominance.csv");
  out << "group";
  for (std::size_t j = 0; j < kUserGroups; ++j) out << ",G" << j;
  out << '\n';
  for (std::size_t i = 0; i < kUserGroups; ++i) {
    out << 'G' << i;
    for (std::size_t j = 0; j < kUserGroups; ++j) out << ',' << csv_na(dom.id[i][j]);
    out << '\n';
  }
}

void emit_compare_csv(RunContext& ctx, const std::string& file_name, const Corpus& corpus,
                      const Lexicon& lexicon,
                      const std::unordered_map<std::string, EmotionDistribution>& emotions,
                      const std::unordered_map<std::string, GroupTag>& groups,
                      const std::string& group_a, const std::string& group_b,
                      const std::string& metric = "all") {
  auto a_items = select_items(corpus, groups, {GroupFilter::parse(group_a)});
  auto b_items = select_items(corpus, groups, {GroupFilter::parse(group_b)});
  if (a_items.empty() || b_items.empty())
    throw ModelError("group " + (a_items.empty() ? group_a : group_b) + " selected no items");
  if (metric != "all" && !lexicon.emotions.index_of(metric))
    throw ConfigError("unknown metric \"" + metric + "\"");

  auto out = open_output(ctx, file_name);
  out << "emotion,n_" << group_a << ",n_" << group_b << ",mean_" << group_a << ",mean_"
      << group_b << ",ks_d,p_value\n";
  for (std::size_t e = 0; e < lexicon.emotions.size(); ++e) {
    if (metric != "all" && lexicon.emotions.names[e] != metric) continue;
    std::vector<double> a, b;
    a.reserve(a_items.size());
    b.reserve(b_items.size());
    for (const auto* item : a_items) a.push_back(emotions.at(item->id).occupations[e]);
    for (const auto* item : b_items) b.push_back(emotions.at(item->id).occupations[e]);
    double mean_a = 0, mean_b = 0;
    for (double v : a) mean_a += v;
    for (double v : b) mean_b += v;
    mean_a /= static_cast<double>(a.size());
    mean_b /= static_cast<double>(b.size());
    KsResult ks = ks_two_sample(a, b);
    out << csv_field(lexicon.emotions.names[e]) << ',' << a.size() << ',' << b.size() << ','
        << format_double(mean_a) << ',' << format_double(mean_b) << ','
        << format_double(ks.statistic) << ',' << format_double(ks.p_value) << '\n';
  }
}

void emit_ccdf_csv(RunContext& ctx, const std::string& file_name, const Corpus& corpus,
                   const Lexicon& lexicon,
                   const std::unordered_map<std::string, EmotionDistribution>& emotions,
                   const std::unordered_map<std::string, GroupTag>& groups,
                   const std::vector<std::string>& group_names) {
  auto out = open_output(ctx, file_name);
  out << "group,emotion,value,p_ge\n";
  for (const auto& group : group_names) {
    auto items = select_items(corpus, groups, {GroupFilter::parse(group)});
    if (items.empty()) continue;
    for (std::size_t e = 0; e < lexicon.emotions.size(); ++e) {
      std::vector<double> values;
      values.reserve(items.size());
      for (const auto* item : items) values.push_back(emotions.at(item->id).occupations[e]);
      for (const auto& [value, p] : ccdf_points(values))
        out << group << ',' << csv_field(lexicon.emotions.names[e]) << ','
            << format_double(value) << ',' << format_double(p) << '\n';
    }
  }
}

void cmd_compare(RunContext& ctx, const std::string& corpus_path,
                 const std::string& lexicon_path, bool strict, const std::string& groups_text,
                 const std::string& metric, std::int64_t x, std::int64_t y) {
  auto comma = groups_text.find(',');
  if (comma == std::string::npos || groups_text.find(',', comma + 1) != std::string::npos)
    throw ConfigError("--groups expects exactly two patterns, e.g. LHF,HLT");
  std::string group_a = groups_text.substr(0, comma);
  std::string group_b = groups_text.substr(comma + 1);

  Corpus corpus = load_input_corpus(ctx, corpus_path, strict);
  Lexicon lexicon = load_input_lexicon(ctx, lexicon_path);
  auto emotions = infer_all(corpus, lexicon);
  auto groups = assign_groups(corpus, {x, y});
  emit_compare_csv(ctx, "compare.csv", corpus, lexicon, emotions, groups, group_a, group_b,
                   metric);
  emit_ccdf_csv(ctx, "ccdf.csv", corpus, lexicon, emotions, groups, {group_a, group_b});
}

struct RegressOptions {
  std::string model = "logit";
  std::string response; // fake|retweets|h_news; default depends on model
  std::string groups_text;
  std::string emotions_text = "anger,joy,other_emotions";
  std::string controls_text =
      "follower,friend,mention,hashtag,location,date,url,length,emergency,topic_dummies";
  bool raw_followers = false;
  bool hc0 = false;
  std::int64_t window_hours = 48;
  std::int64_t x = 1000;
  std::int64_t y = 10;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (!token.empty()) out.push_back(token);
  }
  return out;
}

RegressionResult run_regression(const Corpus& corpus, const Lexicon& lexicon,
                                const std::unordered_map<std::string, EmotionDistribution>& emotions,
                                const std::unordered_map<std::string, GroupTag>& groups,
                                const RegressOptions& opt) {
  std::vector<const NewsItem*> items;
  if (opt.groups_text.empty()) {
    for (const auto& item : corpus.items) items.push_back(&item);
  } else {
    items = select_items(corpus, groups, parse_filters(opt.groups_text));
  }
  if (items.empty()) throw ModelError("group selection matched no items");

  ModelSpec spec;
  spec.emotion_terms = split_list(opt.emotions_text);
  spec.controls = split_list(opt.controls_text);
  if (opt.raw_followers) {
    spec.transforms["follower"] = "raw";
    spec.transforms["friend"] = "raw";
  }
  std::string response = opt.response;
  if (response.empty()) response = opt.model == "logit" ? "fake" : "retweets";
  if (response == "fake") spec.response = Response::FakeIndicator;
  else if (response == "retweets") spec.response = Response::Retweets48h;
  else if (response == "h_news") spec.response = Response::HNewsIndicator;
  else throw ConfigError("unknown response \"" + response + "\"");

  DesignMatrix design = build_design(items, emotions, spec, lexicon.emotions);
  ResponseConfig rc;
  rc.window_seconds = opt.window_hours * 3600;
  rc.h_retweet_threshold = opt.y;
  auto y = build_response(items, spec.response, rc);

  FitOptions fit;
  fit.hc0 = opt.hc0;
  return opt.model == "logit" ? fit_logit(design, y, fit) : fit_linear(design, y, fit);
}

void emit_regression_csv(RunContext& ctx, const std::string& file_name,
                         const RegressionResult& result) {
  auto out = open_output(ctx, file_name);
  out << "term,estimate,robust_se,p\n";
  for (std::size_t i = 0; i < result.terms.size(); ++i) {
    auto idx = static_cast<Eigen::Index>(i);
    out << csv_field(result.terms[i]) << ',' << format_double(result.coefficients[idx]) << ','
        << format_double(result.robust_se[idx]) << ',' << format_double(result.p_values[idx])
        << '\n';
  }
}

void cmd_regress(RunContext& ctx, const std::string& corpus_path,
                 const std::string& lexicon_path, bool strict, const RegressOptions& opt) {
  if (opt.model != "logit" && opt.model != "linear")
    throw ConfigError("--model must be logit or linear");
  Corpus corpus = load_input_corpus(ctx, corpus_path, strict);
  Lexicon lexicon = load_input_lexicon(ctx, lexicon_path);
  auto emotions = infer_all(corpus, lexicon);
  auto groups = assign_groups(corpus, {opt.x, opt.y});
  RegressionResult result = run_regression(corpus, lexicon, emotions, groups, opt);
  emit_regression_csv(ctx, "regress.csv", result);
  std::cout << "n=" << result.n << " "
            << (result.model == ModelKind::Logit
                    ? "loglik=" + format_double(result.log_likelihood)
                    : "r2=" + format_double(result.r_squared))
            << (result.converged ? "" : " (not converged)") << '\n';
}

void cmd_keywords(RunContext& ctx, const std::string& corpus_path,
                  const std::string& lexicon_path, bool strict, const std::string& pos,
                  const std::string& neg, std::size_t k, std::int64_t x, std::int64_t y,
                  std::size_t cv_folds, std::size_t top_terms) {
  Corpus corpus = load_input_corpus(ctx, corpus_path, strict);
  auto groups = assign_groups(corpus, {x, y});
  auto pos_items = select_items(corpus, groups, {GroupFilter::parse(pos)});
  auto neg_items = select_items(corpus, groups, {GroupFilter::parse(neg)});
  KeywordReport report = score_keywords(pos_items, neg_items, k);

  auto out = open_output(ctx, "keywords.csv");
  out << "term,chi2,mi,rank\n";
  for (const auto& kw : report.keywords)
    out << csv_field(kw.term) << ',' << format_double(kw.chi2) << ','
        << format_double(kw.mutual_information) << ',' << format_double(kw.combined_rank)
        << '\n';

  if (!lexicon_path.empty()) {
    Lexicon lexicon = load_input_lexicon(ctx, lexicon_path);
    auto profile = keyword_emotion_profile(report, lexicon);
    auto pout = open_output(ctx, "keyword_emotions.csv");
    pout << "emotion,count\n";
    for (std::size_t e = 0; e < lexicon.emotions.size(); ++e)
      pout << csv_field(lexicon.emotions.names[e]) << ',' << profile[e] << '\n';
    pout << "neutral," << profile.back() << '\n';
  }

  if (cv_folds >= 2) {
    double accuracy = separability_cv(pos_items, neg_items, cv_folds, top_terms, ctx.seed);
    std::cout << "separability: " << cv_folds << "-fold accuracy "
              << format_double(accuracy) << '\n';
  }
}

void emit_sweep_csv(RunContext& ctx, const std::string& file_name,
                    const InterventionReport& sweep, const std::vector<double>& hf_anger,
                    const std::vector<double>& ht_anger) {
  auto out = open_output(ctx, file_name);
  out << "theta,beta,prevented_hf,affected_ht\n";
  for (std::size_t i = 0; i < sweep.theta_grid.size(); ++i) {
    double theta = sweep.theta_grid[i];
    double prevented = 0, affected = 0;
    for (double v : hf_anger) prevented += v >= theta ? 1.0 : 0.0;
    for (double v : ht_anger) affected += v >= theta ? 1.0 : 0.0;
    out << format_double(theta) << ',' << format_double(sweep.beta_values[i]) << ','
        << format_double(prevented / static_cast<double>(hf_anger.size())) << ','
        << format_double(affected / static_cast<double>(ht_anger.size())) << '\n';
  }
}

void cmd_intervene(RunContext& ctx, const std::string& corpus_path,
                   const std::string& lexicon_path, bool strict, double theta_step,
                   std::int64_t x, std::int64_t y, bool with_logit) {
  Corpus corpus = load_input_corpus(ctx, corpus_path, strict);
  Lexicon lexicon = load_input_lexicon(ctx, lexicon_path);
  auto anger_index = lexicon.emotions.index_of("anger");
  if (!anger_index) throw ConfigError("lexicon has no anger category");
  auto emotions = infer_all(corpus, lexicon);
  auto groups = assign_groups(corpus, {x, y});

  std::vector<const NewsItem*> hf = select_items(corpus, groups, {GroupFilter::parse("HF")});
  std::vector<const NewsItem*> ht = select_items(corpus, groups, {GroupFilter::parse("HT")});
  if (hf.empty() || ht.empty()) throw ModelError("corpus has no HF or no HT items");

  std::vector<double> hf_anger, ht_anger;
  for (const auto* item : hf) hf_anger.push_back(emotions.at(item->id).occupations[*anger_index]);
  for (const auto* item : ht) ht_anger.push_back(emotions.at(item->id).occupations[*anger_index]);

  int steps = static_cast<int>(std::llround(1.0 / theta_step));
  if (steps < 1 || std::abs(1.0 / static_cast<double>(steps) - theta_step) > 1e-9)
    throw ConfigError("--theta-step must divide 1 evenly, e.g. 0.1 or 0.05");
  auto grid = theta_grid(steps);
  InterventionReport sweep = beta_sweep(hf_anger, ht_anger, grid);
  emit_sweep_csv(ctx, "intervention.csv", sweep, hf_anger, ht_anger);

  json summary;
  summary["best_theta"] = sweep.best_theta;
  summary["prevented_hf_fraction"] = sweep.prevented_hf_fraction;
  summary["affected_ht_fraction"] = sweep.affected_ht_fraction;
  auto tagging = tagging_report(corpus, sweep.best_theta, groups, emotions, lexicon.emotions);
  if (tagging && tagging->tagged_fake_share)
    summary["tagged_fake_share"] = *tagging->tagged_fake_share;

  if (with_logit) {
    HAngerResult h = h_anger_logit(hf, ht, sweep.best_theta, emotions, lexicon.emotions);
    summary["h_anger"] = {{"theta", sweep.best_theta},
                          {"odds_ratio", h.odds_ratio},
                          {"percent_more_likely", h.percent_more_likely},
                          {"coefficient", *h.fit.coefficient("h_anger")},
                          {"robust_se", *h.fit.se("h_anger")}};
    emit_regression_csv(ctx, "h_anger_logit.csv", h.fit);
  }
  auto sout = open_output(ctx, "intervention_summary.json");
  sout << summary.dump(2) << '\n';
  std::cout << "best theta " << format_double(sweep.best_theta) << ", beta "
            << format_double(sweep.prevented_hf_fraction - sweep.affected_ht_fraction) << '\n';
}

void cmd_synth(RunContext& ctx, const std::string& preset, std::size_t n_items,
               const std::string& shape, const std::string& corpus_name) {
  SynthConfig config;
  if (preset == "planted") config = planted_config(ctx.seed, n_items);
  else if (preset == "null") config = null_config(ctx.seed, n_items);
  else if (preset == "separation") config = separation_config(ctx.seed, n_items);
  else throw ConfigError("unknown preset \"" + preset + "\"");

  if (shape == "star") config.cascade.shape = CascadeShape::Star;
  else if (shape == "preferential") config.cascade.shape = CascadeShape::Preferential;
  else if (shape == "chain") config.cascade.shape = CascadeShape::ChainMix;
  else throw ConfigError("unknown cascade shape \"" + shape + "\"");

  SynthResult result = generate_corpus(config);
  {
    auto out = open_output(ctx, corpus_name);
    save_corpus(result.corpus, out);
  }
  {
    auto out = open_output(ctx, "lexicon.tsv");
    save_lexicon(synthetic_lexicon(), out);
  }
  json truth;
  truth["seed"] = result.truth.seed;
  truth["n_items"] = result.truth.n_items;
  truth["retweet_model"] = {{"intercept", result.truth.retweet_model.intercept},
                            {"anger", result.truth.retweet_model.anger},
                            {"joy", result.truth.retweet_model.joy},
                            {"other", result.truth.retweet_model.other},
                            {"log_followers", result.truth.retweet_model.log_followers},
                            {"dispersion", result.truth.retweet_model.dispersion},
                            {"half_life_seconds", result.truth.retweet_model.half_life_seconds}};
  truth["label_model"] = {{"intercept", result.truth.label_model.intercept},
                          {"log_followers", result.truth.label_model.log_followers}};
  auto tout = open_output(ctx, "ground_truth.json");
  tout << truth.dump(2) << '\n';
  std::cout << "wrote " << result.corpus.items.size() << " items, "
            << result.corpus.manifest.retweets_accepted << " retweets\n";
}

void cmd_report(RunContext& ctx, const std::string& corpus_path,
                const std::string& lexicon_path, bool strict, std::int64_t x, std::int64_t y) {
  Corpus corpus = load_input_corpus(ctx, corpus_path, strict);
  Lexicon lexicon = load_input_lexicon(ctx, lexicon_path);
  auto emotions = infer_all(corpus, lexicon);
  auto groups = assign_groups(corpus, {x, y});

  emit_emotions_csv(ctx, corpus, lexicon, emotions);
  emit_virality_csv(ctx, corpus);
  emit_surface_csv(ctx, optimize_division(corpus));
  emit_groups_csv(ctx, corpus, groups);
  emit_dominance_csv(ctx, corpus);

  auto compare_to = [&](const std::string& file, const std::string& a, const std::string& b) {
    try {
      emit_compare_csv(ctx, file, corpus, lexicon, emotions, groups, a, b);
    } catch (const Error& e) {
      std::cout << "skipping " << file << ": " << e.what() << '\n';
    }
  };
  compare_to("compare_LHF_HLT.csv", "LHF", "HLT");
  compare_to("compare_F_T.csv", "F", "T");
  emit_ccdf_csv(ctx, "ccdf_groups.csv", corpus, lexicon, emotions, groups,
                {"LHF", "HLT", "F", "T"});

  // Coefficient-table analogues: logit on LT+HF and on all labeled items,
  // linear on fake news and on everything.
  auto regress_to = [&](const std::string& file, RegressOptions opt) {
    opt.x = x;
    opt.y = y;
    try {
      RegressionResult result = run_regression(corpus, lexicon, emotions, groups, opt);
      emit_regression_csv(ctx, file, result);
    } catch (const Error& e) {
      std::cout << "skipping " << file << ": " << e.what() << '\n';
    }
  };
  RegressOptions logit_lt_hf;
  logit_lt_hf.model = "logit";
  logit_lt_hf.groups_text = "LT,HF";
  regress_to("regress_logit_LT_HF.csv", logit_lt_hf);
  RegressOptions logit_all;
  logit_all.model = "logit";
  logit_all.groups_text = "T,F";
  regress_to("regress_logit_T_F.csv", logit_all);
  RegressOptions linear_fake;
  linear_fake.model = "linear";
  linear_fake.groups_text = "F";
  regress_to("regress_linear_F.csv", linear_fake);
  RegressOptions linear_all;
  linear_all.model = "linear";
  linear_all.groups_text = "L,H";
  regress_to("regress_linear_all.csv", linear_all);

  // Anger-tagging sweeps at both grid resolutions.
  auto anger_index = lexicon.emotions.index_of("anger");
  std::vector<const NewsItem*> hf = select_items(corpus, groups, {GroupFilter::parse("HF")});
  std::vector<const NewsItem*> ht = select_items(corpus, groups, {GroupFilter::parse("HT")});
  if (anger_index && !hf.empty() && !ht.empty()) {
    std::vector<double> hf_anger, ht_anger;
    for (const auto* item : hf)
      hf_anger.push_back(emotions.at(item->id).occupations[*anger_index]);
    for (const auto* item : ht)
      ht_anger.push_back(emotions.at(item->id).occupations[*anger_index]);
    InterventionReport coarse = beta_sweep(hf_anger, ht_anger, theta_grid(10));
    emit_sweep_csv(ctx, "intervention_step_0.1.csv", coarse, hf_anger, ht_anger);
    InterventionReport fine = beta_sweep(hf_anger, ht_anger, theta_grid(20));
    emit_sweep_csv(ctx, "intervention_step_0.05.csv", fine, hf_anger, ht_anger);

    json summary;
    summary["best_theta"] = fine.best_theta;
    summary["prevented_hf_fraction"] = fine.prevented_hf_fraction;
    summary["affected_ht_fraction"] = fine.affected_ht_fraction;
    auto tagging = tagging_report(corpus, fine.best_theta, groups, emotions, lexicon.emotions);
    if (tagging && tagging->tagged_fake_share)
      summary["tagged_fake_share"] = *tagging->tagged_fake_share;
    auto sout = open_output(ctx, "intervention_summary.json");
    sout << summary.dump(2) << '\n';
  }
  std::cout << "report written to " << ctx.out_dir << '\n';
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"viralens: diffusion, emotion and intervention analytics for news corpora"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key = value option file (flags override it)");

  std::string corpus_path, lexicon_path, scorer_path;
  bool strict = false;
  RunContext ctx;

  app.add_option("--out-dir", ctx.out_dir, "Directory for output files");
  app.add_option("--seed", ctx.seed, "Seed for every stochastic step");

  auto add_corpus = [&](CLI::App* cmd) {
    cmd->add_option("--corpus", corpus_path, "Corpus JSONL file")->required();
    cmd->add_flag("--strict", strict, "Fail on the first invalid record");
  };

  auto* ingest = app.add_subcommand("ingest", "Validate a corpus and write its manifest");
  add_corpus(ingest);

  auto* virality = app.add_subcommand("virality", "Structural virality per item");
  add_corpus(virality);

  std::int64_t bin_width = 3600;
  auto* timeline = app.add_subcommand("timeline", "Lifecycle retweet profiles");
  add_corpus(timeline);
  timeline->add_option("--bin-width", bin_width, "Bin width in seconds");

  auto* emotions = app.add_subcommand("emotions", "Per-item emotion occupations");
  add_corpus(emotions);
  emotions->add_option("--lexicon", lexicon_path, "Emotion lexicon TSV")->required();
  emotions->add_option("--scorers", scorer_path,
                       "JSONL of per-scorer probability vectors for rank aggregation");

  std::string x_grid_text, y_grid_text;
  std::int64_t x_threshold = 1000, y_threshold = 10;
  auto* partition = app.add_subcommand("partition", "Division surface and group assignment");
  add_corpus(partition);
  partition->add_option("--x", x_grid_text, "Comma list of follower thresholds (default 10..10^4)");
  partition->add_option("--y", y_grid_text, "Comma list of retweet thresholds (default 10..10^8)");
  partition->add_option("--assign-x", x_threshold, "Follower threshold for groups.csv");
  partition->add_option("--assign-y", y_threshold, "Retweet threshold for groups.csv");

  auto* dominance = app.add_subcommand("dominance", "Information dominance between user groups");
  add_corpus(dominance);

  std::string groups_text = "LHF,HLT";
  std::string metric_name = "all";
  auto* compare = app.add_subcommand("compare", "Per-emotion K-S divergence between two groups");
  add_corpus(compare);
  compare->add_option("--lexicon", lexicon_path, "Emotion lexicon TSV")->required();
  compare->add_option("--groups", groups_text, "Two group patterns, e.g. LHF,HLT");
  compare->add_option("--metric", metric_name, "One emotion name or \"all\"");
  compare->add_option("--x", x_threshold, "Follower threshold");
  compare->add_option("--y", y_threshold, "Retweet threshold");

  RegressOptions regress_opt;
  auto* regress = app.add_subcommand("regress", "Logit / linear models with robust errors");
  add_corpus(regress);
  regress->add_option("--lexicon", lexicon_path, "Emotion lexicon TSV")->required();
  regress->add_option("--model", regress_opt.model, "logit or linear");
  regress->add_option("--response", regress_opt.response, "fake, retweets or h_news");
  regress->add_option("--groups", regress_opt.groups_text, "Group patterns selecting the rows");
  regress->add_option("--emotions", regress_opt.emotions_text, "Emotion regressors");
  regress->add_option("--controls", regress_opt.controls_text, "Control variables");
  regress->add_flag("--raw-followers", regress_opt.raw_followers,
                    "Raw counts instead of log10(1+count)");
  regress->add_flag("--hc0", regress_opt.hc0, "HC0 sandwich (no small-sample factor)");
  regress->add_option("--window-hours", regress_opt.window_hours, "Retweet response window");
  regress->add_option("--x", regress_opt.x, "Follower threshold");
  regress->add_option("--y", regress_opt.y, "Retweet threshold");

  std::string pos_group = "LHF", neg_group = "HLT";
  std::size_t top_k = 150, cv_folds = 0, top_terms = 50;
  auto* keywords = app.add_subcommand("keywords", "Separating keywords between two groups");
  add_corpus(keywords);
  keywords->add_option("--lexicon", lexicon_path, "Optional lexicon for keyword emotion profiles");
  keywords->add_option("--pos", pos_group, "Positive group pattern");
  keywords->add_option("--neg", neg_group, "Negative group pattern");
  keywords->add_option("-k,--top", top_k, "Number of keywords");
  keywords->add_option("--cv", cv_folds, "Cross-validation folds for separability (0 = off)");
  keywords->add_option("--cv-terms", top_terms, "Terms selected per training fold");
  keywords->add_option("--x", x_threshold, "Follower threshold");
  keywords->add_option("--y", y_threshold, "Retweet threshold");

  double theta_step = 0.05;
  bool with_logit = false;
  auto* intervene = app.add_subcommand("intervene", "Anger-tagging threshold sweep");
  add_corpus(intervene);
  intervene->add_option("--lexicon", lexicon_path, "Emotion lexicon TSV")->required();
  intervene->add_option("--theta-step", theta_step, "Sweep step (must divide 1)");
  intervene->add_flag("--h-anger-logit", with_logit, "Also fit the tagged-anger logit");
  intervene->add_option("--x", x_threshold, "Follower threshold");
  intervene->add_option("--y", y_threshold, "Retweet threshold");

  std::string preset = "planted", shape = "star", corpus_name = "corpus.jsonl";
  std::size_t n_items = 20000;
  auto* synth = app.add_subcommand("synth", "Seeded synthetic corpus with ground truth");
  synth->add_option("--preset", preset, "planted, null or separation");
  synth->add_option("--n", n_items, "Number of news items");
  synth->add_option("--shape", shape, "Cascade shape: star, preferential or chain");
  synth->add_option("--out", corpus_name, "Corpus file name inside --out-dir");

  std::string pipeline = "paper";
  auto* report = app.add_subcommand("report", "All pipeline outputs in one directory");
  add_corpus(report);
  report->add_option("--lexicon", lexicon_path, "Emotion lexicon TSV")->required();
  report->add_option("--pipeline", pipeline, "Pipeline preset (paper)");
  report->add_option("--x", x_threshold, "Follower threshold");
  report->add_option("--y", y_threshold, "Retweet threshold");

  for (CLI::App* sub : {ingest, virality, timeline, emotions, partition, dominance, compare,
                        regress, keywords, intervene, synth, report})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  ctx.config_blob = app.config_to_str(true, false);

  try {
    if (app.got_subcommand(ingest)) {
      ctx.command = "ingest";
      cmd_ingest(ctx, corpus_path, strict);
    } else if (app.got_subcommand(virality)) {
      ctx.command = "virality";
      Corpus corpus = load_input_corpus(ctx, corpus_path, strict);
      emit_virality_csv(ctx, corpus);
    } else if (app.got_subcommand(timeline)) {
      ctx.command = "timeline";
      cmd_timeline(ctx, corpus_path, strict, bin_width);
    } else if (app.got_subcommand(emotions)) {
      ctx.command = "emotions";
      cmd_emotions(ctx, corpus_path, lexicon_path, strict, scorer_path);
    } else if (app.got_subcommand(partition)) {
      ctx.command = "partition";
      cmd_partition(ctx, corpus_path, strict, x_grid_text, y_grid_text, x_threshold,
                    y_threshold);
    } else if (app.got_subcommand(dominance)) {
      ctx.command = "dominance";
      Corpus corpus = load_input_corpus(ctx, corpus_path, strict);
      emit_dominance_csv(ctx, corpus);
    } else if (app.got_subcommand(compare)) {
      ctx.command = "compare";
      cmd_compare(ctx, corpus_path, lexicon_path, strict, groups_text, metric_name,
                  x_threshold, y_threshold);
    } else if (app.got_subcommand(regress)) {
      ctx.command = "regress";
      cmd_regress(ctx, corpus_path, lexicon_path, strict, regress_opt);
    } else if (app.got_subcommand(keywords)) {
      ctx.command = "keywords";
      cmd_keywords(ctx, corpus_path, lexicon_path, strict, pos_group, neg_group, top_k,
                   x_threshold, y_threshold, cv_folds, top_terms);
    } else if (app.got_subcommand(intervene)) {
      ctx.command = "intervene";
      cmd_intervene(ctx, corpus_path, lexicon_path, strict, theta_step, x_threshold,
                    y_threshold, with_logit);
    } else if (app.got_subcommand(synth)) {
      ctx.command = "synth";
      cmd_synth(ctx, preset, n_items, shape, corpus_name);
    } else if (app.got_subcommand(report)) {
      ctx.command = "report";
      if (pipeline != "paper") throw ConfigError("unknown pipeline \"" + pipeline + "\"");
      cmd_report(ctx, corpus_path, lexicon_path, strict, x_threshold, y_threshold);
    }
    write_manifest(ctx);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}
