#include "inferbench/pipeline.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "inferbench/error.hpp"
#include "inferbench/rule_parser.hpp"

namespace inferbench {

namespace fs = std::filesystem;

namespace {

// Re-labels errors with the stage that raised them.
template <class F>
auto stage(std::string_view name, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(name) + ": " + e.what());
  } catch (const fs::filesystem_error& e) {
    throw Error(ErrorKind::Data, std::string(name) + ": " + e.what());
  }
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

void record_warnings(Manifest& m, std::string_view prefix, const std::vector<std::string>& w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    m.set(std::string(prefix) + ".warning." + std::to_string(i + 1), w[i]);
  }
}

void record_rules(Manifest& m, const BuildConfig& config, const KnowledgeGraph& kg,
                  const Selection& selection) {
  const auto sig = signature(kg);
  m.set("seed", std::to_string(config.seed));
  m.set("type_marker", kg.symbols().type_marker());
  m.set("kg.triples", std::to_string(kg.size()));
  m.set("kg.duplicates_dropped", std::to_string(kg.duplicates_dropped()));
  m.set("kg.relations", std::to_string(sig.relations.size()));
  m.set("kg.types", std::to_string(sig.types.size()));
  m.set("kg.constants", std::to_string(sig.constants.size()));
  if (config.patterns) {
    m.set("rules.source", "patterns");
    m.set("rules.k1", std::to_string(config.k1));
    m.set("rules.order", "support descending, then canonical rule text");
    m.set("rules.head_draw", "uniform over unused predicates, seeded by pattern and body");
  } else {
    m.set("rules.source", "rule-file");
  }
  m.set("rules.count", std::to_string(selection.rules.size()));
  for (std::size_t i = 0; i < selection.rules.size(); ++i) {
    const auto& r = selection.rules[i];
    const auto key = "rules." + std::to_string(i + 1);
    m.set(key, to_string(r.rule, kg.symbols()));
    m.set(key + ".pattern", r.pattern);
    m.set(key + ".support", std::to_string(r.support));
  }
  record_warnings(m, "rules", selection.warnings);
}

void record_split(Manifest& m, const BuildConfig& config, const PositiveBuild& build) {
  m.set("seed", std::to_string(config.seed));
  m.set("split.k2", std::to_string(config.k2));
  m.set("split.ratio", config.ratio.to_string());
  m.set("split.rounding", "valid and test rounded down, remainder to train");
  m.set("split.duplicates", "train before valid before test");
  for (const auto& s : build.per_rule) {
    const auto key = "split.rule." + std::to_string(s.rule + 1);
    m.set(key + ".available", std::to_string(s.available));
    m.set(key + ".sampled", std::to_string(s.train.size() + s.valid.size() + s.test.size()));
    m.set(key + ".train", std::to_string(s.train.size()));
    m.set(key + ".valid", std::to_string(s.valid.size()));
    m.set(key + ".test", std::to_string(s.test.size()));
  }
  m.set("split.p_train", std::to_string(build.positives.train.size()));
  m.set("split.p_valid", std::to_string(build.positives.valid.size()));
  m.set("split.p_test", std::to_string(build.positives.test.size()));
  record_warnings(m, "split", build.warnings);
}

void record_checks(Manifest& m, const PositiveSets& sets, std::span<const RankedRule> rules) {
  const auto missing = unwitnessed(sets, rules);
  m.set("split.check.witnessed", missing.empty() ? "ok" : std::to_string(missing.size()) + " failures");
  m.set("split.check.signature", signature_contained(sets) ? "ok" : "failed");
}

void record_negatives(Manifest& m, const BuildConfig& config, const NegativeSets& neg) {
  m.set("seed", std::to_string(config.seed));
  m.set("negatives.method", std::string(method_name(neg.method)));
  m.set("negatives.shortfall_policy", config.allow_shortfall ? "allow" : "error");
  if (neg.method == NegativeMethod::Rb) {
    m.set("negatives.const_sup", "constants in the range of support substitutions");
  }
  if (neg.method == NegativeMethod::Qg) {
    m.set("negatives.quota", "ceil(|R_complex| * |P_x| / |R|), capped by the sub-rule pool");
  }
  for (const auto& [k, v] : neg.notes) m.set("negatives." + k, v);
  m.set("negatives.n_train", std::to_string(neg.train.size()));
  m.set("negatives.n_valid", std::to_string(neg.valid.size()));
  m.set("negatives.n_test", std::to_string(neg.test.size()));
  m.set("negatives.shortfall", yes_no(neg.shortfall));
  m.set("evaluation.threshold_rule", "positive iff confidence >= threshold");
  m.set("evaluation.rank_ties", "mean position of the tied block");
  m.set("evaluation.empty_subset_rank", "1");
  record_warnings(m, "negatives", neg.warnings);
}

PositiveBuild split_stage(const BuildConfig& config, const KnowledgeGraph& kg,
                          std::span<const RankedRule> rules) {
  return build_positive_sets(kg, rules, config.k2, config.ratio, config.seed, config.workers);
}

NegativeConfig negative_config(const BuildConfig& config) {
  return NegativeConfig{config.method, config.seed, config.allow_shortfall, config.ratio,
                        config.workers};
}

void write_negatives(const fs::path& dir, const NegativeSets& neg, const SymbolTable& symbols) {
  for (auto s : kSplits) {
    const auto& set = neg[s];
    const auto base = std::string(split_name(s)) + "_neg";
    write_triples(dir / (base + ".txt"), set.triples, symbols);
    std::ofstream meta(dir / (base + ".meta"), std::ios::binary);
    if (!meta) throw Error(ErrorKind::Data, "cannot write " + (dir / (base + ".meta")).string());
    for (std::size_t i = 0; i < set.size(); ++i) meta << i << '\t' << set.tags[i] << '\n';
  }
}

void write_positives(const fs::path& dir, const PositiveSets& sets, const SymbolTable& symbols) {
  write_triples(dir / "train.txt", sets.train, symbols);
  write_triples(dir / "valid.txt", sets.valid, symbols);
  write_triples(dir / "test.txt", sets.test, symbols);
}

std::vector<Triple> read_set(const fs::path& path, SymbolTable& symbols) {
  auto t = read_triples(path, symbols);
  sort_by_name(t, symbols);
  return t;
}

fs::path rules_path(const BuildConfig& config) {
  return config.rules ? *config.rules : config.out / "rules.txt";
}

void require_out(const BuildConfig& config) {
  if (config.out.empty()) throw Error(ErrorKind::Usage, "an output directory is required");
}

}  // namespace

std::shared_ptr<const KnowledgeGraph> load_input_kg(const BuildConfig& config,
                                                    std::shared_ptr<SymbolTable> symbols) {
  return stage("load", [&] {
    return std::make_shared<const KnowledgeGraph>(load_kg(config.kg, std::move(symbols)));
  });
}

Selection generate_rules(const BuildConfig& config, const KnowledgeGraph& kg) {
  return stage("gen-rules", [&] {
    if (config.patterns.has_value() == config.rules.has_value()) {
      throw Error(ErrorKind::Usage, "give exactly one of a pattern file or a rule file");
    }
    Selection selection;
    if (config.patterns) {
      const auto patterns = *config.patterns == "builtin"
                                ? builtin_patterns(kg.symbols())
                                : read_patterns(*config.patterns, kg.symbols());
      selection = select_rules(patterns, kg, config.k1, config.seed, config.workers);
    } else {
      selection.rules = read_ranked_rules(*config.rules, kg, config.workers, &selection.warnings);
    }
    const bool any = std::any_of(selection.rules.begin(), selection.rules.end(),
                                 [](const RankedRule& r) { return r.support > 0; });
    if (!any) throw Error(ErrorKind::Data, "no rules with positive support");
    return selection;
  });
}

Benchmark build_benchmark(const BuildConfig& config) {
  Benchmark b;
  b.symbols = std::make_shared<SymbolTable>(config.type_marker);
  b.kg = load_input_kg(config, b.symbols);
  auto selection = generate_rules(config, *b.kg);
  record_rules(b.manifest, config, *b.kg, selection);
  b.rules = std::move(selection.rules);
  b.positives = stage("apply-split", [&] { return split_stage(config, *b.kg, b.rules); });
  record_split(b.manifest, config, b.positives);
  record_checks(b.manifest, b.positives.positives, b.rules);
  b.negatives = stage("gen-negatives", [&] {
    return generate_negatives(b.positives.positives, b.rules, *b.kg, negative_config(config));
  });
  record_negatives(b.manifest, config, b.negatives);
  return b;
}

void write_rules(const fs::path& path, std::span<const RankedRule> rules,
                 const SymbolTable& symbols) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Data, "cannot write " + path.string());
  for (const auto& r : rules) {
    out << to_string(r.rule, symbols) << "\t# support=" << r.support << " pattern=" << r.pattern
        << '\n';
  }
}

std::vector<RankedRule> read_ranked_rules(const fs::path& path, const KnowledgeGraph& kg,
                                          unsigned workers, std::vector<std::string>* warnings) {
  const auto file = read_rule_file(path, kg.symbols());
  std::unordered_map<std::string, std::string> labels;
  for (const auto& e : file.entries) {
    std::string label = "manual";
    std::istringstream words(e.annotation);
    for (std::string w; words >> w;) {
      if (w.starts_with("pattern=")) label = w.substr(8);
    }
    labels.emplace(canonical_text(e.rule, kg.symbols()), label);
  }
  const auto plain = rules_of(file);
  auto selection = support_of(plain, kg, workers);
  for (auto& r : selection.rules) r.pattern = labels.at(r.canonical);
  if (warnings) warnings->insert(warnings->end(), selection.warnings.begin(), selection.warnings.end());
  return std::move(selection.rules);
}

void write_benchmark(const Benchmark& b, const fs::path& dir) {
  fs::create_directories(dir);
  write_rules(dir / "rules.txt", b.rules, *b.symbols);
  write_positives(dir, b.positives.positives, *b.symbols);
  write_negatives(dir, b.negatives, *b.symbols);
  b.manifest.write(dir / "manifest");
}

void run_gen_rules(const BuildConfig& config) {
  require_out(config);
  auto symbols = std::make_shared<SymbolTable>(config.type_marker);
  const auto kg = load_input_kg(config, symbols);
  const auto selection = generate_rules(config, *kg);
  fs::create_directories(config.out);
  write_rules(config.out / "rules.txt", selection.rules, *symbols);
  Manifest m;
  record_rules(m, config, *kg, selection);
  m.write(config.out / "manifest");
}

void run_apply_split(const BuildConfig& config) {
  require_out(config);
  auto symbols = std::make_shared<SymbolTable>(config.type_marker);
  const auto kg = load_input_kg(config, symbols);
  std::vector<std::string> warnings;
  const auto rules = stage("apply-split", [&] {
    return read_ranked_rules(rules_path(config), *kg, config.workers, &warnings);
  });
  auto m = Manifest::read(config.out / "manifest");
  if (!m.get("rules.count")) {
    Selection s{rules, warnings};
    BuildConfig manual = config;
    manual.patterns.reset();
    record_rules(m, manual, *kg, s);
  }
  const auto build = stage("apply-split", [&] { return split_stage(config, *kg, rules); });
  fs::create_directories(config.out);
  write_positives(config.out, build.positives, *symbols);
  m.erase_prefix("split.");
  m.erase_prefix("negatives.");
  record_split(m, config, build);
  record_checks(m, build.positives, rules);
  m.write(config.out / "manifest");
}

void run_gen_negatives(const BuildConfig& config) {
  require_out(config);
  auto symbols = std::make_shared<SymbolTable>(config.type_marker);
  const auto kg = load_input_kg(config, symbols);
  const auto neg = stage("gen-negatives", [&] {
    const auto rules = read_ranked_rules(rules_path(config), *kg, config.workers);
    PositiveSets sets;
    sets.train = read_set(config.out / "train.txt", *symbols);
    sets.valid = read_set(config.out / "valid.txt", *symbols);
    sets.test = read_set(config.out / "test.txt", *symbols);
    return generate_negatives(sets, rules, *kg, negative_config(config));
  });
  write_negatives(config.out, neg, *symbols);
  auto m = Manifest::read(config.out / "manifest");
  m.erase_prefix("negatives.");
  m.erase_prefix("evaluation.");
  record_negatives(m, config, neg);
  m.write(config.out / "manifest");
}

void run_build(const BuildConfig& config) {
  require_out(config);
  write_benchmark(build_benchmark(config), config.out);
}

namespace {

std::size_t count_lines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line != "\r") ++n;
  }
  return n;
}

}  // namespace

std::string benchmark_stats(const fs::path& dir) {
  std::vector<std::string> required = {"manifest", "train.txt", "valid.txt", "test.txt"};
  const auto m = Manifest::read(dir / "manifest");
  const bool has_neg = m.get("negatives.method").has_value();
  if (has_neg) {
    for (auto s : kSplits) required.push_back(std::string(split_name(s)) + "_neg.txt");
  }
  std::string missing;
  for (const auto& f : required) {
    if (!fs::exists(dir / f)) missing += (missing.empty() ? "" : ", ") + f;
  }
  if (!missing.empty()) throw Error(ErrorKind::Data, "missing in " + dir.string() + ": " + missing);
  auto get = [&](const char* key) { return m.get(key).value_or("-"); };
  std::string out;
  out += "k1=" + get("rules.k1") + "\n";
  out += "k2=" + get("split.k2") + "\n";
  out += "rules=" + get("rules.count") + "\n";
  out += "K=" + get("kg.triples") + "\n";
  out += "P_train=" + std::to_string(count_lines(dir / "train.txt")) + "\n";
  out += "P_valid=" + std::to_string(count_lines(dir / "valid.txt")) + "\n";
  out += "P_test=" + std::to_string(count_lines(dir / "test.txt")) + "\n";
  for (auto s : kSplits) {
    const auto name = std::string(split_name(s));
    out += "N_" + name + "=" +
           (has_neg ? std::to_string(count_lines(dir / (name + "_neg.txt"))) : std::string("-")) +
           "\n";
  }
  out += "method=" + get("negatives.method") + "\n";
  return out;
}

namespace {

std::string list_triples(const std::vector<Triple>& ts, const SymbolTable& symbols) {
  std::string out;
  for (std::size_t i = 0; i < ts.size() && i < 20; ++i) {
    out += "\n  " + format_triple(ts[i], symbols);
  }
  if (ts.size() > 20) out += "\n  ... and " + std::to_string(ts.size() - 20) + " more";
  return out;
}

}  // namespace

MetricsReport evaluate_benchmark(const fs::path& dir, const EvaluateOptions& options) {
  const auto m = Manifest::read(dir / "manifest");
  SymbolTable symbols(m.get("type_marker").value_or("type"));
  std::string missing;
  for (const char* f : {"train.txt", "valid.txt", "test.txt", "valid_neg.txt", "test_neg.txt"}) {
    if (!fs::exists(dir / f)) missing += (missing.empty() ? "" : ", ") + std::string(f);
  }
  if (!missing.empty()) throw Error(ErrorKind::Data, "missing in " + dir.string() + ": " + missing);
  const auto train = read_set(dir / "train.txt", symbols);
  const auto p_valid = read_set(dir / "valid.txt", symbols);
  const auto p_test = read_set(dir / "test.txt", symbols);
  const auto n_valid = read_set(dir / "valid_neg.txt", symbols);
  const auto n_test = read_set(dir / "test_neg.txt", symbols);

  std::vector<Prediction> predictions;
  MetricsReport report;
  if (options.simpbl) {
    const SimpleBaseline baseline(train);
    for (const auto* set : {&p_valid, &n_valid, &p_test, &n_test}) {
      for (const auto& t : *set) predictions.push_back({t, baseline.predict(t) ? 1.0 : 0.0});
    }
    report.notices.push_back("predictions from the SimpBL baseline");
  } else {
    if (!options.predictions) throw Error(ErrorKind::Usage, "a predictions file is required");
    predictions = read_predictions(*options.predictions, symbols);
  }

  enum Label : char { PosValid, NegValid, PosTest, NegTest };
  std::unordered_map<Triple, Label, TripleHash> label;
  for (const auto& t : p_valid) label.emplace(t, PosValid);
  for (const auto& t : n_valid) label.emplace(t, NegValid);
  for (const auto& t : p_test) label.emplace(t, PosTest);
  for (const auto& t : n_test) label.emplace(t, NegTest);

  std::unordered_map<Triple, double, TripleHash> score;
  std::vector<Triple> unlabeled, duplicated;
  for (const auto& p : predictions) {
    if (!label.contains(p.triple)) {
      unlabeled.push_back(p.triple);
    } else if (!score.emplace(p.triple, p.confidence).second) {
      duplicated.push_back(p.triple);
    }
  }
  if (!unlabeled.empty()) {
    throw Error(ErrorKind::Data, std::to_string(unlabeled.size()) +
                                     " predictions are for triples outside the labelled sets:" +
                                     list_triples(unlabeled, symbols));
  }
  if (!duplicated.empty()) {
    throw Error(ErrorKind::Data, std::to_string(duplicated.size()) +
                                     " triples are predicted more than once:" +
                                     list_triples(duplicated, symbols));
  }
  std::vector<Triple> uncovered;
  for (const auto* set : {&p_test, &n_test}) {
    for (const auto& t : *set) {
      if (!score.contains(t)) uncovered.push_back(t);
    }
  }
  if (!uncovered.empty()) {
    throw Error(ErrorKind::Data, std::to_string(uncovered.size()) +
                                     " test triples have no prediction:" +
                                     list_triples(uncovered, symbols));
  }

  auto scores_of = [&](const std::vector<Triple>& pos, const std::vector<Triple>& neg) {
    std::vector<LabeledScore> out;
    for (const auto& t : pos) out.push_back({score.at(t), true});
    for (const auto& t : neg) out.push_back({score.at(t), false});
    return out;
  };
  const auto test_scores = scores_of(p_test, n_test);
  report.boolean = options.boolean || options.simpbl || is_boolean(predictions);

  if (options.threshold) {
    report.threshold = *options.threshold;
    report.threshold_source = "override";
  } else if (report.boolean) {
    report.threshold = 0.5;
    report.threshold_source = "boolean";
  } else {
    std::vector<Triple> lacking;
    for (const auto* set : {&p_valid, &n_valid}) {
      for (const auto& t : *set) {
        if (!score.contains(t)) lacking.push_back(t);
      }
    }
    if (p_valid.empty() && n_valid.empty()) {
      throw Error(ErrorKind::Usage,
                  "the benchmark has no validation triples to tune the threshold; pass --threshold");
    }
    if (!lacking.empty()) {
      throw Error(ErrorKind::Usage, std::to_string(lacking.size()) +
                                        " validation triples have no prediction; provide them "
                                        "or pass --threshold:" +
                                        list_triples(lacking, symbols));
    }
    report.threshold = tune_threshold(scores_of(p_valid, n_valid));
    report.threshold_source = "validation-f1";
  }
  report.classification = classify(test_scores, report.threshold);

  if (report.boolean) {
    report.notices.push_back("boolean predictions: AUC and ranking metrics are not applicable");
  } else {
    if (!p_test.empty() && !n_test.empty()) {
      report.auc = roc_auc(test_scores);
    } else {
      report.notices.push_back("AUC undefined: a test class is empty");
    }
    std::vector<Prediction> pos, neg;
    for (const auto& t : p_test) pos.push_back({t, score.at(t)});
    for (const auto& t : n_test) neg.push_back({t, score.at(t)});
    report.ranking = ranking_metrics(pos, neg, options.ks);
    if (report.ranking->skipped_types > 0) {
      report.notices.push_back(std::to_string(report.ranking->skipped_types) +
                               " type triples are left out of the ranking metrics");
    }
  }
  return report;
}

}  // namespace inferbench
