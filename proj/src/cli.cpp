#include "inferbench/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <ostream>

#include "inferbench/error.hpp"
#include "inferbench/pipeline.hpp"
#include "inferbench/rule_analysis.hpp"
#include "inferbench/rule_parser.hpp"

namespace inferbench {

namespace {

// Raw option values; converted into a BuildConfig after parsing so that
// validation errors carry the usage exit code.
struct BuildArgs {
  std::string kg, patterns, rules, out, ratio = "8:1:1", method = "pa", type_marker = "type";
  std::size_t k1 = 50, k2 = 200;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  bool allow_shortfall = false;
};

enum Uses : unsigned {
  kPatterns = 1,
  kRules = 2,
  kK1 = 4,
  kK2 = 8,
  kRatio = 16,
  kMethod = 32,
  kShortfall = 64,
};

void add_build_options(CLI::App& app, BuildArgs& a, unsigned uses) {
  app.add_option("--config")->type_name("FILE")->description("flat key = value file; command-line flags take precedence");
  app.add_option("--kg", a.kg, "input knowledge graph (s<TAB>p<TAB>o per line)")->required();
  app.add_option("--out", a.out, "benchmark directory")->required();
  if (uses & kPatterns) app.add_option("--patterns", a.patterns, "pattern file, or 'builtin'");
  if (uses & kRules) app.add_option("--rules", a.rules, "rule file (manual mode)");
  if (uses & kK1) app.add_option("--k1", a.k1, "rules kept per pattern")->capture_default_str();
  if (uses & kK2) app.add_option("--k2", a.k2, "conclusions sampled per rule")->capture_default_str();
  if (uses & kRatio) app.add_option("--ratio", a.ratio, "train:valid:test")->capture_default_str();
  if (uses & kMethod) {
    app.add_option("--method", a.method, "negative method")
        ->check(CLI::IsMember({"rc", "rb", "pa", "qg"}))
        ->capture_default_str();
  }
  if (uses & kShortfall) {
    app.add_flag("--allow-shortfall", a.allow_shortfall, "accept unbalanced negative sets");
  }
  app.add_option("--seed", a.seed, "master seed")->capture_default_str();
  app.add_option("--type-marker", a.type_marker, "predicate marking type assertions")
      ->capture_default_str();
  app.add_option("--workers", a.workers, "worker threads (never changes outputs)")
      ->check(CLI::Range(1u, 256u))
      ->capture_default_str();
}

BuildConfig to_config(const BuildArgs& a) {
  BuildConfig c;
  c.kg = a.kg;
  if (!a.patterns.empty()) c.patterns = a.patterns;
  if (!a.rules.empty()) c.rules = a.rules;
  c.k1 = a.k1;
  c.k2 = a.k2;
  c.ratio = SplitRatio::parse(a.ratio);
  c.method = parse_method(a.method);
  c.seed = a.seed;
  c.out = a.out;
  c.allow_shortfall = a.allow_shortfall;
  c.type_marker = a.type_marker;
  c.workers = a.workers;
  if (c.k1 == 0) throw Error(ErrorKind::Usage, "--k1 must be positive");
  if (c.k2 == 0) throw Error(ErrorKind::Usage, "--k2 must be positive");
  return c;
}

void echo_warnings(const std::filesystem::path& dir, std::ostream& err) {
  const auto manifest = Manifest::read(dir / "manifest");
  for (const auto& [key, value] : manifest.entries()) {
    if (key.find(".warning.") != std::string::npos) err << "warning: " << value << '\n';
  }
}

// CLI11 reads config files for the top-level app only, so subcommand
// configs are spliced into the argument list here. Keys may sit at top level
// or under a [subcommand] section; keys already given on the command line win.
std::vector<std::string> expand_config(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::string file;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      file = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      file = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (file.empty() || args.size() < 2) return args;
  const std::string command = args[1];
  auto given = [&](const std::string& flag) {
    for (const auto& a : args) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
  };
  for (const auto& item : CLI::ConfigTOML{}.from_file(file)) {
    if (item.name.empty() || item.name == "++" || item.name == "--") continue;
    if (!item.parents.empty() && !(item.parents.size() == 1 && item.parents[0] == command)) continue;
    const auto flag = "--" + item.name;
    if (given(flag)) continue;
    if (item.inputs.size() == 1 && (item.inputs[0] == "true" || item.inputs[0] == "false")) {
      if (item.inputs[0] == "true") args.push_back(flag);
      continue;
    }
    args.push_back(flag);
    std::string joined;
    for (const auto& v : item.inputs) joined += (joined.empty() ? "" : ",") + v;
    args.push_back(joined);
  }
  return args;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Builds and evaluates rule-based KG completion benchmarks"};
  app.require_subcommand(1);

  BuildArgs build_args;
  auto* build = app.add_subcommand("build", "run all three stages");
  add_build_options(*build, build_args, ~0u);

  BuildArgs rules_args;
  auto* gen_rules = app.add_subcommand("gen-rules", "select rules and write rules.txt");
  add_build_options(*gen_rules, rules_args, kPatterns | kRules | kK1);

  BuildArgs split_args;
  auto* apply_split = app.add_subcommand("apply-split", "sample conclusions into train/valid/test");
  add_build_options(*apply_split, split_args, kRules | kK2 | kRatio);

  BuildArgs neg_args;
  auto* gen_neg = app.add_subcommand("gen-negatives", "generate the negative sets");
  add_build_options(*gen_neg, neg_args, kRules | kRatio | kMethod | kShortfall);

  std::string stats_dir;
  auto* stats = app.add_subcommand("stats", "print benchmark statistics");
  stats->add_option("dir", stats_dir, "benchmark directory")->required();

  std::string eval_dir, predictions, baseline, report_path;
  double threshold = 0;
  std::vector<unsigned> ks{1, 3, 10};
  bool boolean = false;
  auto* evaluate = app.add_subcommand("evaluate", "score predictions against a benchmark");
  evaluate->add_option("--config")->type_name("FILE")->description("flat key = value file; command-line flags take precedence");
  evaluate->add_option("--bench", eval_dir, "benchmark directory")->required();
  auto* pred_opt = evaluate->add_option("--predictions", predictions,
                                        "s<TAB>p<TAB>o<TAB>confidence per line");
  auto* base_opt = evaluate->add_option("--baseline", baseline, "built-in baseline")
                       ->check(CLI::IsMember({"simpbl"}));
  pred_opt->excludes(base_opt);
  auto* thr_opt = evaluate->add_option("--threshold", threshold, "fixed decision threshold")
                      ->check(CLI::Range(0.0, 1.0));
  evaluate->add_option("--k", ks, "Hits cutoffs")->delimiter(',')->check(CLI::PositiveNumber);
  evaluate->add_flag("--boolean", boolean, "treat confidences as 0/1 decisions");
  evaluate->add_option("--report", report_path, "write the report here instead of stdout");

  std::string bench_rules, sys_rules, sys_format = "native";
  unsigned analyze_workers = 1;
  auto* analyze = app.add_subcommand("analyze-rules", "compare mined rules with benchmark rules");
  analyze->add_option("--bench", bench_rules, "benchmark rules.txt")->required();
  analyze->add_option("--sys", sys_rules, "system rule file")->required();
  analyze->add_option("--sys-format", sys_format, "native or arrow (head <= body)")
      ->check(CLI::IsMember({"native", "arrow"}))
      ->capture_default_str();
  analyze->add_option("--workers", analyze_workers)->check(CLI::Range(1u, 256u));

  try {
    const auto args = expand_config(argc, argv);
    std::vector<const char*> expanded;
    for (const auto& a : args) expanded.push_back(a.c_str());
    app.parse(static_cast<int>(expanded.size()), expanded.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::Usage);
  }

  try {
    if (*build) {
      const auto config = to_config(build_args);
      run_build(config);
      echo_warnings(config.out, err);
      out << benchmark_stats(config.out);
    } else if (*gen_rules) {
      const auto config = to_config(rules_args);
      run_gen_rules(config);
      echo_warnings(config.out, err);
    } else if (*apply_split) {
      const auto config = to_config(split_args);
      run_apply_split(config);
    } else if (*gen_neg) {
      const auto config = to_config(neg_args);
      run_gen_negatives(config);
      echo_warnings(config.out, err);
    } else if (*stats) {
      out << benchmark_stats(stats_dir);
    } else if (*evaluate) {
      if (predictions.empty() && baseline.empty()) {
        throw Error(ErrorKind::Usage, "give --predictions or --baseline simpbl");
      }
      EvaluateOptions options;
      if (!predictions.empty()) options.predictions = predictions;
      options.simpbl = !baseline.empty();
      if (thr_opt->count() > 0) options.threshold = threshold;
      options.ks = ks;
      options.boolean = boolean;
      const auto text = format_report(evaluate_benchmark(eval_dir, options));
      if (report_path.empty()) {
        out << text;
      } else {
        std::ofstream f(report_path, std::ios::binary);
        if (!(f << text)) throw Error(ErrorKind::Data, "cannot write " + report_path);
      }
    } else if (*analyze) {
      SymbolTable symbols;
      const auto bench = read_rule_file(bench_rules, symbols);
      const auto sys = read_rule_file(sys_rules, symbols,
                                      sys_format == "arrow" ? RuleFormat::Arrow : RuleFormat::Native,
                                      true);
      const auto b = rules_of(bench);
      const auto s = rules_of(sys);
      auto report = compare_rules(b, s, symbols, analyze_workers);
      report.sys_skipped = sys.skipped;
      for (const auto& e : sys.errors) err << "skipped: " << e << '\n';
      out << format_comparison(report);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::Data);
  }
  return 0;
}

}  // namespace inferbench
