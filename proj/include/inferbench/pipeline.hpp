#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "inferbench/kg.hpp"
#include "inferbench/manifest.hpp"
#include "inferbench/metrics.hpp"
#include "inferbench/negatives.hpp"
#include "inferbench/pattern.hpp"
#include "inferbench/split.hpp"

namespace inferbench {

struct BuildConfig {
  std::filesystem::path kg;
  /// Pattern file; the value "builtin" selects the shipped library.
  std::optional<std::filesystem::path> patterns;
  /// Fixed rule file (manual mode).
  std::optional<std::filesystem::path> rules;
  std::size_t k1 = 50;
  std::size_t k2 = 200;
  SplitRatio ratio;
  NegativeMethod method = NegativeMethod::Pa;
  std::uint64_t seed = 0;
  std::filesystem::path out;
  bool allow_shortfall = false;
  std::string type_marker = "type";
  unsigned workers = 1;
};

/// Everything a build produces, in memory.
struct Benchmark {
  std::shared_ptr<SymbolTable> symbols;
  std::shared_ptr<const KnowledgeGraph> kg;
  std::vector<RankedRule> rules;
  PositiveBuild positives;
  NegativeSets negatives;
  Manifest manifest;
};

std::shared_ptr<const KnowledgeGraph> load_input_kg(const BuildConfig& config,
                                                    std::shared_ptr<SymbolTable> symbols);

/// Rule generation: patterns ranked by support, or a fixed rule file.
/// Throws Error(Data) when no rule has positive support.
Selection generate_rules(const BuildConfig& config, const KnowledgeGraph& kg);

/// Runs all three stages without touching the disk.
Benchmark build_benchmark(const BuildConfig& config);

void write_rules(const std::filesystem::path& path, std::span<const RankedRule> rules,
                 const SymbolTable& symbols);
/// Reads rules written by write_rules (or any native rule file) and
/// recomputes their supports.
std::vector<RankedRule> read_ranked_rules(const std::filesystem::path& path,
                                          const KnowledgeGraph& kg, unsigned workers,
                                          std::vector<std::string>* warnings = nullptr);

void write_benchmark(const Benchmark& bench, const std::filesystem::path& dir);

/// Stage commands: each reads its inputs from `config` and `config.out`
/// and writes its outputs (plus the manifest) into `config.out`.
void run_gen_rules(const BuildConfig& config);
void run_apply_split(const BuildConfig& config);
void run_gen_negatives(const BuildConfig& config);
void run_build(const BuildConfig& config);

/// Set sizes of a benchmark directory as `key=value` lines. Throws
/// Error(Data) listing missing files.
std::string benchmark_stats(const std::filesystem::path& dir);

struct EvaluateOptions {
  std::optional<std::filesystem::path> predictions;
  bool simpbl = false;
  std::optional<double> threshold;
  std::vector<unsigned> ks{1, 3, 10};
  bool boolean = false;
};

MetricsReport evaluate_benchmark(const std::filesystem::path& dir, const EvaluateOptions& options);

}  // namespace inferbench
