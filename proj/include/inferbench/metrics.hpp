#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "inferbench/symbols.hpp"
#include "inferbench/triple.hpp"

namespace inferbench {

struct Prediction {
  Triple triple;
  double confidence = 0;
};

struct LabeledScore {
  double confidence = 0;
  bool positive = false;
};

/// `s<TAB>p<TAB>o<TAB>confidence` lines. Names must already be known to
/// `symbols`; confidences must lie in [0, 1]. Throws ParseError otherwise.
std::vector<Prediction> read_predictions(std::istream& in, const SymbolTable& symbols);
std::vector<Prediction> read_predictions(const std::filesystem::path& path,
                                         const SymbolTable& symbols);

/// True when every confidence is exactly 0 or 1.
bool is_boolean(std::span<const Prediction> predictions);

struct Classification {
  std::uint64_t tp = 0, tn = 0, fp = 0, fn = 0;
  double precision = 0, recall = 0, accuracy = 0, f1 = 0;
  bool precision_undefined = false;  // tp + fp == 0, reported as 0
  bool recall_undefined = false;     // tp + fn == 0, reported as 0
};

Classification from_counts(std::uint64_t tp, std::uint64_t tn, std::uint64_t fp,
                           std::uint64_t fn);

/// Positive prediction iff confidence >= threshold.
Classification classify(std::span<const LabeledScore> scores, double threshold);

/// The threshold with the best F1 among the smallest confidence and the
/// midpoints between consecutive distinct confidences; ties go to the
/// smallest. Throws Error(Usage) on empty input.
double tune_threshold(std::span<const LabeledScore> scores);

/// Area under the ROC curve as the Mann-Whitney statistic with mid-ranks,
/// computed in integers and divided once. Throws Error(Data) if either
/// class is empty.
double roc_auc(std::span<const LabeledScore> scores);

/// The same quantity by comparing every positive with every negative.
double roc_auc_pairwise(std::span<const LabeledScore> scores);

struct RankingReport {
  std::vector<unsigned> ks;
  std::vector<double> hits_s, hits_o, hits_r;  // one entry per k
  double mrr_s = 0, mrr_o = 0, mrr_r = 0;
  std::size_t ranked = 0;         // relation triples among the positives
  std::size_t skipped_types = 0;  // type triples among the positives

  double c_mrr() const { return (mrr_s + mrr_o) / 2; }
  double r_mrr() const { return mrr_r; }
  double c_hits(std::size_t i) const { return (hits_s[i] + hits_o[i]) / 2; }
  double r_hits(std::size_t i) const { return hits_r[i]; }
};

/// Rank of each positive relation triple among its subject, relation and
/// object corruptions found in `negatives`: 1 + (number scored higher) +
/// (number tied) / 2. An empty corruption subset gives rank 1.
RankingReport ranking_metrics(std::span<const Prediction> positives,
                              std::span<const Prediction> negatives,
                              std::span<const unsigned> ks);

/// Predicts (a, b, c) iff the training triples mention a together with b
/// and b together with c. Type triples mention the type marker.
class SimpleBaseline {
 public:
  explicit SimpleBaseline(std::span<const Triple> train);
  bool predict(const Triple& t) const;

 public:
  using SymbolPair = std::pair<std::uint64_t, std::uint64_t>;

 private:
  struct PairHash {
    std::size_t operator()(const SymbolPair& p) const noexcept {
      return std::hash<std::uint64_t>{}(p.first * 0x9E3779B97F4A7C15ULL ^ p.second);
    }
  };
  std::unordered_set<SymbolPair, PairHash> pairs_;
};

struct MetricsReport {
  Classification classification;
  double threshold = 0.5;
  std::string threshold_source;  // validation-f1, override or boolean
  std::optional<double> auc;
  std::optional<RankingReport> ranking;
  bool boolean = false;
  std::vector<std::string> notices;
};

/// Flat `metric=value` lines; rates as percentages with one decimal.
std::string format_report(const MetricsReport& report);

}  // namespace inferbench
