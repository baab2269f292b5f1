#include "inferbench/metrics.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <unordered_map>

#include "inferbench/error.hpp"

namespace inferbench {

std::vector<Prediction> read_predictions(std::istream& in, const SymbolTable& symbols) {
  std::vector<Prediction> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
      const auto tab = line.find('\t', start);
      fields.push_back(std::string_view(line).substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 4) throw ParseError("expected four tab-separated fields", line_no, 0);
    auto constant = [&](std::string_view name, std::size_t col) {
      auto c = symbols.find_constant(name);
      if (!c) throw ParseError("unknown constant '" + std::string(name) + "'", line_no, col);
      return *c;
    };
    Prediction p;
    const auto s = constant(fields[0], 0);
    if (fields[1] == symbols.type_marker()) {
      auto t = symbols.find_predicate(fields[2]);
      if (!t || symbols.kind(*t) != PredicateKind::Type) {
        throw ParseError("unknown type '" + std::string(fields[2]) + "'", line_no, 0);
      }
      p.triple = Triple::type(s, *t);
    } else {
      auto r = symbols.find_predicate(fields[1]);
      if (!r || symbols.kind(*r) != PredicateKind::Relation) {
        throw ParseError("unknown relation '" + std::string(fields[1]) + "'", line_no, 0);
      }
      p.triple = Triple::relation(s, *r, constant(fields[2], 0));
    }
    const auto& f = fields[3];
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), p.confidence);
    if (ec != std::errc{} || ptr != f.data() + f.size()) {
      throw ParseError("bad confidence '" + std::string(f) + "'", line_no, 0);
    }
    if (!(p.confidence >= 0 && p.confidence <= 1)) {
      throw ParseError("confidence outside [0, 1]", line_no, 0);
    }
    out.push_back(p);
  }
  return out;
}

std::vector<Prediction> read_predictions(const std::filesystem::path& path,
                                         const SymbolTable& symbols) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Data, "cannot open " + path.string());
  try {
    return read_predictions(in, symbols);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

bool is_boolean(std::span<const Prediction> predictions) {
  return std::all_of(predictions.begin(), predictions.end(),
                     [](const Prediction& p) { return p.confidence == 0 || p.confidence == 1; });
}

Classification from_counts(std::uint64_t tp, std::uint64_t tn, std::uint64_t fp,
                           std::uint64_t fn) {
  Classification c{tp, tn, fp, fn};
  const auto d = [](std::uint64_t x) { return static_cast<double>(x); };
  c.precision_undefined = tp + fp == 0;
  c.recall_undefined = tp + fn == 0;
  c.precision = c.precision_undefined ? 0 : d(tp) / d(tp + fp);
  c.recall = c.recall_undefined ? 0 : d(tp) / d(tp + fn);
  const auto all = tp + tn + fp + fn;
  c.accuracy = all == 0 ? 0 : d(tp + tn) / d(all);
  // 2PR/(P+R) rewritten in counts; the same expression drives threshold tuning.
  c.f1 = tp == 0 ? 0 : 2 * d(tp) / d(2 * tp + fp + fn);
  return c;
}

Classification classify(std::span<const LabeledScore> scores, double threshold) {
  std::uint64_t tp = 0, tn = 0, fp = 0, fn = 0;
  for (const auto& s : scores) {
    const bool yes = s.confidence >= threshold;
    if (s.positive) {
      (yes ? tp : fn) += 1;
    } else {
      (yes ? fp : tn) += 1;
    }
  }
  return from_counts(tp, tn, fp, fn);
}

double tune_threshold(std::span<const LabeledScore> scores) {
  if (scores.empty()) {
    throw Error(ErrorKind::Usage,
                "no validation predictions to tune the threshold; pass --threshold");
  }
  std::vector<LabeledScore> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.confidence > b.confidence;
  });
  std::uint64_t positives = 0;
  for (const auto& s : sorted) positives += s.positive ? 1 : 0;
  // Sweep from high to low thresholds; after consuming a block of equal
  // confidences, everything seen so far is predicted positive.
  std::uint64_t tp = 0, fp = 0;
  double best_threshold = sorted.back().confidence;
  double best_f1 = -1;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j].confidence == sorted[i].confidence) {
      (sorted[j].positive ? tp : fp) += 1;
      ++j;
    }
    const double threshold = j < sorted.size()
                                 ? (sorted[i].confidence + sorted[j].confidence) / 2
                                 : sorted[i].confidence;
    const auto fn = positives - tp;
    const double f1 = tp == 0 ? 0.0
                              : 2.0 * static_cast<double>(tp) /
                                    static_cast<double>(2 * tp + fp + fn);
    if (f1 >= best_f1) {  // later thresholds are smaller
      best_f1 = f1;
      best_threshold = threshold;
    }
    i = j;
  }
  return best_threshold;
}

double roc_auc(std::span<const LabeledScore> scores) {
  std::vector<LabeledScore> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.confidence < b.confidence; });
  std::uint64_t n_pos = 0;
  // Twice the rank sum of the positives, mid-ranks for ties.
  unsigned __int128 rank_sum2 = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    std::uint64_t block_pos = 0;
    while (j < sorted.size() && sorted[j].confidence == sorted[i].confidence) {
      block_pos += sorted[j].positive ? 1 : 0;
      ++j;
    }
    const std::uint64_t mid2 = (i + 1) + j;  // ranks i+1 .. j
    rank_sum2 += static_cast<unsigned __int128>(mid2) * block_pos;
    n_pos += block_pos;
    i = j;
  }
  const std::uint64_t n_neg = sorted.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw Error(ErrorKind::Data, "AUC is undefined without both positives and negatives");
  }
  const unsigned __int128 u2 = rank_sum2 - static_cast<unsigned __int128>(n_pos) * (n_pos + 1);
  const unsigned __int128 denom2 = static_cast<unsigned __int128>(2) * n_pos * n_neg;
  return static_cast<double>(u2) / static_cast<double>(denom2);
}

double roc_auc_pairwise(std::span<const LabeledScore> scores) {
  std::uint64_t wins2 = 0, n_pos = 0, n_neg = 0;
  for (const auto& p : scores) {
    if (!p.positive) {
      ++n_neg;
      continue;
    }
    ++n_pos;
    for (const auto& n : scores) {
      if (n.positive) continue;
      wins2 += p.confidence > n.confidence ? 2 : p.confidence == n.confidence ? 1 : 0;
    }
  }
  if (n_pos == 0 || n_neg == 0) {
    throw Error(ErrorKind::Data, "AUC is undefined without both positives and negatives");
  }
  return static_cast<double>(wins2) / (2.0 * static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

namespace {

std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Sorted confidences of the negatives sharing a key.
using Groups = std::unordered_map<std::uint64_t, std::vector<double>>;

double rank_in(const Groups& groups, std::uint64_t key, double confidence) {
  auto it = groups.find(key);
  if (it == groups.end()) return 1;
  const auto& v = it->second;
  const auto lo = std::lower_bound(v.begin(), v.end(), confidence);
  const auto hi = std::upper_bound(v.begin(), v.end(), confidence);
  const auto higher = static_cast<double>(v.end() - hi);
  const auto tied = static_cast<double>(hi - lo);
  return 1 + higher + tied / 2;
}

}  // namespace

RankingReport ranking_metrics(std::span<const Prediction> positives,
                              std::span<const Prediction> negatives,
                              std::span<const unsigned> ks) {
  Groups by_ro, by_so, by_sr;  // keys of subject, relation and object corruptions
  for (const auto& n : negatives) {
    const auto& t = n.triple;
    if (t.is_type()) continue;
    const auto s = index_of(t.subject), r = index_of(t.predicate), o = index_of(t.object);
    by_ro[pair_key(r, o)].push_back(n.confidence);
    by_so[pair_key(s, o)].push_back(n.confidence);
    by_sr[pair_key(s, r)].push_back(n.confidence);
  }
  for (auto* g : {&by_ro, &by_so, &by_sr}) {
    for (auto& [k, v] : *g) std::sort(v.begin(), v.end());
  }
  RankingReport out;
  out.ks.assign(ks.begin(), ks.end());
  std::vector<std::uint64_t> hs(ks.size()), ho(ks.size()), hr(ks.size());
  double ss = 0, so = 0, sr = 0;
  for (const auto& p : positives) {
    const auto& t = p.triple;
    if (t.is_type()) {
      ++out.skipped_types;
      continue;
    }
    ++out.ranked;
    const auto s = index_of(t.subject), r = index_of(t.predicate), o = index_of(t.object);
    const double rs = rank_in(by_ro, pair_key(r, o), p.confidence);
    const double ro = rank_in(by_sr, pair_key(s, r), p.confidence);
    const double rr = rank_in(by_so, pair_key(s, o), p.confidence);
    ss += 1 / rs;
    so += 1 / ro;
    sr += 1 / rr;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      hs[i] += rs <= ks[i] ? 1 : 0;
      ho[i] += ro <= ks[i] ? 1 : 0;
      hr[i] += rr <= ks[i] ? 1 : 0;
    }
  }
  if (out.ranked > 0) {
    const auto n = static_cast<double>(out.ranked);
    out.mrr_s = ss / n;
    out.mrr_o = so / n;
    out.mrr_r = sr / n;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      out.hits_s.push_back(static_cast<double>(hs[i]) / n);
      out.hits_o.push_back(static_cast<double>(ho[i]) / n);
      out.hits_r.push_back(static_cast<double>(hr[i]) / n);
    }
  } else {
    out.hits_s.assign(ks.size(), 0);
    out.hits_o.assign(ks.size(), 0);
    out.hits_r.assign(ks.size(), 0);
  }
  return out;
}

namespace {

// Constants, predicates and the type marker live in separate ranges.
std::uint64_t constant_symbol(ConstantId c) { return index_of(c); }
std::uint64_t predicate_symbol(PredicateId p) { return (1ULL << 32) | index_of(p); }
constexpr std::uint64_t kMarkerSymbol = 2ULL << 32;

std::array<std::uint64_t, 3> symbols_of(const Triple& t) {
  if (t.is_type()) return {constant_symbol(t.subject), kMarkerSymbol, predicate_symbol(t.predicate)};
  return {constant_symbol(t.subject), predicate_symbol(t.predicate), constant_symbol(t.object)};
}

SimpleBaseline::SymbolPair unordered_pair(std::uint64_t a, std::uint64_t b) {
  if (b < a) std::swap(a, b);
  return {a, b};
}

}  // namespace

SimpleBaseline::SimpleBaseline(std::span<const Triple> train) {
  for (const auto& t : train) {
    const auto s = symbols_of(t);
    pairs_.insert(unordered_pair(s[0], s[1]));
    pairs_.insert(unordered_pair(s[1], s[2]));
    pairs_.insert(unordered_pair(s[0], s[2]));
  }
}

bool SimpleBaseline::predict(const Triple& t) const {
  const auto s = symbols_of(t);
  return pairs_.contains(unordered_pair(s[0], s[1])) && pairs_.contains(unordered_pair(s[1], s[2]));
}

namespace {

std::string percent(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", 100 * x);
  return buf;
}

}  // namespace

std::string format_report(const MetricsReport& r) {
  std::string out;
  out += "# predictions count as positive when confidence >= threshold\n";
  out += "# tied ranks: mean position of the tied block\n";
  out += "# empty corruption subset: rank 1\n";
  for (const auto& n : r.notices) out += "# " + n + "\n";
  const auto& c = r.classification;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", r.threshold);
  out += "threshold=" + std::string(buf) + "\n";
  out += "threshold_source=" + r.threshold_source + "\n";
  out += "tp=" + std::to_string(c.tp) + "\n";
  out += "tn=" + std::to_string(c.tn) + "\n";
  out += "fp=" + std::to_string(c.fp) + "\n";
  out += "fn=" + std::to_string(c.fn) + "\n";
  out += "precision=" + percent(c.precision) + (c.precision_undefined ? " (undefined)" : "") + "\n";
  out += "recall=" + percent(c.recall) + (c.recall_undefined ? " (undefined)" : "") + "\n";
  out += "accuracy=" + percent(c.accuracy) + "\n";
  out += "f1=" + percent(c.f1) + "\n";
  out += "auc=" + (r.auc ? percent(*r.auc) : std::string("-")) + "\n";
  if (r.ranking) {
    const auto& k = *r.ranking;
    out += "mrr_s=" + percent(k.mrr_s) + "\n";
    out += "mrr_o=" + percent(k.mrr_o) + "\n";
    out += "mrr_r=" + percent(k.mrr_r) + "\n";
    out += "c_mrr=" + percent(k.c_mrr()) + "\n";
    out += "r_mrr=" + percent(k.r_mrr()) + "\n";
    for (std::size_t i = 0; i < k.ks.size(); ++i) {
      const auto at = "@" + std::to_string(k.ks[i]);
      out += "hits_s" + at + "=" + percent(k.hits_s[i]) + "\n";
      out += "hits_o" + at + "=" + percent(k.hits_o[i]) + "\n";
      out += "hits_r" + at + "=" + percent(k.hits_r[i]) + "\n";
      out += "c_hits" + at + "=" + percent(k.c_hits(i)) + "\n";
      out += "r_hits" + at + "=" + percent(k.r_hits(i)) + "\n";
    }
  } else {
    out += "c_mrr=-\nr_mrr=-\n";
  }
  return out;
}

}  // namespace inferbench
