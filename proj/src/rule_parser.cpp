#include "inferbench/rule_parser.hpp"

#include <cctype>
#include <fstream>
#include <istream>

#include "clause_syntax.hpp"
#include "inferbench/error.hpp"

namespace inferbench {
namespace detail {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t'; }

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  void skip_space() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }
  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }
  bool starts_with(std::string_view token) {
    skip_space();
    return text_.substr(pos_).starts_with(token);
  }
  bool accept(std::string_view token) {
    if (!starts_with(token)) return false;
    pos_ += token.size();
    return true;
  }
  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }
  // Reads up to (not including) any char of `stops`, trimmed.
  std::string read_until(std::string_view stops, std::size_t& start) {
    skip_space();
    start = pos_;
    while (pos_ < text_.size() && stops.find(text_[pos_]) == std::string_view::npos) ++pos_;
    auto token = text_.substr(start, pos_ - start);
    while (!token.empty() && is_space(token.back())) token.remove_suffix(1);
    return std::string(token);
  }
  std::size_t pos() const { return pos_; }
  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, 0, pos_);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

RawTerm native_term(Cursor& in) {
  RawTerm t;
  if (in.accept("<")) {
    t.is_variable = false;
    t.text = in.read_until(">", t.pos);
    if (t.text.empty()) in.fail("empty constant name");
    in.expect(">");
    return t;
  }
  t.text = in.read_until(",()<>!= \t-", t.pos);
  if (t.text.empty()) in.fail("expected a variable or <constant>");
  const bool ident = std::islower(static_cast<unsigned char>(t.text[0])) &&
                     std::all_of(t.text.begin(), t.text.end(), [](char c) {
                       return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
                     });
  if (!ident) {
    throw ParseError("'" + t.text + "' is not a lowercase variable or <constant>", 0, t.pos);
  }
  return t;
}

RawAtom native_atom(Cursor& in, std::string_view type_marker) {
  RawAtom atom;
  if (in.accept("(")) {
    atom.first = native_term(in);
    in.expect(",");
    atom.predicate = in.read_until(",)", atom.predicate_pos);
    if (atom.predicate.empty()) in.fail("expected a predicate");
    in.expect(",");
    if (atom.predicate == type_marker) {
      atom.kind = AtomKind::Type;
      atom.predicate = in.read_until(",)", atom.predicate_pos);
      if (atom.predicate.empty()) in.fail("expected a type name");
    } else {
      atom.kind = AtomKind::Relation;
      atom.second = native_term(in);
    }
    in.expect(")");
    return atom;
  }
  atom.kind = AtomKind::Inequality;
  atom.first = native_term(in);
  in.expect("!=");
  atom.second = native_term(in);
  return atom;
}

}  // namespace

RawClause parse_native_clause(std::string_view text, std::string_view type_marker) {
  Cursor in(text);
  RawClause clause;
  do {
    clause.body.push_back(native_atom(in, type_marker));
  } while (in.accept(","));
  in.expect("->");
  const auto head_pos = in.pos();
  clause.head = native_atom(in, type_marker);
  if (clause.head.kind == AtomKind::Inequality) {
    throw ParseError("inequality is not allowed as a rule head", 0, head_pos);
  }
  if (!in.at_end()) in.fail("unexpected trailing text");
  return clause;
}

namespace {

bool is_arrow_variable(std::string_view s) {
  if (s.empty() || !std::isupper(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin() + 1, s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

RawTerm arrow_term(Cursor& in, std::string_view stops) {
  RawTerm t;
  t.text = in.read_until(stops, t.pos);
  if (t.text.empty()) in.fail("expected a term");
  t.is_variable = is_arrow_variable(t.text);
  if (t.is_variable) {
    for (auto& c : t.text) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return t;
}

RawAtom arrow_atom(Cursor& in, std::string_view type_marker) {
  RawAtom atom;
  atom.predicate = in.read_until("(", atom.predicate_pos);
  if (atom.predicate.empty()) in.fail("expected a predicate");
  in.expect("(");
  atom.first = arrow_term(in, ",");
  in.expect(",");
  atom.second = arrow_term(in, ")");
  in.expect(")");
  atom.kind = AtomKind::Relation;
  if (atom.predicate == type_marker) {
    if (atom.second.is_variable) in.fail("type atom with a variable type");
    atom.kind = AtomKind::Type;
    atom.predicate = atom.second.text;
    atom.second = RawTerm{};
  }
  return atom;
}

}  // namespace

RawClause parse_arrow_clause(std::string_view text, std::string_view type_marker) {
  if (auto tab = text.rfind('\t'); tab != std::string_view::npos) {
    text = text.substr(tab + 1);
  }
  Cursor in(text);
  RawClause clause;
  clause.head = arrow_atom(in, type_marker);
  in.expect("<=");
  if (in.at_end()) in.fail("rule has an empty body");
  do {
    clause.body.push_back(arrow_atom(in, type_marker));
  } while (in.accept(","));
  if (!in.at_end()) in.fail("unexpected trailing text");
  return clause;
}

}  // namespace detail

namespace {

Rule resolve_concrete(const detail::RawClause& raw, SymbolTable& symbols) {
  Rule rule = detail::build_rule(
      raw, symbols,
      [&](const std::string& name, PredicateKind kind, std::size_t, Atom& atom) {
        atom.predicate = symbols.intern_predicate(name, kind);
      });
  check_safety(rule);
  return rule;
}

}  // namespace

Rule parse_rule(std::string_view text, SymbolTable& symbols) {
  return resolve_concrete(detail::parse_native_clause(text, symbols.type_marker()), symbols);
}

Rule parse_arrow_rule(std::string_view text, SymbolTable& symbols) {
  return resolve_concrete(detail::parse_arrow_clause(text, symbols.type_marker()), symbols);
}

RuleFile read_rule_file(std::istream& in, SymbolTable& symbols, RuleFormat format,
                        bool skip_invalid) {
  RuleFile file;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view view(line);
    std::string annotation;
    if (format == RuleFormat::Native) {
      if (auto mark = view.find("\t#"); mark != std::string_view::npos) {
        annotation = std::string(view.substr(mark + 2));
        view = view.substr(0, mark);
      }
    }
    const auto first = view.find_first_not_of(" \t");
    if (first == std::string_view::npos || view[first] == '#') continue;
    try {
      Rule rule = format == RuleFormat::Native ? parse_rule(view, symbols)
                                               : parse_arrow_rule(view, symbols);
      file.entries.push_back({std::move(rule), line_no, std::move(annotation)});
    } catch (const ParseError& e) {
      if (!skip_invalid) throw ParseError(e.message(), line_no, e.column());
      ++file.skipped;
      file.errors.push_back("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      if (!skip_invalid) {
        throw Error(e.kind(), "line " + std::to_string(line_no) + ": " + e.what());
      }
      ++file.skipped;
      file.errors.push_back("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return file;
}

RuleFile read_rule_file(const std::filesystem::path& path, SymbolTable& symbols,
                        RuleFormat format, bool skip_invalid) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Data, "cannot open " + path.string());
  try {
    return read_rule_file(in, symbols, format, skip_invalid);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::vector<Rule> rules_of(const RuleFile& file) {
  std::vector<Rule> out;
  out.reserve(file.entries.size());
  for (const auto& e : file.entries) out.push_back(e.rule);
  return out;
}

}  // namespace inferbench
