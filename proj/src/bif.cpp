#include "chaininf/bif.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace chaininf {

namespace {

struct Token {
  std::string text;
  std::size_t line = 0;
  bool punct = false;
};

bool is_punct(char c) {
  switch (c) {
    case '{': case '}': case '[': case ']': case '(': case ')': case ',': case ';': case '|':
      return true;
    default:
      return false;
  }
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (is_space(c)) {
      ++i;
    } else if (c == '/' && i + 1 < s.size() && s[i + 1] == '/') {
      while (i < s.size() && s[i] != '\n') ++i;
    } else if (c == '/' && i + 1 < s.size() && s[i + 1] == '*') {
      const std::size_t start = line;
      i += 2;
      while (i + 1 < s.size() && !(s[i] == '*' && s[i + 1] == '/')) {
        if (s[i] == '\n') ++line;
        ++i;
      }
      if (i + 1 >= s.size()) throw ParseError("unterminated comment", start);
      i += 2;
    } else if (c == '"') {
      const std::size_t start = line;
      std::string word;
      ++i;
      while (i < s.size() && s[i] != '"') {
        if (s[i] == '\n') ++line;
        word += s[i++];
      }
      if (i >= s.size()) throw ParseError("unterminated string", start);
      ++i;
      out.push_back({std::move(word), start, false});
    } else if (is_punct(c)) {
      out.push_back({std::string(1, c), line, true});
      ++i;
    } else {
      std::size_t j = i;
      while (j < s.size() && !is_space(s[j]) && !is_punct(s[j]) && s[j] != '"') ++j;
      out.push_back({std::string(s.substr(i, j - i)), line, false});
      i = j;
    }
  }
  return out;
}

std::optional<double> to_number(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s[0] == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

struct VariableDecl {
  std::vector<std::string> labels;
  std::size_t line = 0;
};

struct ProbabilityBlock {
  std::vector<std::string> parents;
  std::optional<std::vector<double>> table;
  std::map<std::vector<std::size_t>, std::vector<double>> rows;
  std::size_t line = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  BayesNet parse() {
    while (!at_end()) {
      const Token& t = peek();
      if (t.text == "network") {
        parse_network();
      } else if (t.text == "variable") {
        parse_variable();
      } else if (t.text == "probability") {
        parse_probability();
      } else {
        throw ParseError("unexpected '" + t.text + "'", t.line);
      }
    }
    return build();
  }

 private:
  bool at_end() const { return pos_ >= tokens_.size(); }

  const Token& peek() const {
    if (at_end()) throw ParseError("unexpected end of input", tokens_.empty() ? 1 : tokens_.back().line);
    return tokens_[pos_];
  }

  Token next() {
    Token t = peek();
    ++pos_;
    return t;
  }

  bool accept(const char* text) {
    if (!at_end() && tokens_[pos_].text == text) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(const char* text) {
    const Token& t = peek();
    if (t.text != text) throw ParseError(std::string("expected '") + text + "', found '" + t.text + "'", t.line);
    ++pos_;
  }

  std::string word(const char* what) {
    const Token& t = peek();
    if (t.punct) throw ParseError(std::string("expected ") + what + ", found '" + t.text + "'", t.line);
    ++pos_;
    return t.text;
  }

  void skip_property() {
    expect("property");
    while (!accept(";")) next();
  }

  void parse_network() {
    expect("network");
    if (!peek().punct) name_ = next().text;
    expect("{");
    while (!accept("}")) {
      if (peek().text == "property") {
        skip_property();
      } else {
        throw ParseError("unexpected '" + peek().text + "' in network block", peek().line);
      }
    }
  }

  void parse_variable() {
    const std::size_t line = next().line;
    const std::string name = word("variable name");
    if (variables_.count(name)) throw ParseError("variable '" + name + "' declared twice", line);
    expect("{");
    std::optional<VariableDecl> decl;
    while (!accept("}")) {
      const Token& t = peek();
      if (t.text == "property") {
        skip_property();
        continue;
      }
      if (t.text != "type") throw ParseError("unexpected '" + t.text + "' in variable block", t.line);
      next();
      const Token kind = next();
      if (kind.text != "discrete") {
        throw UnsupportedFeature("variable '" + name + "' has unsupported type '" + kind.text + "'", kind.line);
      }
      expect("[");
      const Token count = next();
      expect("]");
      expect("{");
      VariableDecl d{{}, line};
      do {
        d.labels.push_back(word("label"));
      } while (accept(","));
      expect("}");
      expect(";");
      const auto n = to_number(count.text);
      if (!n || *n != static_cast<double>(d.labels.size())) {
        throw ParseError("variable '" + name + "' declares " + count.text + " labels but lists " +
                             std::to_string(d.labels.size()),
                         count.line);
      }
      if (d.labels.size() < 2) throw ParseError("variable '" + name + "' needs at least two labels", line);
      for (std::size_t i = 0; i < d.labels.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
          if (d.labels[i] == d.labels[j]) throw ParseError("variable '" + name + "' repeats label '" + d.labels[i] + "'", line);
        }
      }
      decl = std::move(d);
    }
    if (!decl) throw ParseError("variable '" + name + "' has no type declaration", line);
    order_.push_back(name);
    variables_.emplace(name, std::move(*decl));
  }

  const VariableDecl& variable(const std::string& name, std::size_t line) const {
    auto it = variables_.find(name);
    if (it == variables_.end()) throw ParseError("unknown variable '" + name + "'", line);
    return it->second;
  }

  std::vector<double> numbers() {
    std::vector<double> out;
    while (!at_end() && !peek().punct) {
      const Token& t = peek();
      auto v = to_number(t.text);
      if (!v) throw ParseError("expected a probability, found '" + t.text + "'", t.line);
      if (!(*v >= 0.0) || !std::isfinite(*v)) throw ParseError("invalid probability '" + t.text + "'", t.line);
      out.push_back(*v);
      ++pos_;
      accept(",");
    }
    expect(";");
    return out;
  }

  void parse_probability() {
    const std::size_t line = next().line;
    expect("(");
    const std::string child = word("variable name");
    const auto& child_decl = variable(child, line);
    ProbabilityBlock block;
    block.line = line;
    if (accept("|")) {
      do {
        const std::string p = word("parent name");
        variable(p, line);
        block.parents.push_back(p);
      } while (accept(","));
    }
    expect(")");
    if (blocks_.count(child)) throw ParseError("second probability block for '" + child + "'", line);
    const std::size_t card = child_decl.labels.size();
    expect("{");
    while (!accept("}")) {
      const Token& t = peek();
      if (t.text == "property") {
        skip_property();
      } else if (t.text == "table") {
        const std::size_t tline = next().line;
        if (!block.parents.empty()) {
          throw UnsupportedFeature("'table' for conditional variable '" + child + "'", tline);
        }
        if (block.table) throw ParseError("second table for '" + child + "'", tline);
        auto values = numbers();
        check_row(values, card, child, tline);
        block.table = std::move(values);
      } else if (t.text == "default") {
        throw UnsupportedFeature("'default' rows", t.line);
      } else if (t.text == "(") {
        const std::size_t rline = next().line;
        std::vector<std::size_t> key;
        do {
          const std::string label = word("parent label");
          if (key.size() >= block.parents.size()) {
            throw ParseError("too many parent labels in row of '" + child + "'", rline);
          }
          const auto& pl = variables_.at(block.parents[key.size()]).labels;
          auto it = std::find(pl.begin(), pl.end(), label);
          if (it == pl.end()) {
            throw ParseError("unknown label '" + label + "' for parent '" + block.parents[key.size()] + "'", rline);
          }
          key.push_back(static_cast<std::size_t>(it - pl.begin()));
        } while (accept(","));
        expect(")");
        if (key.size() != block.parents.size()) throw ParseError("too few parent labels in row of '" + child + "'", rline);
        auto values = numbers();
        check_row(values, card, child, rline);
        if (!block.rows.emplace(std::move(key), std::move(values)).second) {
          throw ParseError("duplicate row in probability block of '" + child + "'", rline);
        }
      } else {
        throw ParseError("unexpected '" + t.text + "' in probability block", t.line);
      }
    }
    blocks_.emplace(child, std::move(block));
  }

  static void check_row(const std::vector<double>& values, std::size_t card, const std::string& child, std::size_t line) {
    if (values.size() != card) {
      throw ParseError("row of '" + child + "' has " + std::to_string(values.size()) + " values, expected " +
                           std::to_string(card),
                       line);
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    if (!(std::abs(sum - 1.0) <= kCptRowTolerance)) {
      throw ParseError("row of '" + child + "' sums to " + std::to_string(sum), line);
    }
  }

  BayesNet build() const {
    std::vector<NodeDef> nodes;
    for (const auto& name : order_) {
      const auto& decl = variables_.at(name);
      auto it = blocks_.find(name);
      if (it == blocks_.end()) throw ParseError("no probability block for '" + name + "'", decl.line);
      const auto& block = it->second;
      NodeDef n{name, decl.labels, block.parents, {}};
      std::vector<std::size_t> cards;
      std::size_t rows = 1;
      for (const auto& p : block.parents) {
        cards.push_back(variables_.at(p).labels.size());
        rows *= cards.back();
      }
      n.cpt.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(decl.labels.size()));
      if (block.parents.empty()) {
        if (!block.table) throw ParseError("no table for '" + name + "'", block.line);
        for (std::size_t j = 0; j < block.table->size(); ++j) n.cpt(0, static_cast<Eigen::Index>(j)) = (*block.table)[j];
      } else {
        std::vector<std::size_t> key(cards.size(), 0);
        for (std::size_t r = 0; r < rows; ++r) {
          auto row = block.rows.find(key);
          if (row == block.rows.end()) {
            std::string labels;
            for (std::size_t k = 0; k < key.size(); ++k) {
              labels += (k ? ", " : "") + variables_.at(block.parents[k]).labels[key[k]];
            }
            throw ParseError("missing row (" + labels + ") for '" + name + "'", block.line);
          }
          for (std::size_t j = 0; j < row->second.size(); ++j) {
            n.cpt(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = row->second[j];
          }
          for (std::size_t k = key.size(); k-- > 0;) {
            if (++key[k] < cards[k]) break;
            key[k] = 0;
          }
        }
      }
      nodes.push_back(std::move(n));
    }
    return BayesNet(std::move(nodes), name_);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::string name_ = "unknown";
  std::vector<std::string> order_;
  std::map<std::string, VariableDecl> variables_;
  std::map<std::string, ProbabilityBlock> blocks_;
};

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

BayesNet parse_bif(std::string_view text) { return Parser(text).parse(); }

BayesNet read_bif(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path.string() + "'", 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_bif(ss.str());
}

std::string write_bif(const BayesNet& net) {
  std::ostringstream os;
  os << "network " << net.name() << " {\n}\n";
  for (const auto& n : net.nodes()) {
    os << "variable " << n.name << " {\n  type discrete [ " << n.cardinality() << " ] { ";
    for (std::size_t i = 0; i < n.labels.size(); ++i) os << (i ? ", " : "") << n.labels[i];
    os << " };\n}\n";
  }
  for (const auto& n : net.nodes()) {
    os << "probability ( " << n.name;
    for (std::size_t k = 0; k < n.parents.size(); ++k) os << (k ? ", " : " | ") << n.parents[k];
    os << " ) {\n";
    std::vector<std::size_t> key(n.parents.size(), 0);
    for (Eigen::Index r = 0; r < n.cpt.rows(); ++r) {
      if (n.parents.empty()) {
        os << "  table ";
      } else {
        os << "  (";
        for (std::size_t k = 0; k < key.size(); ++k) os << (k ? ", " : "") << net.node(n.parents[k]).labels[key[k]];
        os << ") ";
        for (std::size_t k = key.size(); k-- > 0;) {
          if (++key[k] < net.node(n.parents[k]).cardinality()) break;
          key[k] = 0;
        }
      }
      for (Eigen::Index j = 0; j < n.cpt.cols(); ++j) os << (j ? ", " : "") << shortest(n.cpt(r, j));
      os << ";\n";
    }
    os << "}\n";
  }
  return os.str();
}

}  // namespace chaininf
