#include <cctype>
#include <fstream>
#include <sstream>

#include "trepan/error.hpp"
#include "trepan/ontology.hpp"

namespace trepan::onto {
namespace {

enum class Tok { Ident, Concept, Role, SubclassOf, Top, Bottom, And, Exists, Domain, Range,
                 LParen, RParen, Dot, Equals, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t column;  // 1-based
};

Tok keyword(const std::string& word) {
  if (word == "CONCEPT") return Tok::Concept;
  if (word == "ROLE") return Tok::Role;
  if (word == "SUBCLASSOF") return Tok::SubclassOf;
  if (word == "TOP") return Tok::Top;
  if (word == "BOTTOM") return Tok::Bottom;
  if (word == "AND") return Tok::And;
  if (word == "EXISTS") return Tok::Exists;
  if (word == "DOMAIN") return Tok::Domain;
  if (word == "RANGE") return Tok::Range;
  return Tok::Ident;
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::vector<Token> tokenize(std::string_view line, std::size_t line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t col = i + 1;
    switch (c) {
      case '(': out.push_back({Tok::LParen, "(", col}); ++i; continue;
      case ')': out.push_back({Tok::RParen, ")", col}); ++i; continue;
      case '.': out.push_back({Tok::Dot, ".", col}); ++i; continue;
      case '=': out.push_back({Tok::Equals, "=", col}); ++i; continue;
      default: break;
    }
    if (!ident_char(c)) {
      throw ParseError(line_no, col, std::string("unexpected character '") + c + "'");
    }
    std::size_t j = i;
    while (j < line.size() && ident_char(line[j])) ++j;
    std::string word(line.substr(i, j - i));
    out.push_back({keyword(word), word, col});
    i = j;
  }
  out.push_back({Tok::End, "", line.size() + 1});
  return out;
}

const char* describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "name";
    case Tok::SubclassOf: return "SUBCLASSOF";
    case Tok::Dot: return "'.'";
    case Tok::Equals: return "'='";
    case Tok::RParen: return "')'";
    case Tok::End: return "end of line";
    default: return "token";
  }
}

// Resolves names into the concept/role namespaces of a TBox under construction.
class Namespaces {
 public:
  Namespaces(TBox& tbox, const ParseOptions& options) : tbox_(tbox), options_(options) {}

  void declare_concept(const Token& t, std::size_t line) {
    if (tbox_.roles.count(t.text)) clash(t, line, "role");
    if (!declared_concepts_.insert(t.text).second) {
      throw ParseError(line, t.column, "duplicate declaration of concept '" + t.text + "'");
    }
    tbox_.concepts.insert(t.text);
  }

  void declare_role(const Token& t, std::size_t line) {
    if (tbox_.concepts.count(t.text)) clash(t, line, "concept");
    if (!declared_roles_.insert(t.text).second) {
      throw ParseError(line, t.column, "duplicate declaration of role '" + t.text + "'");
    }
    tbox_.roles.insert(t.text);
  }

  void use_concept(const Token& t, std::size_t line) {
    if (tbox_.roles.count(t.text)) clash(t, line, "role");
    if (tbox_.concepts.count(t.text)) return;
    undeclared(t, line, "concept");
    tbox_.concepts.insert(t.text);
  }

  void use_role(const Token& t, std::size_t line) {
    if (tbox_.concepts.count(t.text)) clash(t, line, "concept");
    if (tbox_.roles.count(t.text)) return;
    undeclared(t, line, "role");
    tbox_.roles.insert(t.text);
  }

 private:
  [[noreturn]] void clash(const Token& t, std::size_t line, const char* other) {
    throw ParseError(line, t.column, "'" + t.text + "' is already used as a " + other + " name");
  }

  void undeclared(const Token& t, std::size_t line, const char* what) {
    if (options_.require_declarations) {
      throw ParseError(line, t.column, std::string("undeclared ") + what + " '" + t.text + "'");
    }
    tbox_.warnings.push_back("line " + std::to_string(line) + ": " + what + " '" + t.text +
                             "' auto-declared");
  }

  TBox& tbox_;
  const ParseOptions& options_;
  std::set<std::string> declared_concepts_;
  std::set<std::string> declared_roles_;
};

class LineParser {
 public:
  LineParser(std::vector<Token> tokens, std::size_t line, Namespaces* names)
      : tokens_(std::move(tokens)), line_(line), names_(names) {}

  const Token& peek() const { return tokens_[pos_]; }
  Token next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  Token expect(Tok kind) {
    if (peek().kind != kind) {
      throw ParseError(line_, peek().column,
                       std::string("expected ") + describe(kind) + ", found " +
                           (peek().kind == Tok::End ? "end of line" : "'" + peek().text + "'"));
    }
    return next();
  }

  ConceptExpr expression() {
    std::vector<ConceptExpr> ops;
    ops.push_back(unary());
    while (peek().kind == Tok::And) {
      next();
      ops.push_back(unary());
    }
    if (ops.size() == 1) return std::move(ops.front());
    return ConceptExpr::conjunction(std::move(ops));
  }

  void finish() {
    if (peek().kind != Tok::End) {
      throw ParseError(line_, peek().column, "unexpected '" + peek().text + "'");
    }
  }

  std::size_t line() const { return line_; }

 private:
  ConceptExpr unary() {
    Token t = next();
    switch (t.kind) {
      case Tok::Top: return ConceptExpr::top();
      case Tok::Bottom: return ConceptExpr::bottom();
      case Tok::Ident:
        if (names_) names_->use_concept(t, line_);
        return ConceptExpr::atom(t.text);
      case Tok::LParen: {
        ConceptExpr inner = expression();
        expect(Tok::RParen);
        return inner;
      }
      case Tok::Exists: {
        Token role = expect(Tok::Ident);
        if (names_) names_->use_role(role, line_);
        expect(Tok::Dot);
        return ConceptExpr::exists(role.text, unary());
      }
      default:
        throw ParseError(line_, t.column,
                         t.kind == Tok::End ? std::string("expected concept expression")
                                            : "expected concept expression, found '" + t.text + "'");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t line_;
  Namespaces* names_;
};

}  // namespace

TBox parse_tbox(std::string_view text, const ParseOptions& options) {
  TBox tbox;
  Namespaces names(tbox, options);
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    start = end + 1;

    auto tokens = tokenize(line, line_no);
    if (tokens.front().kind == Tok::End) continue;
    LineParser p(std::move(tokens), line_no, &names);
    switch (p.peek().kind) {
      case Tok::Concept: {
        p.next();
        names.declare_concept(p.expect(Tok::Ident), line_no);
        break;
      }
      case Tok::Role: {
        p.next();
        names.declare_role(p.expect(Tok::Ident), line_no);
        break;
      }
      case Tok::Domain:
      case Tok::Range: {
        bool is_domain = p.next().kind == Tok::Domain;
        Token role = p.expect(Tok::Ident);
        names.use_role(role, line_no);
        p.expect(Tok::Equals);
        ConceptExpr c = p.expression();
        auto& table = is_domain ? tbox.domains : tbox.ranges;
        if (!table.emplace(role.text, std::move(c)).second) {
          throw ParseError(line_no, role.column,
                           std::string("duplicate ") + (is_domain ? "DOMAIN" : "RANGE") +
                               " declaration for role '" + role.text + "'");
        }
        break;
      }
      default: {
        ConceptExpr lhs = p.expression();
        p.expect(Tok::SubclassOf);
        ConceptExpr rhs = p.expression();
        tbox.gcis.push_back({std::move(lhs), std::move(rhs)});
        break;
      }
    }
    p.finish();
  }
  return tbox;
}

TBox load_tbox(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::NotFound, "ontology not found: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_tbox(ss.str(), options);
}

ConceptExpr parse_concept(std::string_view text, const TBox&) {
  LineParser p(tokenize(text, 1), 1, nullptr);
  ConceptExpr c = p.expression();
  p.finish();
  return c;
}

ConceptMapping parse_mapping(std::string_view text, const TBox& tbox) {
  ConceptMapping mapping;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    auto arrow = line.find("->");
    if (arrow == std::string_view::npos) {
      throw ParseError(line_no, first + 1, "expected '<feature> -> <concept>'");
    }
    std::string_view lhs = line.substr(0, arrow);
    auto lb = lhs.find_first_not_of(" \t");
    auto le = lhs.find_last_not_of(" \t");
    if (lb == std::string_view::npos) throw ParseError(line_no, 1, "missing feature name");
    std::string feature(lhs.substr(lb, le - lb + 1));
    ConceptExpr concept_expr = [&] {
      try {
        return parse_concept(line.substr(arrow + 2), tbox);
      } catch (const ParseError& e) {
        throw ParseError(line_no, arrow + 2 + e.column(), e.message());
      }
    }();
    if (!mapping.emplace(feature, std::move(concept_expr)).second) {
      throw ParseError(line_no, lb + 1, "feature '" + feature + "' mapped twice");
    }
  }
  return mapping;
}

ConceptMapping load_mapping(const std::string& path, const TBox& tbox) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::NotFound, "mapping not found: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_mapping(ss.str(), tbox);
}

}  // namespace trepan::onto
