#include <cctype>
#include <cstdlib>
#include <set>
#include <sstream>
#include <unordered_map>

#include "npr/kb.hpp"

namespace npr {

CIGTuple::CIGTuple(Sentence x, Sentence y, Sentence z) {
  if (canonical_form(y) < canonical_form(x)) std::swap(x, y);
  a = std::move(x);
  b = std::move(y);
  given = std::move(z);
}

std::string CIGTuple::key() const {
  return "{" + canonical_form(a) + "," + canonical_form(b) + "}|" +
         canonical_form(given);
}

std::string ValidationError::join(const std::vector<std::string>& v) {
  std::string out = "validation failed:";
  for (const auto& s : v) out += "\n  " + s;
  return out;
}

namespace {

enum class Tok {
  Ident,
  Number,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Semi,
  Bar,
  Bang,
  Amp,
  Arrow,
  DArrow,
  Eq,
  Ge,
  Le,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  double num = 0.0;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : src_(text) { advance(); }

  const Token& peek() const { return cur_; }
  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_space();
    cur_.line = line_;
    cur_.col = col_;
    if (pos_ >= src_.size()) {
      cur_.kind = Tok::End;
      cur_.text.clear();
      return;
    }
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string id;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_')) {
        id += src_[pos_];
        bump();
      }
      cur_.kind = Tok::Ident;
      cur_.text = std::move(id);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < src_.size() &&
         std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      std::string num;
      while (pos_ < src_.size() &&
             (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '.')) {
        num += src_[pos_];
        bump();
      }
      cur_.kind = Tok::Number;
      cur_.text = num;
      cur_.num = std::strtod(num.c_str(), nullptr);
      return;
    }
    auto two = [&](char a, char b) {
      return c == a && pos_ + 1 < src_.size() && src_[pos_ + 1] == b;
    };
    if (c == '<' && pos_ + 2 < src_.size() && src_[pos_ + 1] == '-' &&
        src_[pos_ + 2] == '>') {
      bump(); bump(); bump();
      cur_.kind = Tok::DArrow;
      cur_.text = "<->";
      return;
    }
    if (two('-', '>')) {
      bump(); bump();
      cur_.kind = Tok::Arrow;
      cur_.text = "->";
      return;
    }
    if (two('>', '=')) {
      bump(); bump();
      cur_.kind = Tok::Ge;
      cur_.text = ">=";
      return;
    }
    if (two('<', '=')) {
      bump(); bump();
      cur_.kind = Tok::Le;
      cur_.text = "<=";
      return;
    }
    bump();
    cur_.text = std::string(1, c);
    switch (c) {
      case '(': cur_.kind = Tok::LParen; return;
      case ')': cur_.kind = Tok::RParen; return;
      case '{': cur_.kind = Tok::LBrace; return;
      case '}': cur_.kind = Tok::RBrace; return;
      case ',': cur_.kind = Tok::Comma; return;
      case ';': cur_.kind = Tok::Semi; return;
      case '|': cur_.kind = Tok::Bar; return;
      case '!': cur_.kind = Tok::Bang; return;
      case '&': cur_.kind = Tok::Amp; return;
      case '=': cur_.kind = Tok::Eq; return;
      default:
        throw ParseError(cur_.line, cur_.col,
                         "unexpected character '" + std::string(1, c) + "'");
    }
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token cur_;
};

const std::set<std::string> kReserved = {"atoms", "P",     "default", "ci",
                                        "given", "prefer", "over",    "query",
                                        "true",  "false",  "v"};

class Parser {
 public:
  Parser(const std::string& text) : lex_(text) {}

  KnowledgeBase parse() {
    while (lex_.peek().kind != Tok::End) statement();
    if (!issues_.empty()) throw ValidationError(std::move(issues_));
    return std::move(kb_);
  }

  Sentence parse_single_sentence(const std::vector<Atom>& atoms) {
    set_atoms(atoms);
    strict_atoms_ = true;
    Sentence s = sentence();
    expect(Tok::End, "end of input");
    return s;
  }

  Query parse_single_query(const std::vector<Atom>& atoms) {
    set_atoms(atoms);
    strict_atoms_ = true;
    expect_ident("P");
    auto [t, g] = conditional();
    expect(Tok::End, "end of input");
    return Query{t, g};
  }

 private:
  void set_atoms(const std::vector<Atom>& atoms) {
    for (size_t i = 0; i < atoms.size(); ++i)
      index_[atoms[i].name] = static_cast<int>(i);
    kb_.atoms = atoms;
  }

  void statement() {
    const Token& t = lex_.peek();
    if (t.kind != Tok::Ident)
      throw ParseError(t.line, t.col, "expected statement, got '" + t.text + "'");
    if (t.text == "atoms") {
      atoms_stmt();
    } else if (t.text == "P") {
      prob_stmt();
    } else if (t.text == "default") {
      default_stmt();
    } else if (t.text == "prefer") {
      prefer_stmt();
    } else if (t.text == "query") {
      query_stmt();
    } else {
      throw ParseError(t.line, t.col, "unknown statement '" + t.text + "'");
    }
  }

  void atoms_stmt() {
    lex_.take();
    bool any = false;
    while (lex_.peek().kind == Tok::Ident &&
           kReserved.count(lex_.peek().text) == 0) {
      Token id = lex_.take();
      any = true;
      if (index_.count(id.text)) {
        issues_.push_back("line " + std::to_string(id.line) +
                          ": duplicate atom '" + id.text + "'");
        continue;
      }
      index_[id.text] = static_cast<int>(kb_.atoms.size());
      kb_.atoms.push_back(Atom{id.text});
    }
    if (!any) {
      const Token& t = lex_.peek();
      throw ParseError(t.line, t.col, "expected at least one atom name");
    }
    expect(Tok::Semi, "';'");
  }

  void prob_stmt() {
    Token head = lex_.take();
    auto [target, given] = conditional();
    ProbConstraint pc;
    pc.target = target;
    pc.given = given;
    pc.line = head.line;
    Token rel = lex_.take();
    switch (rel.kind) {
      case Tok::Eq: pc.rel = Rel::EQ; break;
      case Tok::Ge: pc.rel = Rel::GE; break;
      case Tok::Le: pc.rel = Rel::LE; break;
      default:
        throw ParseError(rel.line, rel.col, "expected '=', '>=' or '<='");
    }
    Token num = lex_.take();
    if (num.kind != Tok::Number)
      throw ParseError(num.line, num.col, "expected a number");
    pc.value = num.num;
    if (pc.value < 0.0 || pc.value > 1.0)
      issues_.push_back("line " + std::to_string(num.line) +
                        ": value out of [0,1]: " + num.text);
    expect(Tok::Semi, "';'");
    kb_.hard.push_back(std::move(pc));
  }

  void default_stmt() {
    lex_.take();
    expect_ident("ci");
    kb_.defaults.push_back(ci_body());
    expect(Tok::Semi, "';'");
  }

  void prefer_stmt() {
    Token head = lex_.take();
    expect_ident("ci");
    CIGTuple hi = ci_body();
    expect_ident("over");
    expect_ident("ci");
    CIGTuple lo = ci_body();
    expect(Tok::Semi, "';'");
    if (hi == lo)
      issues_.push_back("line " + std::to_string(head.line) +
                        ": 'prefer' requires two distinct ci tuples");
    kb_.priorities.push_back(PriorityDecl{hi, lo, head.line});
  }

  void query_stmt() {
    lex_.take();
    expect_ident("P");
    auto [target, given] = conditional();
    expect(Tok::Semi, "';'");
    kb_.queries.push_back(Query{target, given});
  }

  CIGTuple ci_body() {
    expect(Tok::LBrace, "'{'");
    Sentence x = sentence();
    expect(Tok::Comma, "','");
    Sentence y = sentence();
    expect(Tok::RBrace, "'}'");
    expect_ident("given");
    Sentence z = sentence();
    return CIGTuple(x, y, z);
  }

  std::pair<Sentence, Sentence> conditional() {
    expect(Tok::LParen, "'('");
    Sentence target = sentence();
    Sentence given = Sentence::truth();
    if (lex_.peek().kind == Tok::Bar) {
      lex_.take();
      given = sentence();
    }
    expect(Tok::RParen, "')'");
    return {target, given};
  }

  // sentence := iff; precedence ! > & > v > -> (right assoc) > <->
  Sentence sentence() { return iff(); }

  Sentence iff() {
    Sentence s = imp();
    while (lex_.peek().kind == Tok::DArrow) {
      lex_.take();
      s = Sentence::iff(s, imp());
    }
    return s;
  }

  Sentence imp() {
    Sentence s = disj();
    if (lex_.peek().kind == Tok::Arrow) {
      lex_.take();
      return Sentence::implies(s, imp());
    }
    return s;
  }

  Sentence disj() {
    Sentence s = conj();
    while (lex_.peek().kind == Tok::Ident && lex_.peek().text == "v") {
      lex_.take();
      s = Sentence::disj(s, conj());
    }
    return s;
  }

  Sentence conj() {
    Sentence s = unary();
    while (lex_.peek().kind == Tok::Amp) {
      lex_.take();
      s = Sentence::conj(s, unary());
    }
    return s;
  }

  Sentence unary() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Bang) {
      lex_.take();
      return Sentence::negate(unary());
    }
    if (t.kind == Tok::LParen) {
      lex_.take();
      Sentence s = sentence();
      expect(Tok::RParen, "')'");
      return s;
    }
    if (t.kind == Tok::Ident) {
      Token id = lex_.take();
      if (id.text == "true") return Sentence::truth();
      if (id.text == "false") return Sentence::falsity();
      if (kReserved.count(id.text))
        throw ParseError(id.line, id.col,
                         "reserved word '" + id.text + "' in sentence");
      auto it = index_.find(id.text);
      if (it == index_.end()) {
        if (strict_atoms_)
          throw ParseError(id.line, id.col, "unknown atom '" + id.text + "'");
        issues_.push_back("line " + std::to_string(id.line) +
                          ": undeclared atom '" + id.text + "'");
        return Sentence::atom(-1, id.text);
      }
      return Sentence::atom(it->second, id.text);
    }
    throw ParseError(t.line, t.col, "expected a sentence, got '" + t.text + "'");
  }

  void expect(Tok k, const char* what) {
    const Token& t = lex_.peek();
    if (t.kind != k)
      throw ParseError(t.line, t.col,
                       "expected " + std::string(what) + ", got '" + t.text + "'");
    lex_.take();
  }

  void expect_ident(const char* word) {
    const Token& t = lex_.peek();
    if (t.kind != Tok::Ident || t.text != word)
      throw ParseError(t.line, t.col,
                       "expected '" + std::string(word) + "', got '" + t.text + "'");
    lex_.take();
  }

  Lexer lex_;
  KnowledgeBase kb_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::string> issues_;
  bool strict_atoms_ = false;
};

const char* rel_text(Rel r) {
  switch (r) {
    case Rel::EQ: return "=";
    case Rel::GE: return ">=";
    default: return "<=";
  }
}

}  // namespace

KnowledgeBase parse_kb(const std::string& text) {
  return Parser(text).parse();
}

Sentence parse_sentence(const std::string& text, const std::vector<Atom>& atoms) {
  return Parser(text).parse_single_sentence(atoms);
}

Query parse_query(const std::string& text, const std::vector<Atom>& atoms) {
  return Parser(text).parse_single_query(atoms);
}

std::string render(const KnowledgeBase& kb) {
  std::ostringstream out;
  if (!kb.atoms.empty()) {
    out << "atoms";
    for (const auto& a : kb.atoms) out << ' ' << a.name;
    out << ";\n";
  }
  out.precision(17);
  for (const auto& pc : kb.hard) {
    out << "P(" << npr::render(pc.target);
    if (!pc.given.is_true()) out << " | " << npr::render(pc.given);
    out << ") " << rel_text(pc.rel) << ' ' << pc.value << ";\n";
  }
  for (const auto& d : kb.defaults) {
    out << "default ci {" << npr::render(d.a) << ", " << npr::render(d.b)
        << "} given " << npr::render(d.given) << ";\n";
  }
  for (const auto& p : kb.priorities) {
    out << "prefer ci {" << npr::render(p.higher.a) << ", "
        << npr::render(p.higher.b) << "} given " << npr::render(p.higher.given)
        << " over ci {" << npr::render(p.lower.a) << ", "
        << npr::render(p.lower.b) << "} given " << npr::render(p.lower.given)
        << ";\n";
  }
  for (const auto& q : kb.queries) {
    out << "query P(" << npr::render(q.target);
    if (!q.given.is_true()) out << " | " << npr::render(q.given);
    out << ");\n";
  }
  return out.str();
}

}  // namespace npr
