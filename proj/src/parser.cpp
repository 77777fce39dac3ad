#include "chcspec/parser.hpp"

#include <cctype>
#include <optional>

#include "chcspec/constraints.hpp"

namespace chcspec {

namespace {

enum class Tok {
  End,
  Ident,     // lowercase-initial identifier
  VarName,   // uppercase- or '_'-initial identifier
  Number,
  LParen,
  RParen,
  Comma,
  Dot,
  Neck,      // :-
  Plus,
  Minus,
  Star,
  Slash,
  Eq,
  Lt,
  Le,
  Gt,
  Ge,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> tokenize() {
    std::vector<Token> out;
    for (;;) {
      skip_blank();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          advance();
        t.text = std::string(src_.substr(start, pos_ - start));
        t.kind = std::islower(static_cast<unsigned char>(c)) ? Tok::Ident : Tok::VarName;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        if (pos_ + 1 < src_.size() && src_[pos_] == '.' &&
            std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
          advance();
          while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
            advance();
        }
        t.text = std::string(src_.substr(start, pos_ - start));
        t.kind = Tok::Number;
      } else {
        t.kind = punct(t);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool next_is(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

  Tok punct(Token& t) {
    struct Entry {
      std::string_view text;
      Tok kind;
    };
    static constexpr Entry table[] = {
        {":-", Tok::Neck}, {"=<", Tok::Le}, {"<=", Tok::Le}, {">=", Tok::Ge},
        {"(", Tok::LParen}, {")", Tok::RParen}, {",", Tok::Comma}, {".", Tok::Dot},
        {"+", Tok::Plus},  {"-", Tok::Minus},  {"*", Tok::Star},  {"/", Tok::Slash},
        {"=", Tok::Eq},    {"<", Tok::Lt},     {">", Tok::Gt},
    };
    for (const auto& e : table) {
      if (next_is(e.text)) {
        for (std::size_t i = 0; i < e.text.size(); ++i) advance();
        t.text = std::string(e.text);
        return e.kind;
      }
    }
    throw ParseError(std::string("unexpected character '") + src_[pos_] + "'", line_, col_);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

Rational parse_number(const std::string& text) {
  auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(text, 10);
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  std::string denom = "1" + std::string(text.size() - dot - 1, '0');
  Rational q(digits + "/" + denom, 10);
  q.canonicalize();
  return q;
}

bool is_number(const Term& t) { return t.kind == Term::Kind::Number; }

// Folds arithmetic on two literals so that "(1/2)" reads back as a number.
Term make_binary(Term::Kind k, Term lhs, Term rhs) {
  if (is_number(lhs) && is_number(rhs)) {
    switch (k) {
      case Term::Kind::Add:
        return Term::num(lhs.number + rhs.number);
      case Term::Kind::Sub:
        return Term::num(lhs.number - rhs.number);
      case Term::Kind::Mul:
        return Term::num(lhs.number * rhs.number);
      case Term::Kind::Div:
        if (rhs.number != 0) return Term::num(lhs.number / rhs.number);
        break;
      default:
        break;
    }
  }
  return Term::binary(k, std::move(lhs), std::move(rhs));
}

std::optional<LinearExpr> linearize(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Variable:
      return LinearExpr::variable(t.var);
    case Term::Kind::Number:
      return LinearExpr(t.number);
    case Term::Kind::Neg: {
      auto e = linearize(t.args[0]);
      if (!e) return std::nullopt;
      return -*e;
    }
    default:
      break;
  }
  auto a = linearize(t.args[0]);
  auto b = linearize(t.args[1]);
  if (!a || !b) return std::nullopt;
  switch (t.kind) {
    case Term::Kind::Add:
      return *a + *b;
    case Term::Kind::Sub:
      return *a - *b;
    case Term::Kind::Mul:
      if (a->is_constant()) return *b * a->constant();
      if (b->is_constant()) return *a * b->constant();
      return std::nullopt;
    case Term::Kind::Div:
      if (b->is_constant() && b->constant() != 0) return *a * (1 / b->constant());
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

AtomicConstraint make_relation(Term lhs, Tok op, Term rhs) {
  bool reversed = op == Tok::Gt || op == Tok::Ge;
  Rel rel = (op == Tok::Eq) ? Rel::Eq : (op == Tok::Lt || op == Tok::Gt) ? Rel::Lt : Rel::Le;
  if (reversed) std::swap(lhs, rhs);
  auto l = linearize(lhs);
  auto r = linearize(rhs);
  if (l && r) return LinearAtom{*l - *r, rel};
  return OpaqueAtom{std::move(lhs), rel, std::move(rhs)};
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  bool at_end() const { return peek().kind == Tok::End; }

  // Parses one clause; `scope` maps variable names to clause-local vars.
  Clause clause(bool dot_optional) {
    scope_.clear();
    fresh_.clear();
    Clause c;
    std::vector<Term> head_args;
    c.head = atom(head_args, c.constraint);
    if (accept(Tok::Neck)) {
      do {
        body_item(c);
      } while (accept(Tok::Comma));
    }
    if (dot_optional) {
      accept(Tok::Dot);
      if (!at_end()) fail("expected end of input");
    } else {
      expect(Tok::Dot, "'.'");
    }
    name_fresh_vars(c);
    return c;
  }

  Constraint conjunction(std::map<std::string, Var>& scope) {
    scope_ = scope;
    Constraint c;
    if (!at_end()) {
      do {
        const Token& t = peek();
        if (t.kind == Tok::Ident && t.text == "true") {
          next();
        } else if (t.kind == Tok::Ident && t.text == "false") {
          next();
          c = Constraint::bottom();
        } else {
          c.add(relation());
        }
      } while (accept(Tok::Comma));
    }
    accept(Tok::Dot);
    if (!at_end()) fail("expected end of constraint");
    scope = scope_;
    return c;
  }

  const std::vector<std::pair<PredicateKey, std::pair<std::size_t, std::size_t>>>& sites() const {
    return sites_;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    next();
    return true;
  }
  const Token& expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    return next();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string near = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg + " near " + near, t.line, t.column);
  }

  Var variable(const std::string& name) {
    if (name == "_") return fresh_var("_");
    auto it = scope_.find(name);
    if (it != scope_.end()) return it->second;
    Var v = fresh_var(name);
    scope_.emplace(name, v);
    return v;
  }

  Atom atom(std::vector<Term>& args_out, Constraint& constraint) {
    const Token& name = expect(Tok::Ident, "predicate name");
    Atom a{name.text, {}};
    std::size_t line = name.line, col = name.column;
    if (accept(Tok::LParen)) {
      do {
        args_out.push_back(expr());
      } while (accept(Tok::Comma));
      expect(Tok::RParen, "')'");
    }
    VarSet used;
    for (auto& t : args_out) {
      if (t.kind == Term::Kind::Variable && !used.count(t.var)) {
        used.insert(t.var);
        a.args.push_back(t.var);
        continue;
      }
      Var v = fresh_var("");
      fresh_.push_back(v);
      a.args.push_back(v);
      used.insert(v);
      constraint.add(make_relation(Term::variable(v), Tok::Eq, t));
    }
    sites_.push_back({a.key(), {line, col}});
    return a;
  }

  void body_item(Clause& c) {
    const Token& t = peek();
    if (t.kind == Tok::Ident) {
      if (t.text == "true" && toks_[pos_ + 1].kind != Tok::LParen) {
        next();
        return;
      }
      if (t.text == "false" && toks_[pos_ + 1].kind != Tok::LParen) {
        next();
        c.constraint = Constraint::bottom();
        return;
      }
      std::vector<Term> args;
      c.body.push_back(atom(args, c.constraint));
      return;
    }
    c.constraint.add(relation());
  }

  AtomicConstraint relation() {
    Term lhs = expr();
    Tok op = peek().kind;
    if (op != Tok::Eq && op != Tok::Lt && op != Tok::Le && op != Tok::Gt && op != Tok::Ge)
      fail("expected a relation (=, <, >, =<, >=)");
    next();
    Term rhs = expr();
    return make_relation(std::move(lhs), op, std::move(rhs));
  }

  Term expr() {
    Term t = term();
    for (;;) {
      if (accept(Tok::Plus))
        t = make_binary(Term::Kind::Add, std::move(t), term());
      else if (accept(Tok::Minus))
        t = make_binary(Term::Kind::Sub, std::move(t), term());
      else
        return t;
    }
  }

  Term term() {
    Term t = factor();
    for (;;) {
      if (accept(Tok::Star))
        t = make_binary(Term::Kind::Mul, std::move(t), factor());
      else if (accept(Tok::Slash))
        t = make_binary(Term::Kind::Div, std::move(t), factor());
      else
        return t;
    }
  }

  Term factor() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Minus: {
        next();
        Term inner = factor();
        if (is_number(inner)) return Term::num(-inner.number);
        return Term::negate(std::move(inner));
      }
      case Tok::Number:
        return Term::num(parse_number(next().text));
      case Tok::VarName:
        return Term::variable(variable(next().text));
      case Tok::LParen: {
        next();
        Term inner = expr();
        expect(Tok::RParen, "')'");
        return inner;
      }
      default:
        fail("expected an arithmetic expression");
    }
  }

  // Gives parser-introduced variables names that do not clash within the
  // clause.
  void name_fresh_vars(Clause& c) {
    if (fresh_.empty()) return;
    std::set<std::string> taken;
    for (const auto& v : c.vars()) taken.insert(v.name);
    VarMap m;
    std::size_t k = 1;
    for (const auto& v : fresh_) {
      std::string name;
      do {
        name = "_V" + std::to_string(k++);
      } while (taken.count(name));
      taken.insert(name);
      Var named = v;
      named.name = name;
      m.emplace(v, named);
    }
    c = c.rename(m);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::map<std::string, Var> scope_;
  std::vector<Var> fresh_;
  std::vector<std::pair<PredicateKey, std::pair<std::size_t, std::size_t>>> sites_;
};

}  // namespace

Program parse_program(std::string_view text) {
  Parser parser(Lexer(text).tokenize());
  Program program;
  std::map<std::string, std::size_t> arity;
  std::size_t checked = 0;
  while (!parser.at_end()) {
    program.add(parser.clause(false));
    const auto& sites = parser.sites();
    for (; checked < sites.size(); ++checked) {
      const auto& [key, where] = sites[checked];
      auto [it, inserted] = arity.emplace(key.name, key.arity);
      if (!inserted && it->second != key.arity)
        throw ParseError("predicate '" + key.name + "' used with arity " +
                             std::to_string(key.arity) + " and " + std::to_string(it->second),
                         where.first, where.second);
    }
  }
  return program;
}

Clause parse_clause(std::string_view text) {
  Parser parser(Lexer(text).tokenize());
  return parser.clause(true);
}

std::vector<ConstrainedFact> parse_constrained_facts(std::string_view text) {
  Program p = parse_program(text);
  std::vector<ConstrainedFact> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Clause& c = p.clauses()[i];
    if (!c.body.empty())
      throw InputError("constrained fact " + std::to_string(i + 1) + " (" + c.head.predicate +
                       ") has body atoms");
    VarSet keep(c.head.args.begin(), c.head.args.end());
    ConstrainedFact f{c.head, project(c.constraint, keep)};
    out.push_back(f.positional());
  }
  return out;
}

Constraint parse_constraint(std::string_view text, std::map<std::string, Var>& scope) {
  Parser parser(Lexer(text).tokenize());
  return parser.conjunction(scope);
}

}  // namespace chcspec
