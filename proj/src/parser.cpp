#include "expq/parser.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <unordered_map>
#include <unordered_set>

#include "expq/analysis.hpp"
#include "expq/errors.hpp"
#include "expq/normalize.hpp"
#include "expq/prenex.hpp"

namespace expq {

namespace {

// ---------------------------------------------------------------- lexer

enum class Tok {
  End, Ident, Int, LParen, RParen, Dot, Comma, Star, Plus, Minus, Bar,
  Lt, Le, Gt, Ge, Eq, Ne, Not, And, Or, Implies
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < s.size()) {
    char c = s[i];
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    int l = line;
    int cl = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\''))
        ++j;
      out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Tok::Int, std::string(s.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    auto two = s.substr(i, 2);
    Tok k;
    std::size_t n = 2;
    if (two == "<=") k = Tok::Le;
    else if (two == ">=") k = Tok::Ge;
    else if (two == "!=") k = Tok::Ne;
    else if (two == "&&") k = Tok::And;
    else if (two == "||") k = Tok::Or;
    else if (two == "->") k = Tok::Implies;
    else {
      n = 1;
      switch (c) {
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case '.': k = Tok::Dot; break;
        case ',': k = Tok::Comma; break;
        case '*': k = Tok::Star; break;
        case '+': k = Tok::Plus; break;
        case '-': k = Tok::Minus; break;
        case '|': k = Tok::Bar; break;
        case '<': k = Tok::Lt; break;
        case '>': k = Tok::Gt; break;
        case '=': k = Tok::Eq; break;
        case '!': k = Tok::Not; break;
        default:
          throw ParseError(std::string("unexpected character '") + c + "'", l, cl);
      }
    }
    out.push_back({k, std::string(s.substr(i, n)), l, cl});
    advance(n);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

// ---------------------------------------------------------------- syntax tree

struct RawTerm {
  struct Item {
    MonoKind kind;
    std::string name;
    Integer coeff;
  };
  std::vector<Item> items;
  Integer constant = 0;
};

struct RawNode {
  enum Kind { True, False, Rel, Div, Pred, Not, And, Or, Implies, Quant } kind;
  Tok rel = Tok::Lt;
  RawTerm lhs, rhs;
  Integer modulus;
  std::vector<std::unique_ptr<RawNode>> kids;
  Quantifier quant = Quantifier::Exists;
  std::string var;
};

using RawPtr = std::unique_ptr<RawNode>;

RawPtr node(RawNode::Kind k) {
  auto n = std::make_unique<RawNode>();
  n->kind = k;
  return n;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, Dialect d) : toks_(std::move(toks)), dialect_(d) {}

  RawPtr parseAll() {
    RawPtr f = parseImplies();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Dialect dialect_;

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, peek().line, peek().col);
  }
  void expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    next();
  }
  bool isKeyword(const std::string& w) const { return peek().kind == Tok::Ident && peek().text == w; }

  RawPtr parseImplies() {
    RawPtr lhs = parseOr();
    if (peek().kind == Tok::Implies) {
      next();
      RawPtr n = node(RawNode::Implies);
      n->kids.push_back(std::move(lhs));
      n->kids.push_back(parseImplies());
      return n;
    }
    return lhs;
  }

  RawPtr parseOr() {
    RawPtr first = parseAnd();
    if (peek().kind != Tok::Or) return first;
    RawPtr n = node(RawNode::Or);
    n->kids.push_back(std::move(first));
    while (peek().kind == Tok::Or) {
      next();
      n->kids.push_back(parseAnd());
    }
    return n;
  }

  RawPtr parseAnd() {
    RawPtr first = parseUnary();
    if (peek().kind != Tok::And) return first;
    RawPtr n = node(RawNode::And);
    n->kids.push_back(std::move(first));
    while (peek().kind == Tok::And) {
      next();
      n->kids.push_back(parseUnary());
    }
    return n;
  }

  RawPtr parseUnary() {
    if (peek().kind == Tok::Not) {
      next();
      RawPtr n = node(RawNode::Not);
      n->kids.push_back(parseUnary());
      return n;
    }
    if (isKeyword("exists") || isKeyword("forall")) return parseQuantifier();
    return parsePrimary();
  }

  RawPtr parseQuantifier() {
    Quantifier q = next().text == "exists" ? Quantifier::Exists : Quantifier::Forall;
    std::vector<std::string> vars;
    for (;;) {
      if (peek().kind != Tok::Ident || isReserved(peek().text)) fail("expected variable name");
      vars.push_back(next().text);
      if (peek().kind == Tok::Comma) {
        next();
        continue;
      }
      if (peek().kind == Tok::Ident) continue;
      break;
    }
    expect(Tok::Dot, "'.' after quantified variables");
    RawPtr body = parseImplies();
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
      RawPtr n = node(RawNode::Quant);
      n->quant = q;
      n->var = *it;
      n->kids.push_back(std::move(body));
      body = std::move(n);
    }
    return body;
  }

  static bool isReserved(const std::string& w) {
    return w == "exists" || w == "forall" || w == "true" || w == "false" || w == "pow";
  }

  RawPtr parsePrimary() {
    if (isKeyword("true")) {
      next();
      return node(RawNode::True);
    }
    if (isKeyword("false")) {
      next();
      return node(RawNode::False);
    }
    if (peek().kind == Tok::LParen) {
      next();
      RawPtr f = parseImplies();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (peek().kind == Tok::Ident && peek().text == "P" && peek(1).kind == Tok::LParen) {
      if (dialect_ != Dialect::PresPower) fail("predicate P is only available in the prespower dialect");
      next();
      next();
      RawPtr n = node(RawNode::Pred);
      n->lhs = parseTerm();
      expect(Tok::RParen, "')'");
      return n;
    }
    if (peek().kind == Tok::Int && peek(1).kind == Tok::Bar) {
      const Token& t = peek();
      Integer q(t.text);
      if (sgn(q) == 0) fail("divisibility modulus must be at least 1");
      next();
      next();
      RawPtr n = node(RawNode::Div);
      n->modulus = q;
      n->lhs = parseTerm();
      return n;
    }
    RawPtr n = node(RawNode::Rel);
    n->lhs = parseTerm();
    switch (peek().kind) {
      case Tok::Lt: case Tok::Le: case Tok::Gt: case Tok::Ge: case Tok::Eq: case Tok::Ne:
        n->rel = next().kind;
        break;
      default:
        fail("expected a relation");
    }
    n->rhs = parseTerm();
    return n;
  }

  RawTerm parseTerm() {
    RawTerm t;
    bool negate = false;
    if (peek().kind == Tok::Minus) {
      next();
      negate = true;
    } else if (peek().kind == Tok::Plus) {
      next();
    }
    parseFactor(t, negate);
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      negate = next().kind == Tok::Minus;
      parseFactor(t, negate);
    }
    return t;
  }

  void parseFactor(RawTerm& t, bool negate) {
    Integer coeff = 1;
    bool haveCoeff = false;
    if (peek().kind == Tok::Int) {
      coeff = Integer(next().text);
      haveCoeff = true;
      if (peek().kind != Tok::Star) {
        t.constant += negate ? Integer(-coeff) : coeff;
        return;
      }
      next();
    }
    if (negate) coeff = -coeff;
    if (peek().kind == Tok::Bar) {
      if (dialect_ != Dialect::PresExp) fail("absolute values are not available in the prespower dialect");
      next();
      if (peek().kind != Tok::Ident || isReserved(peek().text)) fail("expected variable inside |.|");
      std::string name = next().text;
      expect(Tok::Bar, "closing '|'");
      t.items.push_back({MonoKind::Abs, name, coeff});
      return;
    }
    if (peek().kind == Tok::Ident && peek().text == "pow") {
      if (dialect_ != Dialect::PresExp) fail("pow() is not available in the prespower dialect");
      next();
      expect(Tok::LParen, "'(' after pow");
      if (peek().kind != Tok::Ident || isReserved(peek().text)) fail("expected variable inside pow()");
      std::string name = next().text;
      expect(Tok::RParen, "')'");
      t.items.push_back({MonoKind::Power, name, coeff});
      return;
    }
    if (peek().kind == Tok::Ident && !isReserved(peek().text)) {
      if (peek().text == "P" && peek(1).kind == Tok::LParen) fail("predicate used as a term");
      t.items.push_back({MonoKind::Linear, next().text, coeff});
      return;
    }
    fail(haveCoeff ? "expected variable or pow() after '*'" : "expected a term");
  }
};

// ---------------------------------------------------------------- resolution

class Resolver {
 public:
  Formula run(const RawNode& root) {
    std::vector<std::string> bound;
    collectFree(root, bound);
    for (const auto& n : free_) used_.insert(n);
    std::unordered_map<std::string, Variable> scope;
    return build(root, scope);
  }

 private:
  std::unordered_set<std::string> free_;
  std::unordered_set<std::string> used_;

  void collectTermFree(const RawTerm& t, const std::vector<std::string>& bound) {
    for (const auto& it : t.items)
      if (std::find(bound.begin(), bound.end(), it.name) == bound.end()) free_.insert(it.name);
  }

  void collectFree(const RawNode& n, std::vector<std::string>& bound) {
    collectTermFree(n.lhs, bound);
    collectTermFree(n.rhs, bound);
    if (n.kind == RawNode::Quant) bound.push_back(n.var);
    for (const auto& k : n.kids) collectFree(*k, bound);
    if (n.kind == RawNode::Quant) bound.pop_back();
  }

  static Term term(const RawTerm& t, const std::unordered_map<std::string, Variable>& scope) {
    Term out(t.constant);
    for (const auto& it : t.items) {
      auto s = scope.find(it.name);
      Variable v = s != scope.end() ? s->second : Variable::intern(it.name);
      out += Term::mono(Monomial{v, it.kind}, it.coeff);
    }
    return out;
  }

  Formula build(const RawNode& n, std::unordered_map<std::string, Variable>& scope) {
    auto lessRaw = [](Term t) { return Formula::atom(Atom::less(std::move(t))); };
    switch (n.kind) {
      case RawNode::True: return Formula::top();
      case RawNode::False: return Formula::bottom();
      case RawNode::Pred: return Formula::atom(Atom::pred(term(n.lhs, scope)));
      case RawNode::Div: return Formula::atom(Atom::div(n.modulus, term(n.lhs, scope)));
      case RawNode::Rel: {
        Term a = term(n.lhs, scope);
        Term b = term(n.rhs, scope);
        switch (n.rel) {
          case Tok::Lt: return lessRaw(a - b);
          case Tok::Le: return lessRaw(a - b - Term(1));
          case Tok::Gt: return lessRaw(b - a);
          case Tok::Ge: return lessRaw(b - a - Term(1));
          case Tok::Eq: return Formula::andOf({lessRaw(a - b - Term(1)), lessRaw(b - a - Term(1))});
          default: return Formula::orOf({lessRaw(a - b), lessRaw(b - a)});
        }
      }
      case RawNode::Not: return Formula::notOf(build(*n.kids[0], scope));
      case RawNode::And:
      case RawNode::Or: {
        std::vector<Formula> cs;
        for (const auto& k : n.kids) cs.push_back(build(*k, scope));
        return n.kind == RawNode::And ? Formula::andOf(std::move(cs)) : Formula::orOf(std::move(cs));
      }
      case RawNode::Implies: {
        Formula a = build(*n.kids[0], scope);
        Formula b = build(*n.kids[1], scope);
        return Formula::orOf({Formula::notOf(std::move(a)), std::move(b)});
      }
      case RawNode::Quant: {
        Variable v = used_.insert(n.var).second ? Variable::intern(n.var) : Variable::fresh(n.var);
        used_.insert(v.name());
        auto saved = scope.find(n.var);
        std::optional<Variable> previous;
        if (saved != scope.end()) previous = saved->second;
        scope[n.var] = v;
        Formula body = build(*n.kids[0], scope);
        if (previous) scope[n.var] = *previous;
        else scope.erase(n.var);
        return Formula::quantified(n.quant, v, std::move(body));
      }
    }
    return Formula::top();
  }
};

// ---------------------------------------------------------------- rendering

bool leadingPositive(const Term& t) {
  std::string best;
  bool pos = true;
  bool found = false;
  for (const auto& [m, c] : t.entries()) {
    if (!found || m.var.name() < best) {
      best = m.var.name();
      pos = sgn(c) > 0;
      found = true;
    }
  }
  return pos;
}

// Recognizes {e - k - 1 < 0, k - e - 1 < 0}, the encoding of e = k.
std::optional<std::string> equalityText(const Formula& a, const Formula& b) {
  if (!a.isAtom() || !b.isAtom() || !a.atomValue().isLess() || !b.atomValue().isLess()) return std::nullopt;
  const Term& ta = a.atomValue().term;
  const Term& tb = b.atomValue().term;
  if (ta.isConstant() || !(ta + tb == Term(-2))) return std::nullopt;
  const Term& t = leadingPositive(ta) ? ta : tb;
  Integer k = -(t.constant() + 1);
  return renderTerm(t.homogeneous()) + " = " + k.get_str();
}

std::string renderAtom(const Atom& a) {
  switch (a.kind) {
    case AtomKind::Less: return renderTerm(a.term) + " < 0";
    case AtomKind::Div: return a.modulus.get_str() + " | " + renderTerm(a.term);
    case AtomKind::Pred: return "P(" + renderTerm(a.term) + ")";
  }
  return {};
}

std::string renderRec(const Formula& f);

std::string wrapped(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
    case FormulaKind::Atom:
    case FormulaKind::Not:
      return renderRec(f);
    default:
      return "(" + renderRec(f) + ")";
  }
}

std::string renderRec(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::True: return "true";
    case FormulaKind::False: return "false";
    case FormulaKind::Atom: return renderAtom(f.atomValue());
    case FormulaKind::Not: return "!" + (f.child().isAtom() ? "(" + renderRec(f.child()) + ")" : wrapped(f.child()));
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      return std::string(f.kind() == FormulaKind::Exists ? "exists " : "forall ") + f.boundVar().name() +
             ". " + renderRec(f.child());
    case FormulaKind::And: {
      const auto& cs = f.children();
      std::vector<bool> done(cs.size(), false);
      std::vector<std::string> parts;
      for (std::size_t i = 0; i < cs.size(); ++i) {
        if (done[i]) continue;
        for (std::size_t j = i + 1; j < cs.size(); ++j) {
          if (done[j]) continue;
          if (auto eq = equalityText(cs[i], cs[j])) {
            parts.push_back(*eq);
            done[i] = done[j] = true;
            break;
          }
        }
        if (!done[i]) {
          parts.push_back(wrapped(cs[i]));
          done[i] = true;
        }
      }
      std::string out;
      for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " && " : "") + parts[i];
      return out;
    }
    case FormulaKind::Or: {
      std::string out;
      for (std::size_t i = 0; i < f.children().size(); ++i)
        out += (i ? " || " : "") + wrapped(f.children()[i]);
      return out;
    }
  }
  return {};
}

// ---------------------------------------------------------------- translation

Formula translateRec(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Atom: {
      const Atom& a = f.atomValue();
      if (a.isPred()) {
        Variable y = Variable::fresh("y");
        return Formula::quantified(Quantifier::Exists, y, equal(a.term, Term::pow(y)));
      }
      if (a.isDiv()) {
        Variable z = Variable::fresh("z");
        return Formula::quantified(Quantifier::Exists, z, equal(a.term, Term::var(z, a.modulus)));
      }
      return normalizeAtom(a);
    }
    case FormulaKind::Not: return lnot(translateRec(f.child()));
    case FormulaKind::And:
    case FormulaKind::Or: {
      std::vector<Formula> cs;
      for (const auto& c : f.children()) cs.push_back(translateRec(c));
      return f.kind() == FormulaKind::And ? land(std::move(cs)) : lor(std::move(cs));
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      return quantify(f.quantifier(), f.boundVar(), translateRec(f.child()));
    default:
      return f;
  }
}

}  // namespace

Formula parse(const SourceFormula& src) {
  Parser p(lex(src.text), src.dialect);
  RawPtr root = p.parseAll();
  return Resolver().run(*root);
}

Formula parse(std::string_view text, Dialect dialect) {
  return parse(SourceFormula{std::string(text), dialect});
}

std::string render(const Formula& f) { return renderRec(f); }

std::string render(const PrenexFormula& f) { return render(f.toFormula()); }

PrenexFormula translatePresPower(const Formula& f) {
  for (const auto& a : collectAtoms(f))
    if (a.term.hasKind(MonoKind::Power) || a.term.hasKind(MonoKind::Abs))
      throw ContractError("power-predicate translation expects no pow() or |.| terms");
  return toPrenexMinAlternation(translateRec(f));
}

}  // namespace expq
