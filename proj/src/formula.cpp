#include "sltlrm/formula.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <memory>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace sltlrm {

namespace {

// Printing precedence levels; a child is parenthesized when its level is
// not strictly tighter than required, which keeps print injective on
// structure (nested same-operator And/Or print with parentheses).
int level_of(Kind k) {
  switch (k) {
    case Kind::Then: return 0;
    case Kind::Or: return 1;
    case Kind::And: return 2;
    case Kind::Until: return 3;
    case Kind::Not:
    case Kind::Next:
    case Kind::Eventually: return 4;
    default: return 5;
  }
}

void print_rec(const Formula& f, int min_level, std::string& out);

void print_child(FormulaRef c, int min_level, std::string& out) {
  if (level_of(c->kind()) < min_level) {
    out += '(';
    print_rec(*c, 0, out);
    out += ')';
  } else {
    print_rec(*c, 0, out);
  }
}

void print_rec(const Formula& f, int /*min_level*/, std::string& out) {
  switch (f.kind()) {
    case Kind::True: out += "true"; break;
    case Kind::False: out += "false"; break;
    case Kind::Prop: out += f.prop_name(); break;
    case Kind::Not:
      out += '!';
      print_child(f.child(0), 4, out);
      break;
    case Kind::Next:
      out += "X ";
      print_child(f.child(0), 4, out);
      break;
    case Kind::Eventually:
      out += "F ";
      print_child(f.child(0), 4, out);
      break;
    case Kind::Until:
      // right-assoc: left child needs strictly tighter level
      print_child(f.child(0), 4, out);
      out += " U ";
      print_child(f.child(1), 3, out);
      break;
    case Kind::And:
      for (size_t i = 0; i < f.arity(); ++i) {
        if (i) out += " & ";
        print_child(f.child(i), 3, out);
      }
      break;
    case Kind::Or:
      for (size_t i = 0; i < f.arity(); ++i) {
        if (i) out += " | ";
        print_child(f.child(i), 2, out);
      }
      break;
    case Kind::Then:
      // left-assoc: right child needs strictly tighter level
      print_child(f.child(0), 0, out);
      out += " ; ";
      print_child(f.child(1), 1, out);
      break;
  }
}

}  // namespace

class FormulaPoolImpl {
public:
  FormulaRef intern(Kind k, std::string name, std::vector<FormulaRef> kids) {
    std::string key;
    key += static_cast<char>(static_cast<int>(k) + 'a');
    key += name;
    for (FormulaRef c : kids) {
      key += '#';
      key += std::to_string(reinterpret_cast<uintptr_t>(c));
    }
    std::lock_guard<std::mutex> lock(mu_);
    auto it = table_.find(key);
    if (it != table_.end()) return it->second.get();
    auto node = std::unique_ptr<Formula>(new Formula(k, std::move(name), std::move(kids)));
    FormulaRef ref = node.get();
    table_.emplace(std::move(key), std::move(node));
    return ref;
  }

  FormulaRef cached_normal(FormulaRef f) {
    std::lock_guard<std::mutex> lock(mu_);
    return f->normalized_;
  }
  void set_cached_normal(FormulaRef f, FormulaRef n) {
    std::lock_guard<std::mutex> lock(mu_);
    f->normalized_ = n;
  }

private:
  std::mutex mu_;
  std::unordered_map<std::string, std::unique_ptr<Formula>> table_;
};

namespace {

FormulaPoolImpl& pool() {
  static FormulaPoolImpl* p = new FormulaPoolImpl();  // intentionally leaked
  return *p;
}

bool valid_ident(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return s != "true" && s != "false" && s != "U" && s != "X" && s != "F";
}

}  // namespace

Formula::Formula(Kind k, std::string name, std::vector<FormulaRef> kids)
    : kind_(k), name_(std::move(name)), kids_(std::move(kids)) {
  print_rec(*this, 0, canon_);
}

size_t Formula::node_count() const {
  size_t n = 1;
  for (FormulaRef c : kids_) n += c->node_count();
  return n;
}

class FormulaPool {
public:
  static FormulaRef intern(Kind k, std::string name, std::vector<FormulaRef> kids) {
    return pool().intern(k, std::move(name), std::move(kids));
  }
  static FormulaRef cached(FormulaRef f) { return pool().cached_normal(f); }
  static void cache(FormulaRef f, FormulaRef n) { pool().set_cached_normal(f, n); }
};

FormulaRef top() { return FormulaPool::intern(Kind::True, "", {}); }
FormulaRef bot() { return FormulaPool::intern(Kind::False, "", {}); }

FormulaRef prop(const std::string& name) {
  if (!valid_ident(name))
    throw std::invalid_argument("invalid proposition name: '" + name + "'");
  return FormulaPool::intern(Kind::Prop, name, {});
}

FormulaRef mk_not(FormulaRef f) { return FormulaPool::intern(Kind::Not, "", {f}); }

FormulaRef mk_and(std::vector<FormulaRef> kids) {
  if (kids.size() < 2) throw std::invalid_argument("And needs >= 2 operands");
  return FormulaPool::intern(Kind::And, "", std::move(kids));
}

FormulaRef mk_or(std::vector<FormulaRef> kids) {
  if (kids.size() < 2) throw std::invalid_argument("Or needs >= 2 operands");
  return FormulaPool::intern(Kind::Or, "", std::move(kids));
}

FormulaRef mk_next(FormulaRef f) { return FormulaPool::intern(Kind::Next, "", {f}); }
FormulaRef mk_until(FormulaRef l, FormulaRef r) { return FormulaPool::intern(Kind::Until, "", {l, r}); }
FormulaRef mk_eventually(FormulaRef f) { return FormulaPool::intern(Kind::Eventually, "", {f}); }
FormulaRef mk_then(FormulaRef a, FormulaRef b) { return FormulaPool::intern(Kind::Then, "", {a, b}); }

FormulaRef n_not(FormulaRef f) {
  if (f->kind() == Kind::True) return bot();
  if (f->kind() == Kind::False) return top();
  if (f->kind() == Kind::Not) return f->child(0);
  return mk_not(f);
}

namespace {

FormulaRef n_assoc(Kind k, std::vector<FormulaRef> kids) {
  FormulaRef unit = (k == Kind::And) ? top() : bot();
  FormulaRef zero = (k == Kind::And) ? bot() : top();
  std::vector<FormulaRef> flat;
  for (FormulaRef c : kids) {
    if (c == zero) return zero;
    if (c == unit) continue;
    if (c->kind() == k) {
      for (FormulaRef g : c->children()) {
        if (g == zero) return zero;  // operands of a normalized child never are
        flat.push_back(g);
      }
    } else {
      flat.push_back(c);
    }
  }
  std::sort(flat.begin(), flat.end(), CanonLess{});
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  if (flat.empty()) return unit;
  if (flat.size() == 1) return flat[0];
  return FormulaPool::intern(k, "", std::move(flat));
}

}  // namespace

FormulaRef n_and(std::vector<FormulaRef> kids) { return n_assoc(Kind::And, std::move(kids)); }
FormulaRef n_or(std::vector<FormulaRef> kids) { return n_assoc(Kind::Or, std::move(kids)); }
FormulaRef n_next(FormulaRef f) { return mk_next(f); }
FormulaRef n_until(FormulaRef l, FormulaRef r) { return mk_until(l, r); }
FormulaRef n_eventually(FormulaRef f) { return mk_eventually(f); }

FormulaRef n_then(FormulaRef a, FormulaRef b) {
  if (a->kind() == Kind::True) return b;
  if (a->kind() == Kind::False) return bot();
  return mk_then(a, b);
}

FormulaRef normalize(FormulaRef f) {
  if (FormulaRef c = FormulaPool::cached(f)) return c;
  FormulaRef out;
  switch (f->kind()) {
    case Kind::True:
    case Kind::False:
    case Kind::Prop:
      out = f;
      break;
    case Kind::Not:
      out = n_not(normalize(f->child(0)));
      break;
    case Kind::And:
    case Kind::Or: {
      std::vector<FormulaRef> kids;
      kids.reserve(f->arity());
      for (FormulaRef c : f->children()) kids.push_back(normalize(c));
      out = n_assoc(f->kind(), std::move(kids));
      break;
    }
    case Kind::Next:
      out = n_next(normalize(f->child(0)));
      break;
    case Kind::Until:
      out = n_until(normalize(f->child(0)), normalize(f->child(1)));
      break;
    case Kind::Eventually:
      out = n_eventually(normalize(f->child(0)));
      break;
    case Kind::Then:
      out = n_then(normalize(f->child(0)), normalize(f->child(1)));
      break;
  }
  FormulaPool::cache(f, out);
  if (out != f) FormulaPool::cache(out, out);
  return out;
}

bool is_normalized(FormulaRef f) { return normalize(f) == f; }

std::set<std::string> propositions(FormulaRef f) {
  std::set<std::string> out;
  std::vector<FormulaRef> stack{f};
  while (!stack.empty()) {
    FormulaRef g = stack.back();
    stack.pop_back();
    if (g->kind() == Kind::Prop) out.insert(g->prop_name());
    for (FormulaRef c : g->children()) stack.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Token {
  enum Type { Ident, KwTrue, KwFalse, Until, Next, Finally, Not, AndOp, OrOp, ThenOp, LParen, RParen, End } type;
  std::string text;
  int line;
  int col;
};

const char* token_name(Token::Type t) {
  switch (t) {
    case Token::Ident: return "identifier";
    case Token::KwTrue: return "'true'";
    case Token::KwFalse: return "'false'";
    case Token::Until: return "'U'";
    case Token::Next: return "'X'";
    case Token::Finally: return "'F'";
    case Token::Not: return "'!'";
    case Token::AndOp: return "'&'";
    case Token::OrOp: return "'|'";
    case Token::ThenOp: return "';'";
    case Token::LParen: return "'('";
    case Token::RParen: return "')'";
    case Token::End: return "end of input";
  }
  return "?";
}

class Parser {
public:
  explicit Parser(const std::string& text) { tokenize(text); }

  FormulaRef run() {
    FormulaRef f = then_expr();
    expect(Token::End, "operator or end of input");
    return normalize(f);
  }

private:
  std::vector<Token> toks_;
  size_t pos_ = 0;

  void tokenize(const std::string& text) {
    int line = 1, col = 1;
    size_t i = 0;
    while (i < text.size()) {
      char c = text[i];
      if (c == '\n') { ++line; col = 1; ++i; continue; }
      if (std::isspace(static_cast<unsigned char>(c))) { ++col; ++i; continue; }
      Token t{Token::End, std::string(1, c), line, col};
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        size_t j = i;
        while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
        t.text = text.substr(i, j - i);
        if (t.text == "true") t.type = Token::KwTrue;
        else if (t.text == "false") t.type = Token::KwFalse;
        else if (t.text == "U") t.type = Token::Until;
        else if (t.text == "X") t.type = Token::Next;
        else if (t.text == "F") t.type = Token::Finally;
        else t.type = Token::Ident;
        col += static_cast<int>(j - i);
        i = j;
      } else {
        switch (c) {
          case '!': t.type = Token::Not; break;
          case '&': t.type = Token::AndOp; break;
          case '|': t.type = Token::OrOp; break;
          case ';': t.type = Token::ThenOp; break;
          case '(': t.type = Token::LParen; break;
          case ')': t.type = Token::RParen; break;
          default:
            throw ParseError("unexpected character '" + std::string(1, c) + "' at " +
                                 std::to_string(line) + ":" + std::to_string(col),
                             line, col);
        }
        ++col;
        ++i;
      }
      toks_.push_back(t);
    }
    toks_.push_back(Token{Token::End, "", line, col});
  }

  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }
  bool accept(Token::Type t) {
    if (peek().type == t) { ++pos_; return true; }
    return false;
  }
  void expect(Token::Type t, const std::string& expected) {
    if (!accept(t))
      throw ParseError("expected " + expected + " but found " + token_name(peek().type) +
                           " at " + std::to_string(peek().line) + ":" + std::to_string(peek().col),
                       peek().line, peek().col);
  }

  FormulaRef then_expr() {
    FormulaRef f = or_expr();
    while (accept(Token::ThenOp)) f = mk_then(f, or_expr());
    return f;
  }

  FormulaRef or_expr() {
    std::vector<FormulaRef> kids{and_expr()};
    while (accept(Token::OrOp)) kids.push_back(and_expr());
    return kids.size() == 1 ? kids[0] : mk_or(std::move(kids));
  }

  FormulaRef and_expr() {
    std::vector<FormulaRef> kids{until_expr()};
    while (accept(Token::AndOp)) kids.push_back(until_expr());
    return kids.size() == 1 ? kids[0] : mk_and(std::move(kids));
  }

  FormulaRef until_expr() {
    FormulaRef f = unary();
    if (accept(Token::Until)) return mk_until(f, until_expr());
    return f;
  }

  FormulaRef unary() {
    if (accept(Token::Not)) return mk_not(unary());
    if (accept(Token::Next)) return mk_next(unary());
    if (accept(Token::Finally)) return mk_eventually(unary());
    return atom();
  }

  FormulaRef atom() {
    const Token& t = peek();
    switch (t.type) {
      case Token::KwTrue: take(); return top();
      case Token::KwFalse: take(); return bot();
      case Token::Ident: return prop(take().text);
      case Token::LParen: {
        take();
        FormulaRef f = then_expr();
        expect(Token::RParen, "')'");
        return f;
      }
      default:
        throw ParseError(
            "expected one of 'true', 'false', identifier, '(', '!', 'X', 'F' but found " +
                std::string(token_name(t.type)) + " at " + std::to_string(t.line) + ":" +
                std::to_string(t.col),
            t.line, t.col);
    }
  }
};

}  // namespace

FormulaRef parse(const std::string& text) { return Parser(text).run(); }

}  // namespace sltlrm
