#pragma once

// The .dgm model format.
//
// Statements are separated by newlines or ';'; '#' starts a comment.
//
//   model NAME
//   dim N                          formal dimension
//   gen NAME... : DEG              one or more generators of one degree
//   d NAME = EXPR                  differential on a generator
//   bundle rn N | r21 [M] | e6     bundle shape (M odd, default 1)
//   fiber NAME...                  fiber names (rn: t; r21, e6: q t)
//   Theta|F|Fbar|H|F4|F7 = EXPR    structural forms
//   vector NAME : GEN = EXPR, ...  degree -1 base derivation
//   elem NAME = EXPR               named base element
//   sym NAME : DEG                 structured symmetry, parts set by
//   NAME.vec = VEC                 combination of named vectors
//   NAME.q|t|tq = EXPR
//
// Expressions: rational coefficients, products by juxtaposition or '*',
// powers with '^', parentheses. '^' is a power, never a wedge.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "random.hpp"

namespace dgcalc {

enum class ParseErrorKind { Syntax, UnknownGenerator, DegreeMismatch, NotSquareZero, MaurerCartan, Duplicate, Shape };

inline const char* to_string(ParseErrorKind k) {
  switch (k) {
    case ParseErrorKind::Syntax: return "syntax";
    case ParseErrorKind::UnknownGenerator: return "unknown-generator";
    case ParseErrorKind::DegreeMismatch: return "degree-mismatch";
    case ParseErrorKind::NotSquareZero: return "not-square-zero";
    case ParseErrorKind::MaurerCartan: return "maurer-cartan";
    case ParseErrorKind::Duplicate: return "duplicate";
    case ParseErrorKind::Shape: return "shape";
  }
  return "?";
}

class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, int line, int column, const std::string& message, std::string witness = {})
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
              dgcalc::to_string(kind) + ": " + message),
        kind_(kind),
        line_(line),
        column_(column),
        witness_(std::move(witness)) {}

  ParseErrorKind kind() const noexcept { return kind_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  /// Offending token, generator or residue.
  const std::string& witness() const noexcept { return witness_; }

 private:
  ParseErrorKind kind_;
  int line_, column_;
  std::string witness_;
};

namespace detail {

/// Maps byte offsets of the source to 1-based line/column.
class SourceMap {
 public:
  explicit SourceMap(std::string_view src) {
    starts_.push_back(0);
    for (std::size_t i = 0; i < src.size(); ++i)
      if (src[i] == '\n') starts_.push_back(i + 1);
  }
  std::pair<int, int> at(std::size_t off) const {
    auto it = std::upper_bound(starts_.begin(), starts_.end(), off);
    const std::size_t line = static_cast<std::size_t>(it - starts_.begin());
    return {static_cast<int>(line), static_cast<int>(off - starts_[line - 1] + 1)};
  }

 private:
  std::vector<std::size_t> starts_;
};

class Cursor {
 public:
  Cursor(std::string_view src, std::size_t begin, std::size_t end, const SourceMap& map)
      : src_(src), pos_(begin), end_(end), map_(&map) {}

  std::size_t pos() const noexcept { return pos_; }
  void skip_ws() {
    while (pos_ < end_ && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\r')) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= end_;
  }
  char peek() {
    skip_ws();
    return pos_ < end_ ? src_[pos_] : '\0';
  }
  bool eat(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!eat(c)) fail(ParseErrorKind::Syntax, std::string("expected '") + c + "'", rest_token());
  }
  bool ident_next() {
    const char c = peek();
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  bool digit_next() {
    const char c = peek();
    return c >= '0' && c <= '9';
  }
  std::string ident() {
    skip_ws();
    if (!ident_next()) fail(ParseErrorKind::Syntax, "expected a name", rest_token());
    const std::size_t b = pos_;
    while (pos_ < end_ && is_identifier(src_.substr(b, pos_ - b + 1))) ++pos_;
    return std::string(src_.substr(b, pos_ - b));
  }
  std::string nat_text() {
    skip_ws();
    if (!digit_next()) fail(ParseErrorKind::Syntax, "expected a number", rest_token());
    const std::size_t b = pos_;
    while (pos_ < end_ && src_[pos_] >= '0' && src_[pos_] <= '9') ++pos_;
    return std::string(src_.substr(b, pos_ - b));
  }
  long nat() {
    const std::size_t b = pos_;
    std::string s = nat_text();
    if (s.size() > 6) fail_at(b, ParseErrorKind::Syntax, "number too large", s);
    return std::stol(s);
  }
  long integer() {
    const bool neg = eat('-');
    long v = nat();
    return neg ? -v : v;
  }
  Rational rational() {
    Rational r(nat_text());
    if (eat('/')) {
      const std::size_t b = pos_;
      Rational den(nat_text());
      if (den == 0) fail_at(b, ParseErrorKind::Syntax, "zero denominator", "0");
      r /= den;
    }
    r.canonicalize();
    return r;
  }
  std::string rest_token() {
    skip_ws();
    std::size_t e = pos_;
    while (e < end_ && src_[e] != ' ' && src_[e] != '\t') ++e;
    return e == pos_ ? std::string("end of statement") : std::string(src_.substr(pos_, e - pos_));
  }
  std::string_view rest() {
    skip_ws();
    std::size_t e = end_;
    while (e > pos_ && (src_[e - 1] == ' ' || src_[e - 1] == '\t' || src_[e - 1] == '\r')) --e;
    return src_.substr(pos_, e - pos_);
  }
  void expect_end() {
    if (!at_end()) fail(ParseErrorKind::Syntax, "unexpected trailing input", rest_token());
  }

  [[noreturn]] void fail(ParseErrorKind k, const std::string& msg, std::string witness = {}) {
    skip_ws();
    fail_at(pos_, k, msg, std::move(witness));
  }
  [[noreturn]] void fail_at(std::size_t off, ParseErrorKind k, const std::string& msg,
                            std::string witness = {}) const {
    auto [l, c] = map_->at(off);
    throw ParseError(k, l, c, msg, std::move(witness));
  }

 private:
  std::string_view src_;
  std::size_t pos_, end_;
  const SourceMap* map_;
};

inline Element power(const Element& x, long p) {
  Element r(x.ambient(), 1);
  for (long i = 0; i < p; ++i) r = r * x;
  return r;
}

class ExprParser {
 public:
  ExprParser(Cursor& c, const AlgebraPtr& alg) : c_(c), alg_(alg) {}

  Element expr() {
    Element out(alg_);
    bool neg = false;
    if (c_.eat('-')) neg = true;
    else c_.eat('+');
    out += signed_term(neg);
    for (;;) {
      if (c_.eat('+')) out += signed_term(false);
      else if (c_.eat('-')) out += signed_term(true);
      else break;
    }
    return out;
  }

 private:
  Element signed_term(bool neg) {
    Element t = term();
    return neg ? -t : t;
  }

  bool atom_next() { return c_.ident_next() || c_.peek() == '('; }

  Element term() {
    Element out(alg_, 1);
    bool any = false;
    if (c_.digit_next()) {
      out *= c_.rational();
      any = true;
    }
    for (;;) {
      const bool star = c_.eat('*');
      if (!atom_next()) {
        if (star || !any) c_.fail(ParseErrorKind::Syntax, "expected a generator, number or '('", c_.rest_token());
        break;
      }
      out = out * atom();
      any = true;
    }
    return out;
  }

  Element atom() {
    Element base(alg_);
    if (c_.eat('(')) {
      base = expr();
      c_.expect(')');
    } else {
      const std::size_t at = (c_.skip_ws(), c_.pos());
      std::string name = c_.ident();
      auto i = alg_->find(name);
      if (!i) c_.fail_at(at, ParseErrorKind::UnknownGenerator, "unknown generator '" + name + "'", name);
      base = Element::generator(alg_, *i);
    }
    if (c_.eat('^')) return power(base, c_.nat());
    return base;
  }

  Cursor& c_;
  AlgebraPtr alg_;
};

}  // namespace detail

/// Parses a standalone expression over an algebra.
inline Element parse_expression(std::string_view text, const AlgebraPtr& alg) {
  detail::SourceMap map(text);
  detail::Cursor c(text, 0, text.size(), map);
  if (c.at_end()) c.fail(ParseErrorKind::Syntax, "empty expression");
  Element e = detail::ExprParser(c, alg).expr();
  c.expect_end();
  return e;
}

enum class BundleKind { None, Rn, R21, E6 };

struct SymSpec {
  std::string name;
  int degree = 0;
  std::vector<std::pair<Rational, std::string>> vec;  // combination of named vectors
  std::optional<Element> q, t, tq;
};

struct ParseOptions {
  /// When false, a failing Maurer-Cartan check is recorded instead of raised.
  bool require_mc = true;
};

class ModelFile {
 public:
  std::string name = "model";
  int dim = 0;
  std::vector<Generator> gens;
  std::vector<std::pair<std::string, Element>> diff;  // in declaration order
  BundleKind kind = BundleKind::None;
  int n = 0;  // rn fiber degree, or m for r21
  std::vector<std::string> fibers;
  std::vector<std::pair<std::string, Element>> forms;
  std::vector<std::pair<std::string, Derivation>> vectors;
  std::vector<std::pair<std::string, Element>> elements;
  std::vector<SymSpec> syms;

  const Model& base() const { return *base_; }
  bool has_bundle() const { return bundle_ != nullptr; }
  /// The bundle, or the base as a plain bundle.
  const DgBundle& bundle() const { return *bundle_or_plain_; }
  std::shared_ptr<const DgBundle> bundle_ptr() const { return bundle_or_plain_; }
  /// Result of the Maurer-Cartan check on the declared field.
  const McResult& mc() const { return mc_; }
  const std::optional<Derivation>& field() const { return field_; }

  const Element* element(std::string_view nm) const {
    for (const auto& [k, v] : elements)
      if (k == nm) return &v;
    return nullptr;
  }
  const Derivation* vector(std::string_view nm) const {
    for (const auto& [k, v] : vectors)
      if (k == nm) return &v;
    return nullptr;
  }
  const SymSpec* sym_spec(std::string_view nm) const {
    for (const auto& s : syms)
      if (s.name == nm) return &s;
    return nullptr;
  }

  SymElement sym(std::string_view nm) const {
    const SymSpec* s = sym_spec(nm);
    if (!s) throw Error("no symmetry named '" + std::string(nm) + "'");
    const auto& alg = base().algebra();
    Derivation v(alg, s->degree == 0 ? -1 : s->degree);
    for (const auto& [c, vn] : s->vec) v += c * *vector(vn);
    auto part = [&](const std::optional<Element>& e) { return e ? *e : Element(alg); };
    return SymElement(bundle(), s->degree, v, part(s->q), part(s->t), part(s->tq));
  }

  /// Declared vectors if any, otherwise contractions dual to degree 1 generators.
  Frame frame() const {
    if (vectors.empty()) return dual_frame(base());
    std::vector<Derivation> v;
    for (const auto& [k, d] : vectors) v.push_back(d);
    return Frame(base(), std::move(v));
  }

 private:
  friend ModelFile parse_model(std::string_view, const ParseOptions&);
  std::optional<Model> base_;
  std::shared_ptr<const DgBundle> bundle_;
  std::shared_ptr<const DgBundle> bundle_or_plain_;
  McResult mc_{true, {}, std::nullopt};
  std::optional<Derivation> field_;
};

namespace detail {

inline int form_degree(BundleKind k, int n, const std::string& form) {
  if (k == BundleKind::Rn && form == "Theta") return n + 1;
  if (k == BundleKind::R21 && (form == "F" || form == "Fbar")) return n + 1;
  if (k == BundleKind::R21 && form == "H") return 2 * n + 1;
  if (k == BundleKind::E6 && form == "F4") return 4;
  if (k == BundleKind::E6 && form == "F7") return 7;
  return 0;
}

inline bool is_form_name(const std::string& s) {
  return s == "Theta" || s == "F" || s == "Fbar" || s == "H" || s == "F4" || s == "F7";
}

inline std::vector<std::string> required_forms(BundleKind k) {
  switch (k) {
    case BundleKind::Rn: return {"Theta"};
    case BundleKind::R21: return {"F", "Fbar", "H"};
    case BundleKind::E6: return {"F4", "F7"};
    case BundleKind::None: break;
  }
  return {};
}

struct Statement {
  std::size_t begin, end;
};

inline std::vector<Statement> split_statements(std::string_view src) {
  std::vector<Statement> out;
  std::size_t b = 0;
  bool comment = false;
  for (std::size_t i = 0; i <= src.size(); ++i) {
    const char ch = i < src.size() ? src[i] : '\n';
    if (comment) {
      if (ch == '\n') comment = false, b = i + 1;
      continue;
    }
    if (ch == '#' || ch == ';' || ch == '\n') {
      if (src.substr(b, i - b).find_first_not_of(" \t\r") != std::string_view::npos) out.push_back({b, i});
      b = i + 1;
      if (ch == '#') comment = true;
    }
  }
  return out;
}

}  // namespace detail

/// Parses and validates a model file: d^2 = 0 and, for bundles, Q^2 = 0.
inline ModelFile parse_model(std::string_view src, const ParseOptions& opts = {}) {
  using detail::Cursor;
  using K = ParseErrorKind;
  detail::SourceMap map(src);
  ModelFile mf;
  AlgebraPtr alg;
  std::map<std::string, std::size_t> d_pos, form_pos;
  std::size_t bundle_pos = 0;
  bool saw_fiber = false;
  bool saw_dim = false;

  auto freeze = [&](Cursor& c, std::size_t at) {
    if (alg) return;
    if (mf.gens.empty()) c.fail_at(at, K::Syntax, "no generators declared before use");
    try {
      alg = make_algebra(mf.gens);
    } catch (const Error& e) {
      c.fail_at(at, K::Duplicate, e.what());
    }
  };
  auto build_base = [&](Cursor& c, std::size_t at) {
    freeze(c, at);
    if (mf.base_) return;
    std::map<std::string, Element> values(mf.diff.begin(), mf.diff.end());
    try {
      mf.base_.emplace(mf.name, alg, Derivation::from_map(alg, 1, values), mf.dim);
    } catch (const NotSquareZero& e) {
      c.fail_at(d_pos.count(e.generator()) ? d_pos[e.generator()] : at, K::NotSquareZero, e.what(),
                e.residue());
    }
  };

  std::vector<detail::Statement> stmts = detail::split_statements(src);
  for (const auto& st : stmts) {
    Cursor c(src, st.begin, st.end, map);
    c.skip_ws();
    const std::size_t at = c.pos();
    const std::string kw = c.ident();
    if (c.eat('.')) {
      SymSpec* s = nullptr;
      for (auto& x : mf.syms)
        if (x.name == kw) s = &x;
      if (!s) c.fail_at(at, K::UnknownGenerator, "no symmetry named '" + kw + "'", kw);
      const std::size_t part_at = c.pos();
      const std::string part = c.ident();
      c.expect('=');
      if (part == "vec") {
        s->vec.clear();
        bool first = true;
        while (!c.at_end()) {
          Rational sign = 1;
          if (c.eat('-')) sign = -1;
          else if (!c.eat('+') && !first) c.fail(K::Syntax, "expected '+' or '-'", c.rest_token());
          first = false;
          Rational coef = 1;
          if (c.digit_next()) coef = c.rational();
          if (coef == 0 && c.at_end()) break;
          c.eat('*');
          const std::size_t vat = (c.skip_ws(), c.pos());
          const std::string vn = c.ident();
          if (!mf.vector(vn)) c.fail_at(vat, K::UnknownGenerator, "no vector named '" + vn + "'", vn);
          s->vec.emplace_back(sign * coef, vn);
        }
        continue;
      }
      const int nq = mf.kind == BundleKind::Rn ? 0 : (mf.kind == BundleKind::E6 ? 3 : mf.n);
      const int nt = mf.kind == BundleKind::Rn ? mf.n : 2 * nq;
      int want = 0;
      std::optional<Element>* slot = nullptr;
      if (part == "t") want = nt + s->degree, slot = &s->t;
      else if (part == "q" && nq) want = nq + s->degree, slot = &s->q;
      else if (part == "tq" && nq) want = nq + s->degree, slot = &s->tq;
      else c.fail_at(part_at, K::Shape, "symmetry part '" + part + "' does not exist for this bundle", part);
      const std::size_t eat_at = (c.skip_ws(), c.pos());
      Element e = detail::ExprParser(c, mf.base().algebra()).expr();
      c.expect_end();
      if (!e.has_degree(want))
        c.fail_at(eat_at, K::DegreeMismatch,
                  kw + "." + part + " must have degree " + std::to_string(want) + ", got " + to_string(e),
                  to_string(e));
      *slot = std::move(e);
      continue;
    }
    if (kw == "model") {
      mf.name = c.ident();
      c.expect_end();
    } else if (kw == "dim") {
      mf.dim = static_cast<int>(c.nat());
      saw_dim = true;
      c.expect_end();
    } else if (kw == "gen") {
      if (alg) c.fail_at(at, K::Syntax, "generators must be declared before they are used");
      std::vector<std::pair<std::size_t, std::string>> names;
      while (c.ident_next()) {
        const std::size_t p = (c.skip_ws(), c.pos());
        names.emplace_back(p, c.ident());
        c.eat(',');
      }
      if (names.empty()) c.fail(K::Syntax, "expected a generator name", c.rest_token());
      c.expect(':');
      const std::size_t dat = (c.skip_ws(), c.pos());
      const long deg = c.integer();
      c.expect_end();
      if (deg <= 0) c.fail_at(dat, K::DegreeMismatch, "generator degrees must be positive", std::to_string(deg));
      for (const auto& [p, nm] : names) {
        for (const auto& g : mf.gens)
          if (g.name == nm) c.fail_at(p, K::Duplicate, "generator '" + nm + "' declared twice", nm);
        mf.gens.push_back({nm, static_cast<int>(deg)});
      }
    } else if (kw == "d") {
      freeze(c, at);
      if (mf.base_) c.fail_at(at, K::Syntax, "differential assignments must precede bundle data");
      const std::size_t gat = (c.skip_ws(), c.pos());
      const std::string g = c.ident();
      auto i = alg->find(g);
      if (!i) c.fail_at(gat, K::UnknownGenerator, "unknown generator '" + g + "'", g);
      if (d_pos.count(g)) c.fail_at(gat, K::Duplicate, "d " + g + " assigned twice", g);
      c.expect('=');
      const std::size_t eat_at = (c.skip_ws(), c.pos());
      Element e = detail::ExprParser(c, alg).expr();
      c.expect_end();
      const int want = (*alg)[*i].degree + 1;
      if (!e.has_degree(want))
        c.fail_at(eat_at, K::DegreeMismatch,
                  "d " + g + " must have degree " + std::to_string(want) + ", got " + to_string(e),
                  to_string(e));
      d_pos[g] = gat;
      mf.diff.emplace_back(g, std::move(e));
    } else if (kw == "bundle") {
      build_base(c, at);
      if (mf.kind != BundleKind::None) c.fail_at(at, K::Duplicate, "bundle declared twice");
      bundle_pos = at;
      const std::size_t kat = (c.skip_ws(), c.pos());
      const std::string k = c.ident();
      if (k == "rn") {
        mf.kind = BundleKind::Rn;
        const std::size_t nat = (c.skip_ws(), c.pos());
        mf.n = static_cast<int>(c.nat());
        if (mf.n <= 0) c.fail_at(nat, K::DegreeMismatch, "fiber degree must be positive");
        mf.fibers = {"t"};
      } else if (k == "r21") {
        mf.kind = BundleKind::R21;
        mf.n = 1;
        if (c.digit_next()) {
          const std::size_t nat = (c.skip_ws(), c.pos());
          mf.n = static_cast<int>(c.nat());
          if (mf.n % 2 == 0) c.fail_at(nat, K::DegreeMismatch, "q must have odd degree");
        }
        mf.fibers = {"q", "t"};
      } else if (k == "e6") {
        mf.kind = BundleKind::E6;
        mf.n = 3;
        mf.fibers = {"q", "t"};
      } else {
        c.fail_at(kat, K::Syntax, "bundle shape must be rn, r21 or e6", k);
      }
      c.expect_end();
    } else if (kw == "fiber") {
      if (mf.kind == BundleKind::None) c.fail_at(at, K::Shape, "fiber before bundle");
      if (saw_fiber) c.fail_at(at, K::Duplicate, "fiber declared twice");
      saw_fiber = true;
      std::vector<std::string> f;
      while (c.ident_next()) f.push_back(c.ident());
      c.expect_end();
      if (f.size() != mf.fibers.size())
        c.fail_at(at, K::Shape, "expected " + std::to_string(mf.fibers.size()) + " fiber names");
      for (const auto& nm : f)
        if (alg->find(nm)) c.fail_at(at, K::Duplicate, "fiber name '" + nm + "' clashes with a generator", nm);
      mf.fibers = std::move(f);
    } else if (detail::is_form_name(kw) && c.peek() == '=') {
      c.expect('=');
      if (mf.kind == BundleKind::None) c.fail_at(at, K::Shape, "structural form before bundle", kw);
      const int want = detail::form_degree(mf.kind, mf.n, kw);
      if (want == 0) c.fail_at(at, K::Shape, "form '" + kw + "' does not belong to this bundle shape", kw);
      if (form_pos.count(kw)) c.fail_at(at, K::Duplicate, "form '" + kw + "' assigned twice", kw);
      const std::size_t eat_at = (c.skip_ws(), c.pos());
      Element e = detail::ExprParser(c, mf.base().algebra()).expr();
      c.expect_end();
      if (!e.has_degree(want))
        c.fail_at(eat_at, K::DegreeMismatch,
                  kw + " must have degree " + std::to_string(want) + ", got " + to_string(e), to_string(e));
      form_pos[kw] = at;
      mf.forms.emplace_back(kw, std::move(e));
    } else if (kw == "vector") {
      build_base(c, at);
      const std::string nm = c.ident();
      if (mf.vector(nm)) c.fail_at(at, K::Duplicate, "vector '" + nm + "' declared twice", nm);
      c.expect(':');
      const auto& balg = mf.base().algebra();
      Derivation v(balg, -1);
      while (!c.at_end()) {
        const std::size_t gat = (c.skip_ws(), c.pos());
        const std::string g = c.ident();
        auto i = balg->find(g);
        if (!i) c.fail_at(gat, K::UnknownGenerator, "unknown generator '" + g + "'", g);
        c.expect('=');
        const std::size_t eat_at = (c.skip_ws(), c.pos());
        Element e = detail::ExprParser(c, balg).expr();
        const int want = (*balg)[*i].degree - 1;
        if (!e.has_degree(want))
          c.fail_at(eat_at, K::DegreeMismatch,
                    "vector value on " + g + " must have degree " + std::to_string(want), to_string(e));
        v.set(*i, std::move(e));
        if (!c.eat(',')) break;
      }
      c.expect_end();
      mf.vectors.emplace_back(nm, std::move(v));
    } else if (kw == "elem") {
      build_base(c, at);
      const std::string nm = c.ident();
      if (mf.element(nm)) c.fail_at(at, K::Duplicate, "element '" + nm + "' declared twice", nm);
      c.expect('=');
      Element e = detail::ExprParser(c, mf.base().algebra()).expr();
      c.expect_end();
      mf.elements.emplace_back(nm, std::move(e));
    } else if (kw == "sym") {
      build_base(c, at);
      if (mf.kind == BundleKind::None) c.fail_at(at, K::Shape, "sym needs a bundle");
      const std::string nm = c.ident();
      if (mf.sym_spec(nm)) c.fail_at(at, K::Duplicate, "symmetry '" + nm + "' declared twice", nm);
      c.expect(':');
      const std::size_t dat = (c.skip_ws(), c.pos());
      const long deg = c.integer();
      c.expect_end();
      if (deg > 0) c.fail_at(dat, K::DegreeMismatch, "symmetries have degree <= 0", std::to_string(deg));
      mf.syms.push_back(SymSpec{nm, static_cast<int>(deg), {}, {}, {}, {}});
    } else {
      c.fail_at(at, K::Syntax, "unknown statement '" + kw + "'", kw);
    }
  }

  Cursor end(src, src.size(), src.size(), map);
  if (!saw_dim) {
    // Elliptic formal dimension: sum of odd degrees minus sum of (even degree - 1).
    int fd = 0;
    for (const auto& g : mf.gens) fd += g.odd() ? g.degree : 1 - g.degree;
    mf.dim = std::max(fd, 0);
  }
  build_base(end, src.size());

  std::shared_ptr<const DgBundle> plain;
  if (mf.kind != BundleKind::None) {
    auto get = [&](const std::string& f) -> Element {
      for (const auto& [k, v] : mf.forms)
        if (k == f) return v;
      end.fail_at(bundle_pos, K::Shape, "bundle is missing form '" + f + "'", f);
    };
    for (const auto& f : mf.forms) {
      const auto req = detail::required_forms(mf.kind);
      if (std::find(req.begin(), req.end(), f.first) == req.end())
        end.fail_at(form_pos[f.first], K::Shape, "form '" + f.first + "' does not belong to this bundle", f.first);
    }
    const Model& base = mf.base();
    AlgebraPtr talg;
    Derivation field(base.algebra(), 1);
    if (mf.kind == BundleKind::Rn) {
      talg = rn_algebra(base, mf.n, mf.fibers[0]);
      field = rn_field(base, talg, get("Theta"), mf.fibers[0]);
    } else {
      const int m = mf.n;
      const Element f = mf.kind == BundleKind::E6 ? get("F4") : get("F");
      const Element fbar = mf.kind == BundleKind::E6 ? f * Rational(1, 2) : get("Fbar");
      const Element h = mf.kind == BundleKind::E6 ? get("F7") : get("H");
      talg = two_stage_algebra(base, m, mf.fibers[0], mf.fibers[1]);
      field = two_stage_field(base, talg, f, fbar, h, mf.fibers[0], mf.fibers[1]);
    }
    mf.field_ = field;
    mf.mc_ = maurer_cartan_check(field);
    if (!mf.mc_) {
      if (opts.require_mc)
        end.fail_at(bundle_pos, K::MaurerCartan,
                    "Q^2 != 0 on '" + mf.mc_.generator + "': " + to_string(*mf.mc_.residue), mf.mc_.generator);
    } else if (mf.kind == BundleKind::Rn) {
      mf.bundle_ = std::make_shared<DgBundle>(rn_bundle(base, mf.n, get("Theta"), mf.fibers[0]));
    } else if (mf.kind == BundleKind::R21) {
      mf.bundle_ = std::make_shared<DgBundle>(
          two_stage(base, get("F"), get("Fbar"), get("H"), mf.n, mf.fibers[0], mf.fibers[1]));
    } else {
      mf.bundle_ = std::make_shared<DgBundle>(e6_bundle(base, get("F4"), get("F7"), mf.fibers[0], mf.fibers[1]));
    }
  }
  mf.bundle_or_plain_ = mf.bundle_ ? mf.bundle_ : std::make_shared<DgBundle>(plain_bundle(mf.base()));
  return mf;
}

inline std::string print_element_statement(const std::string& lhs, const Element& e) {
  return lhs + " = " + to_string(e) + "\n";
}

/// Canonical text of a model file; parse(print(m)) reproduces m.
inline std::string print_model(const ModelFile& mf) {
  std::string s = "model " + mf.name + "\ndim " + std::to_string(mf.dim) + "\n";
  for (const auto& g : mf.gens) s += "gen " + g.name + " : " + std::to_string(g.degree) + "\n";
  for (const auto& g : mf.gens) {
    const Element& v = mf.base().differential().value(g.name);
    if (!v.is_zero()) s += print_element_statement("d " + g.name, v);
  }
  if (mf.kind != BundleKind::None) {
    if (mf.kind == BundleKind::Rn) s += "bundle rn " + std::to_string(mf.n) + "\n";
    else if (mf.kind == BundleKind::R21) s += mf.n == 1 ? "bundle r21\n" : "bundle r21 " + std::to_string(mf.n) + "\n";
    else s += "bundle e6\n";
    s += "fiber";
    for (const auto& f : mf.fibers) s += " " + f;
    s += "\n";
    for (const auto& name : detail::required_forms(mf.kind))
      for (const auto& [k, v] : mf.forms)
        if (k == name) s += print_element_statement(k, v);
  }
  for (const auto& [nm, v] : mf.vectors) {
    s += "vector " + nm + " :";
    bool first = true;
    for (std::size_t i = 0; i < v.algebra().size(); ++i) {
      if (v.value(i).is_zero()) continue;
      s += (first ? " " : ", ") + v.algebra()[i].name + " = " + to_string(v.value(i));
      first = false;
    }
    s += "\n";
  }
  for (const auto& [nm, e] : mf.elements) s += print_element_statement("elem " + nm, e);
  for (const auto& sp : mf.syms) {
    s += "sym " + sp.name + " : " + std::to_string(sp.degree) + "\n";
    if (!sp.vec.empty()) {
      s += sp.name + ".vec =";
      bool first = true;
      for (const auto& [c, vn] : sp.vec) {
        Rational mag = abs(c);
        s += first ? (c < 0 ? " -" : " ") : (c < 0 ? " - " : " + ");
        if (mag != 1) s += mag.get_str() + " ";
        s += vn;
        first = false;
      }
      s += "\n";
    }
    if (sp.q) s += print_element_statement(sp.name + ".q", *sp.q);
    if (sp.t) s += print_element_statement(sp.name + ".t", *sp.t);
    if (sp.tq) s += print_element_statement(sp.name + ".tq", *sp.tq);
  }
  return s;
}

/// Model-file text for a two-stage or R[n] bundle (used to emit T-duals).
inline std::string print_bundle(const std::string& name, const DgBundle& b) {
  const Model& base = b.base();
  std::string s = "model " + name + "\ndim " + std::to_string(b.formal_dimension()) + "\n";
  for (const auto& g : base.algebra()->generators()) s += "gen " + g.name + " : " + std::to_string(g.degree) + "\n";
  for (const auto& g : base.algebra()->generators()) {
    const Element& v = base.differential().value(g.name);
    if (!v.is_zero()) s += print_element_statement("d " + g.name, v);
  }
  if (b.shape() == Shape::Rn) {
    s += "bundle rn " + std::to_string(b.n()) + "\nfiber " + b.fiber(0) + "\n";
    s += print_element_statement("Theta", b.form("Theta"));
  } else if (b.shape() == Shape::TwoStage) {
    s += (b.n() == 1 ? std::string("bundle r21") : "bundle r21 " + std::to_string(b.n())) + "\nfiber " +
         b.fiber(0) + " " + b.fiber(1) + "\n";
    for (const char* f : {"F", "Fbar", "H"}) s += print_element_statement(f, b.form(f));
  } else if (b.shape() != Shape::Plain) {
    throw ShapeMismatch("cannot print correspondence bundles");
  }
  return s;
}

}  // namespace dgcalc
