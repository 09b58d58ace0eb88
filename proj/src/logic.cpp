#include "recmc/logic.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace recmc {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NegatedCall: return "NegatedCall";
    case ErrorKind::PathExplosion: return "PathExplosion";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::WrongMode: return "WrongMode";
    case ErrorKind::ModelMismatch: return "ModelMismatch";
    case ErrorKind::UnassignedVar: return "UnassignedVar";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::NotUnsat: return "NotUnsat";
    case ErrorKind::ResourceLimit: return "ResourceLimit";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::ProvenanceGap: return "ProvenanceGap";
    case ErrorKind::Internal: return "Internal";
    case ErrorKind::Io: return "Io";
  }
  return "Error";
}

bool parse_rational(const std::string& text, Rational& out) {
  if (text.empty()) return false;
  std::size_t i = 0;
  bool neg = false;
  if (text[0] == '-' || text[0] == '+') {
    neg = text[0] == '-';
    i = 1;
  }
  if (i >= text.size()) return false;
  auto digits = [&](std::size_t from, std::size_t to) {
    if (from >= to) return false;
    for (std::size_t k = from; k < to; ++k)
      if (!std::isdigit(static_cast<unsigned char>(text[k]))) return false;
    return true;
  };
  std::string body = text.substr(i);
  auto slash = body.find('/');
  auto dot = body.find('.');
  Rational r;
  if (slash != std::string::npos) {
    if (!digits(i, i + slash) || !digits(i + slash + 1, text.size())) return false;
    Integer num(body.substr(0, slash)), den(body.substr(slash + 1));
    if (den == 0) return false;
    r = Rational(num, den);
  } else if (dot != std::string::npos) {
    std::string ip = body.substr(0, dot), fp = body.substr(dot + 1);
    if (ip.empty()) ip = "0";
    for (char c : ip + fp)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    if (fp.empty()) return false;
    Integer num(ip + fp);
    Integer den(1);
    for (std::size_t k = 0; k < fp.size(); ++k) den *= 10;
    r = Rational(num, den);
  } else {
    if (!digits(i, text.size())) return false;
    r = Rational(Integer(body));
  }
  r.canonicalize();
  out = neg ? Rational(-r) : r;
  return true;
}

const char* sort_name(Sort s) {
  switch (s) {
    case Sort::Bool: return "bool";
    case Sort::Rat: return "rat";
    case Sort::Int: return "int";
  }
  return "?";
}

// ---- Model -------------------------------------------------------------------

const Value& Model::value(const Var& v) const {
  auto it = values_.find(v.name);
  if (it == values_.end()) throw Error(ErrorKind::UnassignedVar, v.name);
  return it->second;
}

bool Model::get_bool(const Var& v) const {
  const Value& val = value(v);
  if (auto* b = std::get_if<bool>(&val)) return *b;
  throw Error(ErrorKind::ModelMismatch, "expected boolean value for " + v.name);
}

const Rational& Model::get_num(const Var& v) const {
  const Value& val = value(v);
  if (auto* r = std::get_if<Rational>(&val)) return *r;
  throw Error(ErrorKind::ModelMismatch, "expected numeric value for " + v.name);
}

std::string value_to_string(const Value& v) {
  if (auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  return std::get<Rational>(v).get_str();
}

// ---- LinTerm -------------------------------------------------------------------

LinTerm LinTerm::constant(const Rational& c) {
  LinTerm t;
  t.constant_ = c;
  return t;
}

LinTerm LinTerm::variable(const Var& v, const Rational& coeff) {
  LinTerm t;
  if (coeff != 0) t.coeffs_.emplace_back(v, coeff);
  return t;
}

Rational LinTerm::coeff(const Var& v) const {
  auto it = std::lower_bound(coeffs_.begin(), coeffs_.end(), v,
                             [](const Entry& e, const Var& x) { return e.first < x; });
  if (it != coeffs_.end() && it->first == v) return it->second;
  return 0;
}

bool LinTerm::mentions(const Var& v) const { return coeff(v) != 0; }

LinTerm LinTerm::operator+(const LinTerm& o) const {
  LinTerm r;
  r.constant_ = constant_ + o.constant_;
  r.coeffs_.reserve(coeffs_.size() + o.coeffs_.size());
  auto a = coeffs_.begin(), b = o.coeffs_.begin();
  while (a != coeffs_.end() || b != o.coeffs_.end()) {
    if (b == o.coeffs_.end() || (a != coeffs_.end() && a->first < b->first)) {
      r.coeffs_.push_back(*a++);
    } else if (a == coeffs_.end() || b->first < a->first) {
      r.coeffs_.push_back(*b++);
    } else {
      Rational c = a->second + b->second;
      if (c != 0) r.coeffs_.emplace_back(a->first, c);
      ++a;
      ++b;
    }
  }
  return r;
}

LinTerm LinTerm::operator-(const LinTerm& o) const { return *this + (o * Rational(-1)); }

LinTerm LinTerm::operator*(const Rational& k) const {
  LinTerm r;
  if (k == 0) return r;
  r.constant_ = constant_ * k;
  r.coeffs_.reserve(coeffs_.size());
  for (const auto& [v, c] : coeffs_) r.coeffs_.emplace_back(v, c * k);
  return r;
}

LinTerm& LinTerm::add_constant(const Rational& k) {
  constant_ += k;
  return *this;
}

LinTerm LinTerm::without(const Var& v) const {
  LinTerm r;
  r.constant_ = constant_;
  for (const auto& e : coeffs_)
    if (e.first != v) r.coeffs_.push_back(e);
  return r;
}

LinTerm LinTerm::substitute(const Var& x, const LinTerm& t) const {
  Rational c = coeff(x);
  if (c == 0) return *this;
  return without(x) + t * c;
}

LinTerm LinTerm::rename(const std::map<std::string, Var>& m) const {
  LinTerm r = LinTerm::constant(constant_);
  for (const auto& [v, c] : coeffs_) {
    auto it = m.find(v.name);
    r = r + LinTerm::variable(it == m.end() ? v : it->second, c);
  }
  return r;
}

Rational LinTerm::evaluate(const Model& m) const {
  Rational r = constant_;
  for (const auto& [v, c] : coeffs_) r += c * m.get_num(v);
  return r;
}

std::string LinTerm::key() const {
  std::string s;
  for (const auto& [v, c] : coeffs_) {
    s += c.get_str();
    s += '*';
    s += v.name;
    s += '+';
  }
  s += constant_.get_str();
  return s;
}

bool term_less(const LinTerm& a, const LinTerm& b) { return a.key() < b.key(); }

// ---- Literal -------------------------------------------------------------------

namespace {

std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_str(const std::string& s) { return std::hash<std::string>{}(s); }

// Scales t by a positive factor so that all coefficients and the constant are
// coprime integers.
LinTerm make_primitive(const LinTerm& t) {
  Integer den_lcm = t.constant_part().get_den();
  for (const auto& e : t.coeffs()) den_lcm = lcm_of(den_lcm, e.second.get_den());
  LinTerm s = t * Rational(den_lcm);
  Integer g = abs(s.constant_part().get_num());
  for (const auto& e : s.coeffs()) g = gcd_of(g, abs(e.second.get_num()));
  if (g > 1) s = s * Rational(1, g);
  return s;
}

}  // namespace

bool Literal::mentions(const Var& v) const {
  if (kind_ == Kind::Bool) return var_ == v;
  return term_.mentions(v);
}

std::string Literal::key() const {
  switch (kind_) {
    case Kind::Bool: return std::string(positive_ ? "b:" : "!b:") + var_.name;
    case Kind::Divides:
      return std::string(positive_ ? "d:" : "!d:") + divisor_.get_str() + "|" + term_.key();
    case Kind::Arith: {
      const char* op = cmp_ == Cmp::Lt ? "<:" : cmp_ == Cmp::Le ? "<=:" : "=:";
      return op + term_.key();
    }
  }
  return "";
}

std::size_t Literal::hash() const { return hash_str(key()); }

bool operator==(const Literal& a, const Literal& b) {
  if (a.kind_ != b.kind_ || a.positive_ != b.positive_) return false;
  switch (a.kind_) {
    case Literal::Kind::Bool: return a.var_ == b.var_;
    case Literal::Kind::Divides: return a.divisor_ == b.divisor_ && a.term_ == b.term_;
    case Literal::Kind::Arith: return a.cmp_ == b.cmp_ && a.term_ == b.term_;
  }
  return false;
}

Formula mk_cmp(Cmp op, const LinTerm& t) {
  if (t.is_constant()) {
    const Rational& c = t.constant_part();
    bool v = op == Cmp::Lt ? c < 0 : op == Cmp::Le ? c <= 0 : c == 0;
    return v ? Formula::top() : Formula::bottom();
  }
  LinTerm s = make_primitive(t);
  if (op == Cmp::Eq && s.coeffs().front().second < 0) s = -s;
  Literal l;
  l.kind_ = Literal::Kind::Arith;
  l.cmp_ = op;
  l.term_ = std::move(s);
  return Formula::literal(l);
}

Formula mk_cmp(Cmp op, const LinTerm& lhs, const LinTerm& rhs) { return mk_cmp(op, lhs - rhs); }

Formula mk_divides(const Integer& d_in, const LinTerm& t, bool positive) {
  if (d_in <= 0) throw Error(ErrorKind::ValidationError, "divisor must be positive");
  for (const auto& e : t.coeffs())
    if (!is_integral(e.second))
      throw Error(ErrorKind::ValidationError, "divisibility over non-integral term");
  if (!is_integral(t.constant_part()))
    throw Error(ErrorKind::ValidationError, "divisibility over non-integral term");
  Integer d = d_in;
  // reduce coefficients modulo d
  LinTerm r = LinTerm::constant(Rational(mod_floor(t.constant_part().get_num(), d)));
  for (const auto& [v, c] : t.coeffs()) {
    Integer m = mod_floor(c.get_num(), d);
    if (m != 0) r = r + LinTerm::variable(v, Rational(m));
  }
  Integer g = d;
  g = gcd_of(g, r.constant_part().get_num());
  for (const auto& e : r.coeffs()) g = gcd_of(g, e.second.get_num());
  if (g > 1) {
    d /= g;
    r = r * Rational(1, g);
  }
  if (d == 1) return positive ? Formula::top() : Formula::bottom();
  if (r.is_constant()) {
    bool holds = r.constant_part() == 0;
    return holds == positive ? Formula::top() : Formula::bottom();
  }
  Literal l;
  l.kind_ = Literal::Kind::Divides;
  l.divisor_ = d;
  l.term_ = std::move(r);
  l.positive_ = positive;
  return Formula::literal(l);
}

Formula mk_bool(const Var& v, bool positive) {
  Literal l;
  l.kind_ = Literal::Kind::Bool;
  l.var_ = v;
  l.positive_ = positive;
  return Formula::literal(l);
}

// ---- Formula -------------------------------------------------------------------

struct Formula::Node {
  FKind kind = FKind::True;
  Literal lit;
  std::vector<Formula> kids;
  CallAtom call;
  std::size_t hash = 0;
};

Formula::Formula() : Formula(top()) {}

Formula Formula::top() {
  static const std::shared_ptr<const Node> node = [] {
    auto n = std::make_shared<Node>();
    n->kind = FKind::True;
    n->hash = 1;
    return n;
  }();
  return Formula(node);
}

Formula Formula::bottom() {
  static const std::shared_ptr<const Node> node = [] {
    auto n = std::make_shared<Node>();
    n->kind = FKind::False;
    n->hash = 2;
    return n;
  }();
  return Formula(node);
}

Formula Formula::literal(const Literal& l) {
  auto n = std::make_shared<Node>();
  n->kind = FKind::Lit;
  n->lit = l;
  n->hash = hash_combine(3, l.hash());
  return Formula(std::shared_ptr<const Node>(std::move(n)));
}

Formula Formula::call(CallAtom c) {
  auto n = std::make_shared<Node>();
  n->kind = FKind::Call;
  std::size_t h = hash_combine(4, hash_str(c.callee));
  for (const auto& a : c.args) h = hash_combine(h, hash_str(a.name));
  n->call = std::move(c);
  n->hash = h;
  return Formula(std::shared_ptr<const Node>(std::move(n)));
}

Formula Formula::make_nary(FKind kind, const std::vector<Formula>& children) {
  const FKind unit = kind == FKind::And ? FKind::True : FKind::False;
  const FKind zero = kind == FKind::And ? FKind::False : FKind::True;
  std::vector<Formula> flat;
  flat.reserve(children.size());
  auto push = [&](const Formula& c) {
    for (const auto& f : flat)
      if (f == c) return;
    flat.push_back(c);
  };
  for (const auto& c : children) {
    if (c.kind() == unit) continue;
    if (c.kind() == zero) return kind == FKind::And ? bottom() : top();
    if (c.kind() == kind) {
      for (const auto& g : c.children()) push(g);
    } else {
      push(c);
    }
  }
  if (flat.empty()) return kind == FKind::And ? top() : bottom();
  if (flat.size() == 1) return flat.front();
  auto n = std::make_shared<Node>();
  n->kind = kind;
  std::size_t h = kind == FKind::And ? 5 : 6;
  for (const auto& f : flat) h = hash_combine(h, f.hash());
  n->hash = h;
  n->kids = std::move(flat);
  return Formula(std::shared_ptr<const Node>(std::move(n)));
}

Formula Formula::conj(const std::vector<Formula>& children) { return make_nary(FKind::And, children); }
Formula Formula::disj(const std::vector<Formula>& children) { return make_nary(FKind::Or, children); }

FKind Formula::kind() const { return n_->kind; }
const Literal& Formula::lit() const { return n_->lit; }
const std::vector<Formula>& Formula::children() const { return n_->kids; }
const CallAtom& Formula::call_atom() const { return n_->call; }
std::size_t Formula::hash() const { return n_->hash; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.n_ == b.n_) return true;
  if (a.n_->hash != b.n_->hash || a.n_->kind != b.n_->kind) return false;
  switch (a.n_->kind) {
    case FKind::True:
    case FKind::False: return true;
    case FKind::Lit: return a.n_->lit == b.n_->lit;
    case FKind::Call: return a.n_->call == b.n_->call;
    case FKind::And:
    case FKind::Or: return a.n_->kids == b.n_->kids;
  }
  return false;
}

// ---- negation / NNF --------------------------------------------------------------

Formula negate(const Literal& l) {
  switch (l.kind()) {
    case Literal::Kind::Bool: return mk_bool(l.var(), !l.positive());
    case Literal::Kind::Divides: return mk_divides(l.divisor(), l.term(), !l.positive());
    case Literal::Kind::Arith:
      switch (l.cmp()) {
        case Cmp::Lt: return mk_cmp(Cmp::Le, -l.term());
        case Cmp::Le: return mk_cmp(Cmp::Lt, -l.term());
        case Cmp::Eq: return mk_cmp(Cmp::Lt, l.term()) || mk_cmp(Cmp::Lt, -l.term());
      }
  }
  return Formula::top();
}

Formula negate(const Formula& f) {
  switch (f.kind()) {
    case FKind::True: return Formula::bottom();
    case FKind::False: return Formula::top();
    case FKind::Lit: return negate(f.lit());
    case FKind::Call:
      throw Error(ErrorKind::NegatedCall, "call to " + f.call_atom().callee + " under negation");
    case FKind::And:
    case FKind::Or: {
      std::vector<Formula> kids;
      kids.reserve(f.children().size());
      for (const auto& c : f.children()) kids.push_back(negate(c));
      return f.kind() == FKind::And ? Formula::disj(kids) : Formula::conj(kids);
    }
  }
  return f;
}

Formula to_nnf(const RawFormula& f) {
  switch (f.kind) {
    case RawFormula::Kind::Form: return f.leaf;
    case RawFormula::Kind::Not: return negate(to_nnf(f.kids.front()));
    case RawFormula::Kind::And:
    case RawFormula::Kind::Or: {
      std::vector<Formula> kids;
      for (const auto& k : f.kids) kids.push_back(to_nnf(k));
      return f.kind == RawFormula::Kind::And ? Formula::conj(kids) : Formula::disj(kids);
    }
  }
  return f.leaf;
}

// ---- traversal ------------------------------------------------------------------

namespace {

void collect_vars(const Formula& f, VarSet& out) {
  switch (f.kind()) {
    case FKind::True:
    case FKind::False: return;
    case FKind::Lit: {
      const Literal& l = f.lit();
      if (l.kind() == Literal::Kind::Bool) {
        out.insert(l.var());
      } else {
        for (const auto& e : l.term().coeffs()) out.insert(e.first);
      }
      return;
    }
    case FKind::Call:
      for (const auto& a : f.call_atom().args) out.insert(a);
      return;
    case FKind::And:
    case FKind::Or:
      for (const auto& c : f.children()) collect_vars(c, out);
      return;
  }
}

}  // namespace

VarSet free_vars(const Formula& f) {
  VarSet s;
  collect_vars(f, s);
  return s;
}

bool has_calls(const Formula& f) {
  switch (f.kind()) {
    case FKind::Call: return true;
    case FKind::And:
    case FKind::Or:
      for (const auto& c : f.children())
        if (has_calls(c)) return true;
      return false;
    default: return false;
  }
}

bool mentions(const Formula& f, const Var& v) {
  switch (f.kind()) {
    case FKind::True:
    case FKind::False: return false;
    case FKind::Lit: return f.lit().mentions(v);
    case FKind::Call:
      for (const auto& a : f.call_atom().args)
        if (a == v) return true;
      return false;
    case FKind::And:
    case FKind::Or:
      for (const auto& c : f.children())
        if (mentions(c, v)) return true;
      return false;
  }
  return false;
}

std::size_t formula_size(const Formula& f) {
  std::size_t n = 1;
  for (const auto& c : f.children()) n += formula_size(c);
  return n;
}

void collect_literals(const Formula& f, std::vector<Literal>& out) {
  if (f.kind() == FKind::Lit) {
    for (const auto& l : out)
      if (l == f.lit()) return;
    out.push_back(f.lit());
    return;
  }
  for (const auto& c : f.children()) collect_literals(c, out);
}

Formula map_literals(const Formula& f, const std::function<Formula(const Literal&)>& fn) {
  switch (f.kind()) {
    case FKind::True:
    case FKind::False:
    case FKind::Call: return f;
    case FKind::Lit: return fn(f.lit());
    case FKind::And:
    case FKind::Or: {
      std::vector<Formula> kids;
      kids.reserve(f.children().size());
      bool changed = false;
      for (const auto& c : f.children()) {
        kids.push_back(map_literals(c, fn));
        changed = changed || !(kids.back() == c);
      }
      if (!changed) return f;
      return f.kind() == FKind::And ? Formula::conj(kids) : Formula::disj(kids);
    }
  }
  return f;
}

namespace {

Formula rebuild_literal(const Literal& l, const LinTerm& t) {
  switch (l.kind()) {
    case Literal::Kind::Arith: return mk_cmp(l.cmp(), t);
    case Literal::Kind::Divides: return mk_divides(l.divisor(), t, l.positive());
    case Literal::Kind::Bool: break;
  }
  return Formula::literal(l);
}

}  // namespace

Formula substitute(const Formula& f, const Var& x, const LinTerm& t) {
  return map_literals(f, [&](const Literal& l) {
    if (l.kind() == Literal::Kind::Bool || !l.term().mentions(x)) return Formula::literal(l);
    return rebuild_literal(l, l.term().substitute(x, t));
  });
}

Formula substitute_bool(const Formula& f, const Var& p, bool value) {
  return map_literals(f, [&](const Literal& l) {
    if (l.kind() == Literal::Kind::Bool && l.var() == p)
      return l.positive() == value ? Formula::top() : Formula::bottom();
    return Formula::literal(l);
  });
}

Literal rename(const Literal& l, const std::map<std::string, Var>& m) {
  Formula f = rename(Formula::literal(l), m);
  RECMC_CHECK(f.kind() == FKind::Lit, "renaming folded a literal");
  return f.lit();
}

Formula rename(const Formula& f, const std::map<std::string, Var>& m) {
  switch (f.kind()) {
    case FKind::True:
    case FKind::False: return f;
    case FKind::Lit: {
      const Literal& l = f.lit();
      if (l.kind() == Literal::Kind::Bool) {
        auto it = m.find(l.var().name);
        return it == m.end() ? f : mk_bool(it->second, l.positive());
      }
      return rebuild_literal(l, l.term().rename(m));
    }
    case FKind::Call: {
      CallAtom c = f.call_atom();
      for (auto& a : c.args) {
        auto it = m.find(a.name);
        if (it != m.end()) a = it->second;
      }
      return Formula::call(std::move(c));
    }
    case FKind::And:
    case FKind::Or: {
      std::vector<Formula> kids;
      for (const auto& c : f.children()) kids.push_back(rename(c, m));
      return f.kind() == FKind::And ? Formula::conj(kids) : Formula::disj(kids);
    }
  }
  return f;
}

// ---- evaluation ------------------------------------------------------------------

bool eval(const Literal& l, const Model& m) {
  switch (l.kind()) {
    case Literal::Kind::Bool: return m.get_bool(l.var()) == l.positive();
    case Literal::Kind::Divides: {
      Rational v = l.term().evaluate(m);
      bool holds = is_integral(v) && mod_floor(v.get_num(), l.divisor()) == 0;
      return holds == l.positive();
    }
    case Literal::Kind::Arith: {
      Rational v = l.term().evaluate(m);
      switch (l.cmp()) {
        case Cmp::Lt: return v < 0;
        case Cmp::Le: return v <= 0;
        case Cmp::Eq: return v == 0;
      }
    }
  }
  return false;
}

bool eval(const Formula& f, const Model& m,
          const std::function<bool(const CallAtom&, const Model&)>& calls) {
  switch (f.kind()) {
    case FKind::True: return true;
    case FKind::False: return false;
    case FKind::Lit: return eval(f.lit(), m);
    case FKind::Call:
      if (!calls) throw Error(ErrorKind::PreconditionFailed, "eval of a formula with call atoms");
      return calls(f.call_atom(), m);
    case FKind::And:
      for (const auto& c : f.children())
        if (!eval(c, m, calls)) return false;
      return true;
    case FKind::Or:
      for (const auto& c : f.children())
        if (eval(c, m, calls)) return true;
      return false;
  }
  return false;
}

bool eval(const Formula& f, const Model& m) { return eval(f, m, {}); }

namespace {

void implicant_rec(const Formula& f, const Model& m, std::vector<Literal>& out) {
  switch (f.kind()) {
    case FKind::True: return;
    case FKind::False: throw Error(ErrorKind::ModelMismatch, "implicant of a false formula");
    case FKind::Lit:
      if (!eval(f.lit(), m)) throw Error(ErrorKind::ModelMismatch, "literal false in model");
      for (const auto& l : out)
        if (l == f.lit()) return;
      out.push_back(f.lit());
      return;
    case FKind::Call: throw Error(ErrorKind::PreconditionFailed, "implicant of a call atom");
    case FKind::And:
      for (const auto& c : f.children()) implicant_rec(c, m, out);
      return;
    case FKind::Or:
      for (const auto& c : f.children())
        if (eval(c, m)) {
          implicant_rec(c, m, out);
          return;
        }
      throw Error(ErrorKind::ModelMismatch, "no disjunct true in model");
  }
}

}  // namespace

std::vector<Literal> implicant(const Formula& f, const Model& m) {
  std::vector<Literal> out;
  implicant_rec(f, m, out);
  return out;
}

// ---- paths ----------------------------------------------------------------------

Formula Path::to_formula() const {
  std::vector<Formula> parts;
  for (const auto& l : literals) parts.push_back(Formula::literal(l));
  for (const auto& c : calls) parts.push_back(Formula::call(c));
  return Formula::conj(parts);
}

namespace {

std::vector<Path> dnf_rec(const Formula& f, std::size_t limit) {
  switch (f.kind()) {
    case FKind::True: return {Path{}};
    case FKind::False: return {};
    case FKind::Lit: return {Path{{f.lit()}, {}}};
    case FKind::Call: return {Path{{}, {f.call_atom()}}};
    case FKind::Or: {
      std::vector<Path> out;
      for (const auto& c : f.children()) {
        auto sub = dnf_rec(c, limit);
        out.insert(out.end(), sub.begin(), sub.end());
        if (out.size() > limit)
          throw Error(ErrorKind::PathExplosion, "more than " + std::to_string(limit) + " paths");
      }
      return out;
    }
    case FKind::And: {
      std::vector<Path> acc{Path{}};
      for (const auto& c : f.children()) {
        auto sub = dnf_rec(c, limit);
        if (acc.size() * sub.size() > limit)
          throw Error(ErrorKind::PathExplosion, "more than " + std::to_string(limit) + " paths");
        std::vector<Path> next;
        next.reserve(acc.size() * sub.size());
        for (const auto& a : acc)
          for (const auto& s : sub) {
            Path p = a;
            for (const auto& l : s.literals) {
              bool dup = false;
              for (const auto& q : p.literals) dup = dup || q == l;
              if (!dup) p.literals.push_back(l);
            }
            p.calls.insert(p.calls.end(), s.calls.begin(), s.calls.end());
            next.push_back(std::move(p));
          }
        acc = std::move(next);
      }
      return acc;
    }
  }
  return {};
}

}  // namespace

std::vector<Path> dnf_paths(const Formula& body, std::size_t limit) {
  return dnf_rec(body, limit);
}

// ---- normal forms -----------------------------------------------------------------

XLiteral normalize_for(const Var& x, const Literal& lit, Sort mode) {
  XLiteral r;
  if (lit.kind() == Literal::Kind::Bool || !lit.term().mentions(x)) return r;
  const Rational a = lit.term().coeff(x);
  const LinTerm rest = lit.term().without(x);
  if (lit.kind() == Literal::Kind::Divides) {
    if (mode != Sort::Int) throw Error(ErrorKind::WrongMode, "divisibility literal outside integer mode");
    const Integer& d = lit.divisor();
    Integer am = mod_floor(a.get_num(), d);
    r.kind = XLiteral::Kind::Divides;
    r.divisor = d;
    r.positive = lit.positive();
    if (am == 1) {
      r.bound = rest;
    } else if (am == d - 1) {
      r.bound = -rest;  // d | -x + w  <=>  d | x - w
    } else {
      throw Error(ErrorKind::NotNormalized, "coefficient of " + x.name + " in " + lit.key());
    }
    return r;
  }
  if (mode == Sort::Int && a != 1 && a != -1)
    throw Error(ErrorKind::NotNormalized, "coefficient of " + x.name + " in " + lit.key());
  // a*x + rest op 0  <=>  x op' -rest/a
  LinTerm b = rest * Rational(-1 / a);
  switch (lit.cmp()) {
    case Cmp::Eq:
      r.kind = XLiteral::Kind::Eq;
      r.bound = b;
      return r;
    case Cmp::Lt:
    case Cmp::Le:
      r.kind = a > 0 ? XLiteral::Kind::Upper : XLiteral::Kind::Lower;
      r.strict = lit.cmp() == Cmp::Lt;
      r.bound = b;
      if (mode == Sort::Int && !r.strict) {
        r.strict = true;
        r.bound.add_constant(r.kind == XLiteral::Kind::Upper ? 1 : -1);
      }
      return r;
  }
  return r;
}

LiaNormalized lia_normalize(const Var& x, const Formula& f) {
  std::vector<Literal> lits;
  collect_literals(f, lits);
  Integer lcm = 1;
  for (const auto& l : lits) {
    if (l.kind() == Literal::Kind::Bool || !l.term().mentions(x)) continue;
    Rational a = l.term().coeff(x);
    if (!is_integral(a)) throw Error(ErrorKind::WrongMode, "non-integral coefficient in integer mode");
    lcm = lcm_of(lcm, abs(a.get_num()));
  }
  if (lcm == 1) return {f, x, 1};
  VarSet used = free_vars(f);
  Var fresh(x.name + "'", x.sort);
  while (used.count(fresh)) fresh.name += "'";
  const Integer dp = lcm;
  Formula g = map_literals(f, [&](const Literal& l) {
    if (l.kind() == Literal::Kind::Bool || !l.term().mentions(x)) return Formula::literal(l);
    Integer a = l.term().coeff(x).get_num();
    LinTerm rest = l.term().without(x);
    if (l.kind() == Literal::Kind::Divides) {
      Integer m = dp / a;  // a is the reduced coefficient in [1, d)
      return mk_divides(l.divisor() * m, rest * Rational(m) + LinTerm::variable(fresh), l.positive());
    }
    Integer m = dp / abs(a);
    Integer sign = a > 0 ? 1 : -1;
    return mk_cmp(l.cmp(), rest * Rational(m) + LinTerm::variable(fresh, Rational(sign)));
  });
  g = g && mk_divides(dp, LinTerm::variable(fresh));
  return {g, fresh, dp};
}

// ---- printing ----------------------------------------------------------------------

namespace {

std::string name_of(const Var& v, const VarNamer& namer) { return namer ? namer(v) : v.name; }

std::string monomial(const Rational& c, const Var& v, const VarNamer& namer) {
  if (c == 1) return name_of(v, namer);
  return "(* " + c.get_str() + " " + name_of(v, namer) + ")";
}

std::string sum_of(const std::vector<std::string>& parts) {
  if (parts.empty()) return "0";
  if (parts.size() == 1) return parts.front();
  std::string s = "(+";
  for (const auto& p : parts) s += " " + p;
  return s + ")";
}

}  // namespace

std::string term_to_sexpr(const LinTerm& t, const VarNamer& namer) {
  std::vector<std::string> parts;
  for (const auto& [v, c] : t.coeffs()) parts.push_back(monomial(c, v, namer));
  if (t.constant_part() != 0 || parts.empty()) parts.push_back(t.constant_part().get_str());
  return sum_of(parts);
}

std::string to_sexpr(const Literal& l, const VarNamer& namer) {
  switch (l.kind()) {
    case Literal::Kind::Bool:
      return l.positive() ? name_of(l.var(), namer) : "(not " + name_of(l.var(), namer) + ")";
    case Literal::Kind::Divides: {
      std::string s = "(divides " + l.divisor().get_str() + " " + term_to_sexpr(l.term(), namer) + ")";
      return l.positive() ? s : "(not " + s + ")";
    }
    case Literal::Kind::Arith: {
      std::vector<std::string> lhs, rhs;
      for (const auto& [v, c] : l.term().coeffs()) {
        if (c > 0)
          lhs.push_back(monomial(c, v, namer));
        else
          rhs.push_back(monomial(-c, v, namer));
      }
      const Rational& k = l.term().constant_part();
      if (k > 0) lhs.push_back(k.get_str());
      if (k < 0) rhs.push_back(Rational(-k).get_str());
      const char* op = l.cmp() == Cmp::Lt ? "<" : l.cmp() == Cmp::Le ? "<=" : "=";
      return std::string("(") + op + " " + sum_of(lhs) + " " + sum_of(rhs) + ")";
    }
  }
  return "";
}

std::string to_sexpr(const Formula& f, const VarNamer& namer) {
  switch (f.kind()) {
    case FKind::True: return "true";
    case FKind::False: return "false";
    case FKind::Lit: return to_sexpr(f.lit(), namer);
    case FKind::Call: {
      std::string s = "(call " + f.call_atom().callee;
      for (const auto& a : f.call_atom().args) s += " " + name_of(a, namer);
      return s + ")";
    }
    case FKind::And:
    case FKind::Or: {
      std::string s = f.kind() == FKind::And ? "(and" : "(or";
      for (const auto& c : f.children()) s += " " + to_sexpr(c, namer);
      return s + ")";
    }
  }
  return "";
}

}  // namespace recmc
