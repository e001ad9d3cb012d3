#include "imapk/cli/spec.hpp"

#include <cctype>
#include <map>

#include "imapk/error.hpp"

namespace imapk::cli {

namespace {

struct Loc {
  int line = 1, col = 1;
  std::string str() const { return "line " + std::to_string(line) + ", col " + std::to_string(col); }
};

[[noreturn]] void syntax(const Loc& at, const std::string& what) {
  fail(ErrorKind::SyntaxError, at.str() + ": " + what);
}
[[noreturn]] void semantic(const Loc& at, const std::string& what) {
  fail(ErrorKind::SemanticError, at.str() + ": " + what);
}

struct Token {
  enum class Kind { Ident, Number, Symbol, End };
  Kind kind = Kind::End;
  std::string text;
  Loc at;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  Token next() {
    skip();
    Token t;
    t.at = loc_;
    if (i_ >= s_.size()) return t;
    char c = s_[i_];
    auto digit = [&](std::size_t k) { return k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k])); };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Token::Kind::Ident;
      while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) t.text += take();
    } else if (digit(i_) || ((c == '-' || c == '+') && digit(i_ + 1))) {
      t.kind = Token::Kind::Number;
      t.text += take();
      while (digit(i_)) t.text += take();
      if (i_ < s_.size() && s_[i_] == '/') {
        t.text += take();
        if (!digit(i_)) syntax(loc_, "expected digits after '/'");
        while (digit(i_)) t.text += take();
      }
    } else if (std::string_view("{}[]=;,:+-").find(c) != std::string_view::npos) {
      t.kind = Token::Kind::Symbol;
      t.text += take();
    } else {
      syntax(loc_, std::string("unexpected character '") + c + "'");
    }
    return t;
  }

 private:
  char take() {
    char c = s_[i_++];
    if (c == '\n') {
      ++loc_.line;
      loc_.col = 1;
    } else {
      ++loc_.col;
    }
    return c;
  }
  void skip() {
    while (i_ < s_.size()) {
      if (s_[i_] == '#') {
        while (i_ < s_.size() && s_[i_] != '\n') take();
      } else if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
        take();
      } else {
        break;
      }
    }
  }

  std::string_view s_;
  std::size_t i_ = 0;
  Loc loc_;
};

struct Value;
struct Entry;

struct Value {
  enum class Kind { Number, Ident, Sign, List, Object, Alg };
  Kind kind = Kind::Number;
  std::string text;
  std::vector<Value> items;
  std::vector<Entry> fields;
  Loc at;
};

struct Entry {
  std::string key;
  Loc at;
  Value value;
};

class Parser {
 public:
  explicit Parser(std::string_view s) : lex_(s) { tok_ = lex_.next(); }

  std::vector<Entry> document() {
    std::vector<Entry> sections;
    while (tok_.kind != Token::Kind::End) {
      if (tok_.kind != Token::Kind::Ident) syntax(tok_.at, "expected a section name");
      Entry e{tok_.text, tok_.at, {}};
      advance();
      e.value = object();
      sections.push_back(std::move(e));
    }
    return sections;
  }

 private:
  void advance() { tok_ = lex_.next(); }
  bool is(const char* sym) const { return tok_.kind == Token::Kind::Symbol && tok_.text == sym; }
  void expect(const char* sym) {
    if (!is(sym)) syntax(tok_.at, std::string("expected '") + sym + "'" + found());
    advance();
  }
  std::string found() const {
    return tok_.kind == Token::Kind::End ? " but reached end of input" : " but found '" + tok_.text + "'";
  }

  Value object() {
    Value v;
    v.kind = Value::Kind::Object;
    v.at = tok_.at;
    expect("{");
    while (!is("}")) {
      if (tok_.kind != Token::Kind::Ident) syntax(tok_.at, "expected a key" + found());
      Entry e{tok_.text, tok_.at, {}};
      advance();
      expect("=");
      e.value = value();
      v.fields.push_back(std::move(e));
      while (is(";") || is(",")) advance();
    }
    advance();
    return v;
  }

  Value list() {
    Value v;
    v.kind = Value::Kind::List;
    v.at = tok_.at;
    expect("[");
    while (!is("]")) {
      v.items.push_back(value());
      if (is(",") || is(";")) advance();
      else if (!is("]")) syntax(tok_.at, "expected ',' or ']'" + found());
    }
    advance();
    return v;
  }

  Value value() {
    Value v;
    v.at = tok_.at;
    if (is("{")) return object();
    if (is("[")) return list();
    if (is("+") || is("-")) {
      v.kind = Value::Kind::Sign;
      v.text = tok_.text;
      advance();
      return v;
    }
    if (tok_.kind == Token::Kind::Number) {
      v.kind = Value::Kind::Number;
      v.text = tok_.text;
      advance();
      return v;
    }
    if (tok_.kind == Token::Kind::Ident) {
      v.text = tok_.text;
      advance();
      if (v.text == "alg" && is(":")) {
        advance();
        Value l = list();
        v.kind = Value::Kind::Alg;
        v.items = std::move(l.items);
        return v;
      }
      v.kind = Value::Kind::Ident;
      return v;
    }
    syntax(tok_.at, "expected a value" + found());
  }

  Lexer lex_;
  Token tok_;
};

// ---------------------------------------------------------------- semantics

mpq_class as_rational(const Value& v) {
  if (v.kind != Value::Kind::Number) semantic(v.at, "expected a rational number");
  return parse_rational(v.text);
}

long as_int(const Value& v) {
  mpq_class q = as_rational(v);
  if (q.get_den() != 1 || !q.get_num().fits_slong_p()) semantic(v.at, "expected an integer");
  return q.get_num().get_si();
}

bool as_bool(const Value& v) {
  if (v.kind == Value::Kind::Ident && (v.text == "true" || v.text == "false")) return v.text == "true";
  semantic(v.at, "expected true or false");
}

const std::vector<Value>& as_list(const Value& v) {
  if (v.kind != Value::Kind::List) semantic(v.at, "expected a list");
  return v.items;
}

Scalar as_scalar(const Value& v, const FieldPtr& field) {
  if (v.kind == Value::Kind::Number) return Scalar(as_rational(v));
  if (v.kind == Value::Kind::Alg) {
    if (!field) semantic(v.at, "alg:[...] needs a field section");
    if (static_cast<int>(v.items.size()) > field->degree())
      semantic(v.at, "alg:[...] has more coefficients than the field degree");
    std::vector<mpq_class> c;
    for (const auto& x : v.items) c.push_back(as_rational(x));
    return Scalar(field, c);
  }
  semantic(v.at, "expected a scalar (p/q or alg:[...])");
}

std::vector<Scalar> as_scalars(const Value& v, const FieldPtr& field) {
  std::vector<Scalar> out;
  for (const auto& x : as_list(v)) out.push_back(as_scalar(x, field));
  return out;
}

IntMatrix as_matrix(const Value& v) {
  const auto& rows = as_list(v);
  if (rows.empty()) semantic(v.at, "matrix must be nonempty");
  IntMatrix m(rows.size(), as_list(rows[0]).size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = as_list(rows[i]);
    if (r.size() != m.cols()) semantic(rows[i].at, "matrix rows must have equal length");
    for (std::size_t j = 0; j < r.size(); ++j) m(i, j) = as_int(r[j]);
  }
  return m;
}

/// Key lookup that rejects unknown and repeated keys.
class Fields {
 public:
  Fields(const Value& obj, std::vector<std::string> allowed, std::vector<std::string> repeatable = {}) {
    for (const auto& e : obj.fields) {
      bool rep = std::find(repeatable.begin(), repeatable.end(), e.key) != repeatable.end();
      if (!rep && std::find(allowed.begin(), allowed.end(), e.key) == allowed.end())
        semantic(e.at, "unknown key '" + e.key + "'");
      if (!rep && by_key_.count(e.key)) semantic(e.at, "duplicate key '" + e.key + "'");
      by_key_[e.key].push_back(&e);
    }
    at_ = obj.at;
  }
  const Value* find(const std::string& k) const {
    auto it = by_key_.find(k);
    return it == by_key_.end() ? nullptr : &it->second.front()->value;
  }
  const Value& need(const std::string& k) const {
    if (auto* v = find(k)) return *v;
    semantic(at_, "missing key '" + k + "'");
  }
  std::vector<const Entry*> all(const std::string& k) const {
    auto it = by_key_.find(k);
    return it == by_key_.end() ? std::vector<const Entry*>{} : it->second;
  }
  void only(const std::vector<std::string>& keys, const std::string& context) const {
    for (const auto& [k, es] : by_key_)
      if (std::find(keys.begin(), keys.end(), k) == keys.end())
        semantic(es.front()->at, "key '" + k + "' does not apply to " + context);
  }

 private:
  std::map<std::string, std::vector<const Entry*>> by_key_;
  Loc at_;
};

FieldPtr parse_field(const Value& obj) {
  Fields f(obj, {"poly", "iso"});
  std::vector<mpq_class> poly;
  for (const auto& c : as_list(f.need("poly"))) poly.push_back(as_rational(c));
  const auto& iso = as_list(f.need("iso"));
  if (iso.size() != 2) semantic(f.need("iso").at, "iso must be [lo, hi]");
  try {
    return NumberField::create(poly, as_rational(iso[0]), as_rational(iso[1]));
  } catch (const Error& e) {
    semantic(obj.at, std::string(e.what()));
  }
}

FamilySpec parse_family(const Fields& f, const FieldPtr& field) {
  const Value& fam = f.need("family");
  if (fam.kind != Value::Kind::Ident) semantic(fam.at, "family must be a name");
  const std::string& n = fam.text;
  if (n == "tent") {
    f.only({"family"}, "tent");
    return FamilySpec::tent();
  }
  if (n == "restricted_tent") {
    f.only({"family", "s"}, n);
    return FamilySpec::restricted_tent(as_scalar(f.need("s"), field));
  }
  if (n == "uniform_pl") {
    f.only({"family", "partition", "signs", "s"}, n);
    std::vector<int> signs;
    for (const auto& s : as_list(f.need("signs"))) {
      if (s.kind == Value::Kind::Sign) signs.push_back(s.text == "+" ? 1 : -1);
      else if (s.kind == Value::Kind::Number && (s.text == "1" || s.text == "-1")) signs.push_back(s.text == "1" ? 1 : -1);
      else semantic(s.at, "signs are + or -");
    }
    return FamilySpec::uniform_pl(as_scalars(f.need("partition"), field), signs, as_scalar(f.need("s"), field));
  }
  if (n == "beta") {
    f.only({"family", "beta"}, n);
    return FamilySpec::beta_map(as_scalar(f.need("beta"), field));
  }
  if (n == "interval_exchange") {
    f.only({"family", "lengths", "permutation"}, n);
    std::vector<std::size_t> perm;
    for (const auto& p : as_list(f.need("permutation"))) {
      long k = as_int(p);
      if (k < 1) semantic(p.at, "permutation entries are 1-based");
      perm.push_back(static_cast<std::size_t>(k));
    }
    return FamilySpec::interval_exchange(as_scalars(f.need("lengths"), field), perm);
  }
  if (n == "multimodal") {
    f.only({"family", "partition", "values"}, n);
    return FamilySpec::multimodal(as_scalars(f.need("partition"), field), as_scalars(f.need("values"), field));
  }
  if (n == "markov_realization") {
    f.only({"family", "matrix"}, n);
    return FamilySpec::markov_realization(as_matrix(f.need("matrix")));
  }
  semantic(fam.at, "unknown family '" + n + "'");
}

RunOptions parse_options(const Value& obj, const FieldPtr& field) {
  Fields f(obj, {"cap", "tol", "assert_cyclic", "assert_idoc", "assert_orbit_infinite", "partition"});
  RunOptions o;
  if (auto* v = f.find("cap")) {
    long c = as_int(*v);
    if (c <= 0) semantic(v->at, "cap must be positive");
    o.cap = static_cast<std::size_t>(c);
  }
  if (auto* v = f.find("tol")) {
    o.tol = as_rational(*v);
    if (sgn(o.tol) <= 0) semantic(v->at, "tol must be positive");
  }
  if (auto* v = f.find("assert_cyclic")) o.assert_cyclic = as_bool(*v);
  if (auto* v = f.find("assert_idoc")) o.assert_idoc = as_bool(*v);
  if (auto* v = f.find("assert_orbit_infinite")) o.assert_orbit_infinite = as_bool(*v);
  if (auto* v = f.find("partition")) o.partition = as_scalars(*v, field);
  return o;
}

}  // namespace

MapSpecFile parse_spec(std::string_view text) {
  auto sections = Parser(text).document();
  const Entry *field_sec = nullptr, *map_sec = nullptr, *opt_sec = nullptr;
  for (const auto& s : sections) {
    const Entry** slot = s.key == "field" ? &field_sec : s.key == "map" ? &map_sec : s.key == "options" ? &opt_sec : nullptr;
    if (!slot) semantic(s.at, "unknown section '" + s.key + "'");
    if (*slot) semantic(s.at, "duplicate section '" + s.key + "'");
    *slot = &s;
  }
  if (!map_sec) semantic(Loc{}, "missing map section");

  FieldPtr field = field_sec ? parse_field(field_sec->value) : nullptr;
  Fields f(map_sec->value, {"family", "partition", "branch", "s", "signs", "beta", "lengths", "permutation", "values",
                            "matrix"},
           {"branch"});
  std::optional<FamilySpec> family;
  auto wrap = [&](auto&& build_it) {
    try {
      return build_it();
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::SyntaxError || e.kind() == ErrorKind::SemanticError) throw;
      semantic(map_sec->at, std::string(e.what()));
    }
  };
  BuiltFamily built = wrap([&] {
    if (f.find("family")) {
      family = parse_family(f, field);
      return build(*family);
    }
    f.only({"partition", "branch"}, "an explicit map");
    std::vector<Scalar> part = as_scalars(f.need("partition"), field);
    std::vector<AffineBranch> br;
    for (const Entry* e : f.all("branch")) {
      if (e->value.kind != Value::Kind::Object) semantic(e->value.at, "branch must be {slope = ..., intercept = ...}");
      Fields b(e->value, {"slope", "intercept"});
      br.push_back({as_scalar(b.need("slope"), field), as_scalar(b.need("intercept"), field)});
    }
    if (br.empty()) semantic(map_sec->at, "an explicit map needs at least one branch");
    return BuiltFamily{validate_map(part, br), {}, Family::Other, std::nullopt, std::nullopt};
  });
  RunOptions options = opt_sec ? parse_options(opt_sec->value, field) : RunOptions{};
  return MapSpecFile{field, family, std::move(built), std::move(options)};
}

std::string map_spec_text(const PMMap& m) {
  std::string s;
  if (const FieldPtr& f = m.field()) {
    s += "field { poly = [";
    const auto& c = f->min_poly().coeffs();
    for (std::size_t i = 0; i < c.size(); ++i) s += (i ? ", " : "") + c[i].get_str();
    s += "]; iso = [" + f->lo().get_str() + ", " + f->hi().get_str() + "] }\n";
  }
  s += "map {\n  partition = [";
  const auto& p = m.partition();
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + p[i].to_short_string();
  s += "]\n";
  for (std::size_t i = 0; i < m.branch_count(); ++i)
    s += "  branch = {slope = " + m.branch(i).slope.to_short_string() +
         ", intercept = " + m.branch(i).intercept.to_short_string() + "}\n";
  return s + "}\n";
}

}  // namespace imapk::cli
