#include "padic_cli/spec.hpp"

#include "padic/errors.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace padic::cli {

SpecError::SpecError(std::string k, int l, int c, const std::string &msg)
    : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + k + ": " + msg),
      kind(std::move(k)), line(l), column(c), message(msg) {}

const Entry *Block::find(const std::string &key) const {
  for (const auto &e : entries)
    if (e.key == key)
      return &e;
  return nullptr;
}

const AuditSpec &SpecFile::audit(const std::string &name) const {
  if (audits.empty())
    throw SpecError("unresolved-reference", 1, 1, "spec has no audit block");
  if (name.empty())
    return audits.front();
  for (const auto &a : audits)
    if (a.name == name)
      return a;
  throw SpecError("unresolved-reference", 1, 1, "no audit block named '" + name + "'");
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

std::string normalize(const std::string &s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space)
      out += ' ';
    space = false;
    out += c;
  }
  return out;
}

std::string strip_comment(const std::string &line) {
  const auto h = line.find('#');
  return h == std::string::npos ? line : line.substr(0, h);
}

int depth_change(const std::string &s) {
  int d = 0;
  for (char c : s) {
    if (c == '[' || c == '(')
      ++d;
    else if (c == ']' || c == ')')
      --d;
  }
  return d;
}

} // namespace

SpecTree parse_tree(const std::string &text) {
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);)
      lines.push_back(l);
  }
  SpecTree tree;
  Block *cur = nullptr;
  std::set<std::pair<std::string, std::string>> names;
  for (size_t i = 0; i < lines.size(); ++i) {
    const int ln = static_cast<int>(i) + 1;
    const std::string raw = strip_comment(lines[i]);
    size_t pos = raw.find_first_not_of(" \t\r");
    if (pos == std::string::npos)
      continue;
    const int col = static_cast<int>(pos) + 1;
    if (!cur) {
      // kind [name] {
      size_t q = pos;
      while (q < raw.size() && ident_char(raw[q]))
        ++q;
      if (q == pos || !ident_start(raw[pos]))
        throw SpecError("syntax", ln, col, "expected a block kind");
      Block b;
      b.kind = raw.substr(pos, q - pos);
      b.line = ln;
      b.column = col;
      q = raw.find_first_not_of(" \t", q);
      if (q != std::string::npos && ident_start(raw[q])) {
        size_t r = q;
        while (r < raw.size() && ident_char(raw[r]))
          ++r;
        b.name = raw.substr(q, r - q);
        q = raw.find_first_not_of(" \t", r);
      }
      if (q == std::string::npos || raw[q] != '{')
        throw SpecError("syntax", ln, q == std::string::npos ? static_cast<int>(raw.size()) + 1
                                                             : static_cast<int>(q) + 1,
                        "expected '{' after block header");
      if (raw.find_first_not_of(" \t\r", q + 1) != std::string::npos)
        throw SpecError("syntax", ln, static_cast<int>(q) + 2, "text after '{'");
      if (!b.name.empty() && !names.insert({b.kind, b.name}).second)
        throw SpecError("syntax", ln, col, "duplicate " + b.kind + " block '" + b.name + "'");
      tree.blocks.push_back(std::move(b));
      cur = &tree.blocks.back();
      continue;
    }
    if (raw[pos] == '}') {
      if (raw.find_first_not_of(" \t\r", pos + 1) != std::string::npos)
        throw SpecError("syntax", ln, col + 1, "text after '}'");
      cur = nullptr;
      continue;
    }
    size_t q = pos;
    while (q < raw.size() && ident_char(raw[q]))
      ++q;
    if (q == pos || !ident_start(raw[pos]))
      throw SpecError("syntax", ln, col, "expected 'key = value' or '}'");
    Entry e;
    e.key = raw.substr(pos, q - pos);
    q = raw.find_first_not_of(" \t", q);
    if (q == std::string::npos || raw[q] != '=')
      throw SpecError("syntax", ln, q == std::string::npos ? static_cast<int>(raw.size()) + 1
                                                           : static_cast<int>(q) + 1,
                      "expected '=' after key '" + e.key + "'");
    size_t v = raw.find_first_not_of(" \t", q + 1);
    if (v == std::string::npos)
      throw SpecError("syntax", ln, static_cast<int>(q) + 2, "missing value for '" + e.key + "'");
    e.line = ln;
    e.column = static_cast<int>(v) + 1;
    std::string value = raw.substr(v);
    int depth = depth_change(value);
    while (depth > 0) {
      if (++i >= lines.size())
        throw SpecError("syntax", e.line, e.column, "unclosed bracket in value of '" + e.key + "'");
      const std::string more = strip_comment(lines[i]);
      value += " " + more;
      depth += depth_change(more);
    }
    if (depth < 0)
      throw SpecError("syntax", e.line, e.column, "unbalanced ')' or ']' in value of '" + e.key + "'");
    e.value = normalize(value);
    if (cur->find(e.key))
      throw SpecError("syntax", ln, col, "duplicate key '" + e.key + "'");
    cur->entries.push_back(std::move(e));
  }
  if (cur)
    throw SpecError("syntax", cur->line, cur->column, "block '" + cur->kind + "' is not closed");
  return tree;
}

std::string print_tree(const SpecTree &tree) {
  std::string out;
  for (size_t b = 0; b < tree.blocks.size(); ++b) {
    const auto &blk = tree.blocks[b];
    if (b)
      out += "\n";
    out += blk.kind + (blk.name.empty() ? "" : " " + blk.name) + " {\n";
    for (const auto &e : blk.entries)
      out += "  " + e.key + " = " + e.value + "\n";
    out += "}\n";
  }
  return out;
}

// ---- value parsing ----

namespace {

struct ValueError {
  int offset;
  std::string msg;
};

// Top-level comma split of "[a, b, ...]"; offsets are relative to text.
std::vector<std::pair<std::string, int>> split_list(const std::string &text, int base = 0) {
  size_t a = text.find_first_not_of(' ');
  size_t z = text.find_last_not_of(' ');
  if (a == std::string::npos || text[a] != '[' || text[z] != ']')
    throw ValueError{base + static_cast<int>(a == std::string::npos ? 0 : a), "expected a [list]"};
  std::vector<std::pair<std::string, int>> out;
  int depth = 0;
  size_t start = a + 1;
  auto push = [&](size_t end) {
    const std::string item = text.substr(start, end - start);
    const size_t s = item.find_first_not_of(' ');
    if (s == std::string::npos) {
      if (!out.empty() || end != z)
        throw ValueError{base + static_cast<int>(end), "empty list item"};
      return;
    }
    const size_t t = item.find_last_not_of(' ');
    out.emplace_back(item.substr(s, t - s + 1), base + static_cast<int>(start + s));
  };
  for (size_t i = a + 1; i < z; ++i) {
    const char c = text[i];
    if (c == '[' || c == '(')
      ++depth;
    else if (c == ']' || c == ')')
      --depth;
    else if (c == ',' && depth == 0) {
      push(i);
      start = i + 1;
    }
  }
  push(z);
  return out;
}

template <class R> class ExprParser {
public:
  using Lookup = std::function<std::optional<R>(const std::string &)>;
  using FromInt = std::function<R(i64)>;

  ExprParser(const std::string &s, int base, Lookup look, FromInt from_int)
      : s_(s), base_(base), look_(std::move(look)), from_int_(std::move(from_int)) {}

  R parse() {
    R r = expr();
    skip();
    if (i_ != s_.size())
      fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return r;
  }

private:
  const std::string &s_;
  size_t i_ = 0;
  int base_;
  Lookup look_;
  FromInt from_int_;

  [[noreturn]] void fail(const std::string &m) { throw ValueError{base_ + static_cast<int>(i_), m}; }
  void skip() {
    while (i_ < s_.size() && s_[i_] == ' ')
      ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  i64 integer() {
    skip();
    const size_t a = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_])))
      ++i_;
    if (a == i_)
      fail("expected an integer");
    try {
      return std::stoll(s_.substr(a, i_ - a));
    } catch (const std::out_of_range &) {
      i_ = a;
      fail("integer out of range");
    }
  }
  R expr() {
    R r = term();
    for (;;) {
      if (eat('+'))
        r = r + term();
      else if (eat('-'))
        r = r - term();
      else
        return r;
    }
  }
  R term() {
    R r = factor();
    while (eat('*'))
      r = r * factor();
    return r;
  }
  R factor() {
    if (eat('-'))
      return -factor();
    R a = atom();
    if (eat('^')) {
      const i64 k = integer();
      if (k > 4096)
        fail("exponent too large");
      a = a.pow(static_cast<int>(k));
    }
    return a;
  }
  R atom() {
    skip();
    if (i_ >= s_.size())
      fail("unexpected end of expression");
    if (eat('(')) {
      R r = expr();
      if (!eat(')'))
        fail("expected ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(s_[i_])))
      return from_int_(integer());
    if (ident_start(s_[i_])) {
      const size_t a = i_;
      while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
        ++i_;
      const std::string name = s_.substr(a, i_ - a);
      auto v = look_(name);
      if (!v) {
        i_ = a;
        fail("unknown name '" + name + "'");
      }
      return *v;
    }
    fail("unexpected '" + std::string(1, s_[i_]) + "'");
  }
};

Element element_expr(const std::string &text, int base, const CtxPtr &ctx) {
  return ExprParser<Element>(
             text, base,
             [&](const std::string &n) -> std::optional<Element> {
               if (n == "pi")
                 return Element::pi(ctx);
               if (n == "p")
                 return Element::from_int(ctx, ctx->p());
               return std::nullopt;
             },
             [&](i64 v) { return Element::from_int(ctx, v); })
      .parse();
}

Series series_expr(const std::string &text, int base, const ModelPtr &m) {
  return ExprParser<Series>(
             text, base,
             [&](const std::string &n) -> std::optional<Series> {
               if (m->index(n) >= 0)
                 return Series::variable(m, n);
               if (n == "pi")
                 return Series::constant(m, Element::pi(m->base));
               if (n == "p")
                 return Series::constant(m, m->base->p());
               return std::nullopt;
             },
             [&](i64 v) { return Series::constant(m, v); })
      .parse();
}

i64 int_value(const std::string &text, int base) {
  size_t used = 0;
  i64 v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception &) {
    throw ValueError{base, "expected an integer"};
  }
  if (used != text.size())
    throw ValueError{base + static_cast<int>(used), "expected an integer"};
  return v;
}

std::string ident_value(const std::string &text, int base) {
  if (text.empty() || !ident_start(text[0]) ||
      !std::all_of(text.begin(), text.end(), [](char c) { return ident_char(c); }))
    throw ValueError{base, "expected a name"};
  return text;
}

GroupPresentation group_value(const std::string &text, int base) {
  const size_t lp = text.find('(');
  if (lp == std::string::npos || text.back() != ')')
    throw ValueError{base, "expected free(...), cyclic(n), symmetric(n) or perms(...)"};
  const std::string kind = text.substr(0, lp);
  const std::string inner = "[" + text.substr(lp + 1, text.size() - lp - 2) + "]";
  const int ib = base + static_cast<int>(lp);
  const auto args = split_list(inner, ib);
  if (kind == "free") {
    std::vector<std::string> g;
    for (const auto &[a, o] : args)
      g.push_back(ident_value(a, o));
    if (g.empty())
      throw ValueError{ib, "free group needs generators"};
    return GroupPresentation::free(g);
  }
  if (kind == "cyclic" || kind == "symmetric") {
    if (args.size() != 1)
      throw ValueError{ib, kind + " takes one integer"};
    const i64 n = int_value(args[0].first, args[0].second);
    if (n < 1 || n > 6 || (kind == "cyclic" && n > 64))
      throw ValueError{args[0].second, "order out of range"};
    return kind == "cyclic" ? GroupPresentation::cyclic(static_cast<int>(n))
                            : GroupPresentation::symmetric(static_cast<int>(n));
  }
  if (kind == "perms") {
    std::vector<std::string> names;
    std::vector<std::vector<int>> perms;
    for (const auto &[a, o] : args) {
      const size_t eq = a.find('=');
      if (eq == std::string::npos)
        throw ValueError{o, "expected name = [images]"};
      std::string nm = normalize(a.substr(0, eq));
      names.push_back(ident_value(nm, o));
      const int vb = o + static_cast<int>(eq) + 1;
      std::vector<int> im;
      for (const auto &[x, xo] : split_list(a.substr(eq + 1), vb))
        im.push_back(static_cast<int>(int_value(x, xo)));
      perms.push_back(im);
    }
    return GroupPresentation::from_permutations(names, perms);
  }
  throw ValueError{base, "unknown group kind '" + kind + "'"};
}

template <class T, class F>
std::vector<std::vector<T>> matrix_value(const std::string &text, int base, F entry) {
  std::vector<std::vector<T>> rows;
  for (const auto &[r, ro] : split_list(text, base)) {
    std::vector<T> row;
    for (const auto &[x, xo] : split_list(r, ro))
      row.push_back(entry(x, xo));
    if (!rows.empty() && row.size() != rows[0].size())
      throw ValueError{ro, "rows of different lengths"};
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.size() != rows[0].size())
    throw ValueError{base, "expected a square matrix"};
  return rows;
}

class Builder {
public:
  Builder(SpecFile &f, std::optional<int> prec) : f_(f), prec_(prec) {}

  void run() {
    for (const char *kind :
         {"context", "model", "point", "domain", "rep", "family", "pseudorep", "audit"})
      for (const auto &b : f_.tree.blocks)
        if (b.kind == kind)
          block(b);
    for (const auto &b : f_.tree.blocks)
      if (!std::set<std::string>{"context", "model", "point", "domain", "rep", "family",
                                 "pseudorep", "audit"}
               .count(b.kind))
        throw SpecError("syntax", b.line, b.column, "unknown block kind '" + b.kind + "'");
  }

private:
  SpecFile &f_;
  std::optional<int> prec_;
  const Block *b_ = nullptr;

  [[noreturn]] void err(const std::string &kind, const Entry *e, const std::string &msg) {
    if (e)
      throw SpecError(kind, e->line, e->column, msg);
    throw SpecError(kind, b_->line, b_->column, msg);
  }
  const Entry &need(const std::string &key) {
    if (const Entry *e = b_->find(key))
      return *e;
    err("syntax", nullptr, b_->kind + " block needs '" + key + "'");
  }
  void allow(std::set<std::string> keys) {
    for (const auto &e : b_->entries)
      if (!keys.count(e.key))
        err("syntax", &e, "unknown key '" + e.key + "' in " + b_->kind + " block");
  }
  template <class Fn> auto value(const Entry &e, Fn fn) {
    try {
      return fn(e.value, 0);
    } catch (const ValueError &v) {
      throw SpecError("syntax", e.line, e.column + v.offset, v.msg);
    }
  }
  i64 integer(const std::string &key, std::optional<i64> dflt = std::nullopt) {
    const Entry *e = b_->find(key);
    if (!e) {
      if (dflt)
        return *dflt;
      need(key);
    }
    return value(*e, int_value);
  }
  template <class M> const typename M::mapped_type &ref(const M &m, const Entry &e, const char *what) {
    const std::string name = value(e, ident_value);
    auto it = m.find(name);
    if (it == m.end())
      err("unresolved-reference", &e, std::string("undeclared ") + what + " '" + name + "'");
    return it->second;
  }
  std::vector<std::string> names(const Entry &e) {
    return value(e, [](const std::string &t, int o) {
      std::vector<std::string> out;
      for (const auto &[x, xo] : split_list(t, o))
        out.push_back(ident_value(x, xo));
      return out;
    });
  }
  template <class Fn> void guarded(Fn fn) {
    try {
      fn();
    } catch (const SpecError &) {
      throw;
    } catch (const std::exception &ex) {
      err("invariant", nullptr, b_->kind + " '" + b_->name + "': " + ex.what());
    }
  }
  void named() {
    if (b_->name.empty())
      err("syntax", nullptr, b_->kind + " block needs a name");
  }

  void block(const Block &b) {
    b_ = &b;
    if (b.kind == "context")
      context();
    else if (b.kind == "model")
      model();
    else if (b.kind == "point")
      point();
    else if (b.kind == "domain")
      domain();
    else if (b.kind == "rep")
      rep();
    else if (b.kind == "family")
      family();
    else if (b.kind == "pseudorep")
      pseudorep();
    else
      audit();
  }

  int precision(int e) {
    if (prec_)
      return *prec_ * e;
    return static_cast<int>(integer("precision"));
  }

  void context() {
    named();
    allow({"p", "precision", "f", "eisenstein", "ramified_over", "r"});
    CtxPtr ctx;
    if (const Entry *base = b_->find("ramified_over")) {
      const CtxPtr &L = ref(f_.contexts, *base, "context");
      const int r = static_cast<int>(integer("r"));
      if (b_->find("p") && integer("p") != L->p())
        err("invariant", b_->find("p"), "p differs from the base context");
      const int P = prec_ || b_->find("precision") ? precision(L->e() * r) : L->precision() * r;
      guarded([&] { ctx = Context::ramified_over(L, r, P); });
    } else {
      const int p = static_cast<int>(integer("p"));
      const int f = static_cast<int>(integer("f", 1));
      if (const Entry *eis = b_->find("eisenstein")) {
        auto coeffs = value(*eis, [](const std::string &t, int o) {
          std::vector<i64> c;
          for (const auto &[x, xo] : split_list(t, o))
            c.push_back(int_value(x, xo));
          return c;
        });
        if (f != 1)
          err("invariant", eis, "eisenstein contexts have f = 1");
        const int P = precision(static_cast<int>(coeffs.size()) - 1);
        guarded([&] { ctx = Context::eisenstein(p, coeffs, P); });
      } else {
        const int P = precision(1);
        guarded([&] { ctx = f == 1 ? Context::qp(p, P) : Context::unramified(p, f, P); });
      }
    }
    f_.contexts[b_->name] = ctx;
  }

  void model() {
    named();
    allow({"context", "kind", "bounded", "open", "degree", "m", "d", "g", "t", "y", "z1", "z2"});
    const CtxPtr &ctx = ref(f_.contexts, need("context"), "context");
    const std::string kind = b_->find("kind") ? value(need("kind"), ident_value) : "disc";
    const int degree = static_cast<int>(integer("degree", 8));
    ModelPtr m;
    if (kind == "disc") {
      std::vector<std::string> bounded, open;
      if (const Entry *e = b_->find("bounded"))
        bounded = names(*e);
      if (const Entry *e = b_->find("open"))
        open = names(*e);
      guarded([&] { m = AlgebraModel::disc(ctx, bounded, open, degree); });
    } else if (kind == "annulus") {
      const int mm = static_cast<int>(integer("m"));
      const std::string z1 = b_->find("z1") ? value(need("z1"), ident_value) : "z1";
      const std::string z2 = b_->find("z2") ? value(need("z2"), ident_value) : "z2";
      guarded([&] { m = AlgebraModel::annulus(ctx, mm, degree, z1, z2); });
    } else if (kind == "cover") {
      const int d = static_cast<int>(integer("d"));
      const Entry &ge = need("g");
      auto g = value(ge, [&](const std::string &t, int o) {
        std::vector<Element> c;
        for (const auto &[x, xo] : split_list(t, o))
          c.push_back(element_expr(x, xo, ctx));
        return c;
      });
      const std::string tn = b_->find("t") ? value(need("t"), ident_value) : "T";
      const std::string yn = b_->find("y") ? value(need("y"), ident_value) : "Y";
      guarded([&] { m = AlgebraModel::cover(ctx, d, g, degree, tn, yn); });
    } else {
      err("syntax", b_->find("kind"), "model kind must be disc, annulus or cover");
    }
    f_.models[b_->name] = m;
  }

  void point() {
    named();
    allow({"model", "coords", "field"});
    const ModelPtr &m = ref(f_.models, need("model"), "model");
    CtxPtr E = m->base;
    if (const Entry *fe = b_->find("field"))
      E = ref(f_.contexts, *fe, "context");
    const Entry &ce = need("coords");
    auto coords = value(ce, [&](const std::string &t, int o) {
      std::vector<Element> c;
      for (const auto &[x, xo] : split_list(t, o))
        c.push_back(element_expr(x, xo, E));
      return c;
    });
    if (static_cast<int>(coords.size()) != m->nvars())
      err("invariant", &ce, "model has " + std::to_string(m->nvars()) + " variables");
    ModelPoint pt;
    guarded([&] {
      pt = ModelPoint{m, Embedding::make(m->base, E), coords};
      validate_point(pt);
    });
    f_.points[b_->name] = pt;
  }

  void domain() {
    named();
    allow({"center", "n", "kind"});
    const ModelPoint &x = ref(f_.points, need("center"), "point");
    const int n = static_cast<int>(integer("n"));
    DomainKind kind = DomainKind::WideOpenU;
    if (const Entry *k = b_->find("kind")) {
      const std::string s = value(*k, ident_value);
      if (s == "V")
        kind = DomainKind::AffinoidV;
      else if (s != "U")
        err("syntax", k, "domain kind must be U or V");
    }
    ResidueDomain dom;
    guarded([&] { dom = describe(x.model, x, n, kind); });
    f_.domains[b_->name] = dom;
  }

  GroupPresentation group() { return value(need("group"), group_value); }

  void rep() {
    named();
    const CtxPtr &ctx = ref(f_.contexts, need("context"), "context");
    const GroupPresentation G = group();
    std::set<std::string> keys{"context", "group", "shift"};
    RepSpec r{G, ctx, {}, std::nullopt};
    const int shift = static_cast<int>(integer("shift", 0));
    int dim = -1;
    for (const auto &g : G.gens()) {
      keys.insert(g);
      const Entry &e = need(g);
      auto rows = value(e, [&](const std::string &t, int o) {
        return matrix_value<Element>(t, o, [&](const std::string &x, int xo) {
          return element_expr(x, xo, ctx);
        });
      });
      const int d = static_cast<int>(rows.size());
      if (dim >= 0 && d != dim)
        err("invariant", &e, "generator matrices differ in size");
      dim = d;
      Mat M(ctx, d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          M(i, j) = rows[i][j];
      r.gens.push_back(QMat{M, shift});
    }
    allow(keys);
    if (shift == 0) {
      std::vector<Mat> ms;
      for (const auto &q : r.gens)
        ms.push_back(q.num);
      guarded([&] { r.integral = IntegralRep::make(G, ms); });
    }
    f_.reps.emplace(b_->name, std::move(r));
  }

  void family() {
    named();
    const ModelPtr &m = ref(f_.models, need("model"), "model");
    const GroupPresentation G = group();
    std::set<std::string> keys{"model", "group"};
    std::vector<SMat> gens;
    for (const auto &g : G.gens()) {
      keys.insert(g);
      const Entry &e = need(g);
      auto rows = value(e, [&](const std::string &t, int o) {
        return matrix_value<Series>(t, o, [&](const std::string &x, int xo) {
          return series_expr(x, xo, m);
        });
      });
      SMat s{m, static_cast<int>(rows.size()), {}};
      for (auto &row : rows)
        for (auto &x : row)
          s.a.push_back(std::move(x));
      if (!gens.empty() && s.d != gens[0].d)
        err("invariant", &e, "generator matrices differ in size");
      gens.push_back(std::move(s));
    }
    allow(keys);
    guarded([&] { f_.families.emplace(b_->name, RepFamily::make(G, m, gens)); });
  }

  void pseudorep() {
    named();
    allow({"source", "word_cap"});
    const Entry &src = need("source");
    const std::string name = value(src, ident_value);
    PseudorepSpec ps;
    ps.source = name;
    ps.word_cap = static_cast<int>(integer("word_cap", 1));
    if (auto it = f_.reps.find(name); it != f_.reps.end()) {
      if (!it->second.integral)
        err("invariant", &src, "pseudorepresentations need an integral rep (shift = 0)");
      guarded([&] { ps.over_ring = from_rep_trace(*it->second.integral, ps.word_cap); });
    } else if (auto jt = f_.families.find(name); jt != f_.families.end()) {
      guarded([&] { ps.over_model = from_rep_trace(jt->second, ps.word_cap); });
      ps.model = jt->second.model;
    } else {
      err("unresolved-reference", &src, "undeclared rep or family '" + name + "'");
    }
    f_.pseudoreps.emplace(b_->name, std::move(ps));
  }

  void audit() {
    allow({"n", "extensions", "samples", "word_cap", "seed", "budget", "domain", "target",
           "other", "points"});
    AuditSpec a;
    a.name = b_->name;
    a.line = b_->line;
    a.n = static_cast<int>(integer("n", 1));
    a.samples = static_cast<int>(integer("samples", 12));
    a.word_cap = static_cast<int>(integer("word_cap", 1));
    a.seed = static_cast<std::uint64_t>(integer("seed", 1));
    a.budget = static_cast<int>(integer("budget", 4));
    if (a.n < 1)
      err("invariant", b_->find("n"), "n must be at least 1");
    if (const Entry *e = b_->find("extensions"))
      for (const auto &x : names(*e)) {
        if (!f_.contexts.count(x))
          err("unresolved-reference", e, "undeclared context '" + x + "'");
        a.extensions.push_back(x);
      }
    if (const Entry *e = b_->find("domain"))
      a.domain = (ref(f_.domains, *e, "domain"), e->value);
    if (const Entry *e = b_->find("points"))
      for (const auto &x : names(*e)) {
        if (!f_.points.count(x))
          err("unresolved-reference", e, "undeclared point '" + x + "'");
        a.points.push_back(x);
      }
    for (const char *key : {"target", "other"})
      if (const Entry *e = b_->find(key)) {
        const std::string x = value(*e, ident_value);
        if (!f_.families.count(x) && !f_.reps.count(x) && !f_.pseudoreps.count(x))
          err("unresolved-reference", e, "undeclared family, rep or pseudorep '" + x + "'");
        (std::string(key) == "target" ? a.target : a.other) = x;
      }
    f_.audits.push_back(std::move(a));
  }
};

} // namespace

SpecFile parse_spec(const std::string &text, std::optional<int> precision_override) {
  SpecFile f;
  f.tree = parse_tree(text);
  Builder(f, precision_override).run();
  return f;
}

SpecFile load_spec(const std::string &path, std::optional<int> precision_override) {
  std::ifstream in(path);
  if (!in)
    throw SpecError("syntax", 0, 0, "cannot read spec file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str(), precision_override);
}

Element parse_element(const std::string &text, const CtxPtr &ctx) {
  try {
    return element_expr(normalize(text), 0, ctx);
  } catch (const ValueError &v) {
    throw SpecError("syntax", 1, v.offset + 1, v.msg);
  }
}

GroupPresentation parse_group(const std::string &text) {
  try {
    return group_value(normalize(text), 0);
  } catch (const ValueError &v) {
    throw SpecError("syntax", 1, v.offset + 1, v.msg);
  }
}

} // namespace padic::cli
