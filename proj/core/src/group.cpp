#include "padic/group.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace padic {

std::string word_str(const Word &w, const std::vector<std::string> &gens) {
  if (w.empty())
    return "1";
  std::string s;
  for (size_t i = 0; i < w.size();) {
    size_t j = i;
    while (j < w.size() && w[j] == w[i])
      ++j;
    const int k = static_cast<int>(j - i) * (w[i] > 0 ? 1 : -1);
    if (!s.empty())
      s += "*";
    s += gens.at(std::abs(w[i]) - 1);
    if (k != 1)
      s += "^" + std::to_string(k);
    i = j;
  }
  return s;
}

GroupPresentation GroupPresentation::free(std::vector<std::string> gens) {
  if (gens.empty())
    throw std::invalid_argument("free group needs at least one generator");
  GroupPresentation g;
  g.kind_ = Kind::Free;
  g.gens_ = std::move(gens);
  return g;
}

GroupPresentation GroupPresentation::from_permutations(std::vector<std::string> gens,
                                                       const std::vector<std::vector<int>> &perms) {
  if (gens.size() != perms.size() || perms.empty())
    throw std::invalid_argument("one permutation per generator is required");
  const size_t k = perms[0].size();
  for (const auto &p : perms) {
    std::vector<int> s = p;
    std::sort(s.begin(), s.end());
    for (size_t i = 0; i < s.size(); ++i)
      if (p.size() != k || s[i] != static_cast<int>(i))
        throw std::invalid_argument("generator is not a permutation of 0..k-1");
  }
  // (a*b)(x) = a(b(x))
  auto compose = [](const std::vector<int> &a, const std::vector<int> &b) {
    std::vector<int> c(a.size());
    for (size_t x = 0; x < a.size(); ++x)
      c[x] = a[b[x]];
    return c;
  };
  std::vector<int> id(k);
  for (size_t i = 0; i < k; ++i)
    id[i] = static_cast<int>(i);
  std::map<std::vector<int>, int> index{{id, 0}};
  std::vector<std::vector<int>> elems{id};
  for (size_t q = 0; q < elems.size(); ++q)
    for (const auto &s : perms) {
      auto c = compose(elems[q], s);
      if (!index.count(c)) {
        index[c] = static_cast<int>(elems.size());
        elems.push_back(c);
        if (elems.size() > 100000)
          throw std::invalid_argument("permutation group too large");
      }
    }
  const int n = static_cast<int>(elems.size());
  std::vector<int> table(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      table[a * n + b] = index.at(compose(elems[a], elems[b]));
  std::vector<int> ge;
  for (const auto &s : perms)
    ge.push_back(index.at(s));
  return from_table(std::move(gens), n, std::move(table), std::move(ge));
}

GroupPresentation GroupPresentation::from_table(std::vector<std::string> gens, int order,
                                                std::vector<int> table,
                                                std::vector<int> gen_elems) {
  if (order < 1 || table.size() != static_cast<size_t>(order) * order)
    throw std::invalid_argument("group table has the wrong size");
  for (int v : table)
    if (v < 0 || v >= order)
      throw std::invalid_argument("group table entry out of range");
  if (gens.size() != gen_elems.size())
    throw std::invalid_argument("one element per generator is required");
  GroupPresentation g;
  g.kind_ = Kind::Finite;
  g.gens_ = std::move(gens);
  g.order_ = order;
  g.table_ = std::move(table);
  g.gen_elems_ = std::move(gen_elems);
  for (int x = 0; x < order; ++x)
    if (g.mul(0, x) != x || g.mul(x, 0) != x)
      throw std::invalid_argument("element 0 must be the identity");
  for (int a = 0; a < order; ++a)
    for (int b = 0; b < order; ++b)
      for (int c = 0; c < order; ++c)
        if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)))
          throw std::invalid_argument("group table is not associative");
  g.inv_.assign(order, -1);
  for (int a = 0; a < order; ++a)
    for (int b = 0; b < order; ++b)
      if (g.mul(a, b) == 0 && g.mul(b, a) == 0)
        g.inv_[a] = b;
  if (std::count(g.inv_.begin(), g.inv_.end(), -1))
    throw std::invalid_argument("group table lacks inverses");
  for (int e : g.gen_elems_)
    if (e < 0 || e >= order)
      throw std::invalid_argument("generator element out of range");
  g.finish_finite();
  return g;
}

void GroupPresentation::finish_finite() {
  words_.assign(order_, Word());
  std::vector<bool> seen(order_, false);
  seen[0] = true;
  std::queue<int> q;
  q.push(0);
  while (!q.empty()) {
    const int a = q.front();
    q.pop();
    for (int i = 0; i < ngens(); ++i) {
      const int b = mul(a, gen_elems_[i]);
      if (!seen[b]) {
        seen[b] = true;
        words_[b] = words_[a];
        words_[b].push_back(i + 1);
        q.push(b);
      }
    }
  }
  if (std::count(seen.begin(), seen.end(), false))
    throw std::invalid_argument("generators do not generate the group");
}

GroupPresentation GroupPresentation::cyclic(int n) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i)
    p[i] = (i + 1) % n;
  return from_permutations({"g"}, {p});
}

GroupPresentation GroupPresentation::symmetric(int n) {
  if (n < 2)
    throw std::invalid_argument("symmetric group needs n >= 2");
  std::vector<int> s(n), c(n);
  for (int i = 0; i < n; ++i) {
    s[i] = i;
    c[i] = (i + 1) % n;
  }
  std::swap(s[0], s[1]);
  return from_permutations({"s", "c"}, {s, c});
}

int GroupPresentation::element_of(const Word &w) const {
  if (!finite())
    throw std::logic_error("element_of needs a finite group");
  int a = 0;
  for (int l : w) {
    const int k = std::abs(l) - 1;
    if (k < 0 || k >= ngens())
      throw std::invalid_argument("letter outside the generators");
    a = mul(a, l > 0 ? gen_elems_[k] : inv_[gen_elems_[k]]);
  }
  return a;
}

Word GroupPresentation::canonical(const Word &w) const {
  if (finite())
    return words_[element_of(w)];
  Word r;
  for (int l : w) {
    if (l == 0 || std::abs(l) > ngens())
      throw std::invalid_argument("letter outside the generators");
    if (!r.empty() && r.back() == -l)
      r.pop_back();
    else
      r.push_back(l);
  }
  return r;
}

std::vector<Word> GroupPresentation::words_up_to(int len) const {
  if (finite())
    return words_;
  std::vector<Word> out{Word{}};
  size_t start = 0;
  for (int l = 1; l <= len; ++l) {
    const size_t end = out.size();
    for (size_t i = start; i < end; ++i)
      for (int g = 1; g <= ngens(); ++g)
        for (int s : {g, -g}) {
          if (!out[i].empty() && out[i].back() == -s)
            continue;
          Word w = out[i];
          w.push_back(s);
          out.push_back(std::move(w));
        }
    start = end;
  }
  return out;
}

Word GroupPresentation::inverse(const Word &w) const {
  Word r(w.rbegin(), w.rend());
  for (int &l : r)
    l = -l;
  return canonical(r);
}

Word GroupPresentation::concat(const Word &a, const Word &b) const {
  Word r = a;
  r.insert(r.end(), b.begin(), b.end());
  return canonical(r);
}

Word GroupPresentation::parse_word(const std::string &s) const {
  Word w;
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c)))
      t += c;
  if (t.empty() || t == "1")
    return w;
  std::stringstream ss(t);
  std::string tok;
  while (std::getline(ss, tok, '*')) {
    std::string name = tok;
    int k = 1;
    const auto caret = tok.find('^');
    if (caret != std::string::npos) {
      name = tok.substr(0, caret);
      try {
        size_t used = 0;
        k = std::stoi(tok.substr(caret + 1), &used);
        if (used != tok.size() - caret - 1)
          throw std::invalid_argument("");
      } catch (const std::exception &) {
        throw std::invalid_argument("bad exponent in word token '" + tok + "'");
      }
    }
    auto it = std::find(gens_.begin(), gens_.end(), name);
    if (it == gens_.end())
      throw std::invalid_argument("unknown generator '" + name + "'");
    const int g = static_cast<int>(it - gens_.begin()) + 1;
    for (int i = 0; i < std::abs(k); ++i)
      w.push_back(k > 0 ? g : -g);
  }
  return finite() ? w : canonical(w);
}

} // namespace padic
