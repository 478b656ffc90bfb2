#pragma once

#include <string>
#include <vector>

namespace padic {

// Letters are 1-based generator indices; -k is the inverse of generator k.
using Word = std::vector<int>;

std::string word_str(const Word &w, const std::vector<std::string> &gens);

class GroupPresentation {
public:
  enum class Kind { Free, Finite };

  static GroupPresentation free(std::vector<std::string> gens);
  // Closure of the given permutations (images of 0..k-1); elements are
  // numbered in breadth-first order from the identity.
  static GroupPresentation from_permutations(std::vector<std::string> gens,
                                             const std::vector<std::vector<int>> &perms);
  // Checks identity, associativity and inverses; gen_elems index the table.
  static GroupPresentation from_table(std::vector<std::string> gens, int order,
                                      std::vector<int> table, std::vector<int> gen_elems);
  static GroupPresentation cyclic(int n);
  static GroupPresentation symmetric(int n); // generators (0 1) and (0 1 ... n-1)

  Kind kind() const { return kind_; }
  bool finite() const { return kind_ == Kind::Finite; }
  const std::vector<std::string> &gens() const { return gens_; }
  int ngens() const { return static_cast<int>(gens_.size()); }

  // finite groups
  int order() const { return order_; }
  int mul(int a, int b) const { return table_[a * order_ + b]; }
  int inv(int a) const { return inv_[a]; }
  int gen_elem(int i) const { return gen_elems_[i]; }
  int element_of(const Word &w) const;
  const Word &word_of(int elem) const { return words_[elem]; } // shortest, positive letters
  const std::vector<int> &table() const { return table_; }

  // Canonical form: free reduction for free groups, the element's word otherwise.
  Word canonical(const Word &w) const;
  // Free groups: all reduced words of length <= len. Finite: one word per element.
  std::vector<Word> words_up_to(int len) const;
  Word parse_word(const std::string &s) const; // "g*h^-1*g^2", "1" for the empty word
  Word inverse(const Word &w) const;
  Word concat(const Word &a, const Word &b) const;

private:
  void finish_finite();
  Kind kind_ = Kind::Free;
  std::vector<std::string> gens_;
  int order_ = 0;
  std::vector<int> table_, inv_, gen_elems_;
  std::vector<Word> words_;
};

} // namespace padic
