#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace horo {

// Letters of the symmetric generating set of the rank-r free group are the
// codes 0..2r-1: generator i (1-based) sits at 2(i-1), its inverse at
// 2(i-1)+1, so inversion is a single bit flip.
using Letter = std::uint8_t;

inline Letter inverse_letter(Letter l) { return l ^ 1u; }
inline bool is_inverse_letter(Letter l) { return (l & 1u) != 0; }
inline int generator_index(Letter l) { return l / 2 + 1; }

// Token alphabet: "a1","a2",... for generators, "A1","A2",... for inverses.
inline std::string letter_token(Letter l) {
  return (is_inverse_letter(l) ? "A" : "a") + std::to_string(generator_index(l));
}

inline Letter parse_letter(std::string_view tok, int rank) {
  if (tok.size() < 2 || (tok[0] != 'a' && tok[0] != 'A'))
    throw std::invalid_argument("bad letter token: " + std::string(tok));
  int idx = 0;
  for (std::size_t i = 1; i < tok.size(); ++i) {
    if (tok[i] < '0' || tok[i] > '9')
      throw std::invalid_argument("bad letter token: " + std::string(tok));
    idx = idx * 10 + (tok[i] - '0');
  }
  if (idx < 1 || idx > rank)
    throw std::invalid_argument("letter index out of range: " + std::string(tok));
  Letter l = static_cast<Letter>(2 * (idx - 1));
  return tok[0] == 'A' ? inverse_letter(l) : l;
}

// A free-group element in reduced form: a backtracking-free letter sequence.
// Immutable value type; |g| is letters().size().
class ReducedWord {
public:
  explicit ReducedWord(int rank) : rank_(check_rank(rank)) {}

  // Reduces the given letter sequence (cancelling adjacent inverse pairs).
  ReducedWord(int rank, const std::vector<Letter>& letters) : rank_(check_rank(rank)) {
    for (Letter l : letters) push_reduce(l);
  }

  static ReducedWord identity(int rank) { return ReducedWord(rank); }

  static ReducedWord generator(int rank, int i, bool inverted = false) {
    ReducedWord w(rank);
    if (i < 1 || i > rank) throw std::invalid_argument("generator index out of range");
    w.letters_.push_back(static_cast<Letter>(2 * (i - 1) + (inverted ? 1 : 0)));
    return w;
  }

  // Parses dot-separated tokens; "e" is the empty word.
  static ReducedWord parse(std::string_view text, int rank) {
    ReducedWord w(rank);
    if (text == "e") return w;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t dot = text.find('.', pos);
      std::string_view tok = text.substr(pos, dot == std::string_view::npos ? dot : dot - pos);
      w.push_reduce(parse_letter(tok, rank));
      if (dot == std::string_view::npos) break;
      pos = dot + 1;
    }
    return w;
  }

  int rank() const { return rank_; }
  const std::vector<Letter>& letters() const { return letters_; }
  int length() const { return static_cast<int>(letters_.size()); }
  bool is_identity() const { return letters_.empty(); }

  std::string str() const {
    if (letters_.empty()) return "e";
    std::string out;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
      if (i) out += '.';
      out += letter_token(letters_[i]);
    }
    return out;
  }

  friend bool operator==(const ReducedWord& a, const ReducedWord& b) {
    return a.rank_ == b.rank_ && a.letters_ == b.letters_;
  }
  friend bool operator!=(const ReducedWord& a, const ReducedWord& b) { return !(a == b); }
  friend bool operator<(const ReducedWord& a, const ReducedWord& b) {
    return a.letters_ < b.letters_;
  }
  friend std::ostream& operator<<(std::ostream& os, const ReducedWord& w) { return os << w.str(); }

  friend ReducedWord multiply(const ReducedWord& g, const ReducedWord& h) {
    if (g.rank_ != h.rank_) throw std::invalid_argument("multiply: rank mismatch");
    ReducedWord out(g.rank_);
    out.letters_ = g.letters_;
    for (Letter l : h.letters_) out.push_reduce(l);
    return out;
  }

  friend ReducedWord inverse(const ReducedWord& g) {
    ReducedWord out(g.rank_);
    out.letters_.reserve(g.letters_.size());
    for (auto it = g.letters_.rbegin(); it != g.letters_.rend(); ++it)
      out.letters_.push_back(inverse_letter(*it));
    return out;
  }

  // Word metric d(g,h) = |g^-1 h|.
  friend int distance(const ReducedWord& g, const ReducedWord& h) {
    if (g.rank_ != h.rank_) throw std::invalid_argument("distance: rank mismatch");
    std::size_t common = 0;
    while (common < g.letters_.size() && common < h.letters_.size() &&
           g.letters_[common] == h.letters_[common])
      ++common;
    return static_cast<int>(g.letters_.size() + h.letters_.size() - 2 * common);
  }

private:
  static int check_rank(int rank) {
    if (rank < 1) throw std::invalid_argument("rank must be positive");
    return rank;
  }

  void push_reduce(Letter l) {
    if (l >= 2 * rank_) throw std::invalid_argument("letter code out of range for rank");
    if (!letters_.empty() && letters_.back() == inverse_letter(l))
      letters_.pop_back();
    else
      letters_.push_back(l);
  }

  int rank_;
  std::vector<Letter> letters_;
};

}  // namespace horo
