#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "towernorm/util.hpp"

namespace towernorm {

using Complex = std::complex<double>;

// Letters are packed as 2*g for generator g and 2*g+1 for its inverse, so
// inversion is a single XOR.  Printable names: generator g -> 'a'+g, its
// inverse -> 'A'+g.  'e' and 'E' are reserved for the identity.
using Letter = std::uint8_t;

inline constexpr Letter inverse_letter(Letter l) { return l ^ 1; }
inline constexpr int generator_of(Letter l) { return l >> 1; }
inline constexpr bool is_inverse(Letter l) { return l & 1; }
char letter_name(Letter l);

inline constexpr int kMaxGenerators = 4;  // letters a..d and their capitals

// A reduced word in the free group.  The letter sequence never contains a
// letter followed by its inverse.
class Word {
 public:
  Word() = default;

  // Reduces the given sequence.
  static Word from_letters(std::span<const Letter> letters);

  const std::vector<Letter>& letters() const { return letters_; }
  int length() const { return static_cast<int>(letters_.size()); }
  bool is_identity() const { return letters_.empty(); }

  Word inverse() const;
  friend Word operator*(const Word& u, const Word& v);

  bool operator==(const Word& o) const { return letters_ == o.letters_; }
  // Shortlex: by length, then lexicographically by letter code.
  std::strong_ordering operator<=>(const Word& o) const;

  int max_generator() const;  // -1 for the identity
  std::string str() const;

 private:
  std::vector<Letter> letters_;
};

// Accepts letters a..d, A..D, and 'e'/'E' for the identity; whitespace is
// ignored.  Throws ParseError on anything else.
Word parse_word(std::string_view text);

// Finitely supported complex function on the free group with the convolution
// product.  Terms are kept in shortlex order and exact zeros are dropped.
class GroupAlgebraElement {
 public:
  GroupAlgebraElement() = default;
  static GroupAlgebraElement delta(const Word& w, Complex c = 1.0);

  void add_term(const Word& w, Complex c);
  const std::map<Word, Complex>& terms() const { return terms_; }

  int support_size() const { return static_cast<int>(terms_.size()); }
  int support_radius() const;
  int max_generator() const;
  double one_norm() const;
  bool all_real(double tol = 0.0) const;

  GroupAlgebraElement adjoint() const;
  bool is_self_adjoint(double tol = 1e-12) const;

  friend GroupAlgebraElement operator*(const GroupAlgebraElement& u,
                                       const GroupAlgebraElement& v);
  friend GroupAlgebraElement operator+(const GroupAlgebraElement& u,
                                       const GroupAlgebraElement& v);
  friend GroupAlgebraElement operator*(Complex c, const GroupAlgebraElement& u);

  std::string str() const;

 private:
  std::map<Word, Complex> terms_;
};

inline GroupAlgebraElement convolve(const GroupAlgebraElement& u,
                                    const GroupAlgebraElement& v) {
  return u * v;
}

// Grammar: sum of terms "scalar*word", "word", or "scalar"; words over
// a..d/A..D/e; scalars are plain decimals ("0.25", "-1", "2e-3").  A scalar
// is tied to a word only by an explicit '*'.
GroupAlgebraElement parse_element(std::string_view text);

// (1/2k) * sum of the 2k letters of the first n_gens generators.
GroupAlgebraElement averaging_element(int n_gens = 2);

}  // namespace towernorm
