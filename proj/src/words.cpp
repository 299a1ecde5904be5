#include "towernorm/words.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace towernorm {

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

char letter_name(Letter l) {
  int g = generator_of(l);
  return static_cast<char>((is_inverse(l) ? 'A' : 'a') + g);
}

Word Word::from_letters(std::span<const Letter> letters) {
  Word w;
  w.letters_.reserve(letters.size());
  for (Letter l : letters) {
    if (!w.letters_.empty() && w.letters_.back() == inverse_letter(l)) {
      w.letters_.pop_back();
    } else {
      w.letters_.push_back(l);
    }
  }
  return w;
}

Word Word::inverse() const {
  Word w;
  w.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) {
    w.letters_.push_back(inverse_letter(*it));
  }
  return w;
}

Word operator*(const Word& u, const Word& v) {
  Word w = u;
  for (Letter l : v.letters_) {
    if (!w.letters_.empty() && w.letters_.back() == inverse_letter(l)) {
      w.letters_.pop_back();
    } else {
      w.letters_.push_back(l);
    }
  }
  return w;
}

std::strong_ordering Word::operator<=>(const Word& o) const {
  if (letters_.size() != o.letters_.size()) {
    return letters_.size() <=> o.letters_.size();
  }
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (letters_[i] != o.letters_[i]) return letters_[i] <=> o.letters_[i];
  }
  return std::strong_ordering::equal;
}

int Word::max_generator() const {
  int m = -1;
  for (Letter l : letters_) m = std::max(m, generator_of(l));
  return m;
}

std::string Word::str() const {
  if (letters_.empty()) return "e";
  std::string s;
  s.reserve(letters_.size());
  for (Letter l : letters_) s.push_back(letter_name(l));
  return s;
}

Word parse_word(std::string_view text) {
  std::vector<Letter> letters;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == 'e' || c == 'E') continue;  // identity token
    if (c >= 'a' && c < 'a' + kMaxGenerators) {
      letters.push_back(static_cast<Letter>(2 * (c - 'a')));
    } else if (c >= 'A' && c < 'A' + kMaxGenerators) {
      letters.push_back(static_cast<Letter>(2 * (c - 'A') + 1));
    } else {
      throw ParseError(std::string("unexpected character '") + c + "' in word", i);
    }
  }
  return Word::from_letters(letters);
}

GroupAlgebraElement GroupAlgebraElement::delta(const Word& w, Complex c) {
  GroupAlgebraElement a;
  a.add_term(w, c);
  return a;
}

void GroupAlgebraElement::add_term(const Word& w, Complex c) {
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
  }
  if (it->second == Complex(0.0, 0.0)) terms_.erase(it);
}

int GroupAlgebraElement::support_radius() const {
  int r = 0;
  for (const auto& [w, c] : terms_) r = std::max(r, w.length());
  return r;
}

int GroupAlgebraElement::max_generator() const {
  int m = -1;
  for (const auto& [w, c] : terms_) m = std::max(m, w.max_generator());
  return m;
}

double GroupAlgebraElement::one_norm() const {
  double s = 0;
  for (const auto& [w, c] : terms_) s += std::abs(c);
  return s;
}

bool GroupAlgebraElement::all_real(double tol) const {
  for (const auto& [w, c] : terms_) {
    if (std::abs(c.imag()) > tol) return false;
  }
  return true;
}

GroupAlgebraElement GroupAlgebraElement::adjoint() const {
  GroupAlgebraElement a;
  for (const auto& [w, c] : terms_) a.add_term(w.inverse(), std::conj(c));
  return a;
}

bool GroupAlgebraElement::is_self_adjoint(double tol) const {
  GroupAlgebraElement diff = *this + Complex(-1.0) * adjoint();
  for (const auto& [w, c] : diff.terms()) {
    if (std::abs(c) > tol) return false;
  }
  return true;
}

GroupAlgebraElement operator*(const GroupAlgebraElement& u,
                              const GroupAlgebraElement& v) {
  GroupAlgebraElement out;
  for (const auto& [wu, cu] : u.terms_) {
    for (const auto& [wv, cv] : v.terms_) {
      out.add_term(wu * wv, cu * cv);
    }
  }
  return out;
}

GroupAlgebraElement operator+(const GroupAlgebraElement& u,
                              const GroupAlgebraElement& v) {
  GroupAlgebraElement out = u;
  for (const auto& [w, c] : v.terms_) out.add_term(w, c);
  return out;
}

GroupAlgebraElement operator*(Complex c, const GroupAlgebraElement& u) {
  GroupAlgebraElement out;
  if (c == Complex(0.0, 0.0)) return out;
  for (const auto& [w, cw] : u.terms_) out.add_term(w, c * cw);
  return out;
}

std::string GroupAlgebraElement::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    if (c.imag() == 0.0) {
      os << fmt_double(c.real());
    } else {
      os << "(" << fmt_double(c.real()) << (c.imag() < 0 ? "-" : "+")
         << fmt_double(std::abs(c.imag())) << "i)";
    }
    os << "*" << w.str();
  }
  return os.str();
}

namespace {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
  }
  bool done() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() { return text[pos]; }
};

bool is_word_char(char c) {
  return (c >= 'a' && c < 'a' + kMaxGenerators) ||
         (c >= 'A' && c < 'A' + kMaxGenerators) || c == 'e' || c == 'E';
}

// Decimal with optional exponent; the exponent 'e' is only consumed when
// followed by a digit so that "2*e" keeps its identity word.
double parse_scalar(Cursor& cur) {
  std::size_t start = cur.pos;
  std::size_t i = cur.pos;
  while (i < cur.text.size() &&
         (std::isdigit(static_cast<unsigned char>(cur.text[i])) ||
          cur.text[i] == '.')) {
    ++i;
  }
  if (i == start) throw ParseError("expected a number", start);
  if (i < cur.text.size() && (cur.text[i] == 'e' || cur.text[i] == 'E')) {
    std::size_t j = i + 1;
    if (j < cur.text.size() && (cur.text[j] == '+' || cur.text[j] == '-')) ++j;
    if (j < cur.text.size() &&
        std::isdigit(static_cast<unsigned char>(cur.text[j]))) {
      i = j;
      while (i < cur.text.size() &&
             std::isdigit(static_cast<unsigned char>(cur.text[i]))) {
        ++i;
      }
    }
  }
  double value;
  auto res = std::from_chars(cur.text.data() + start, cur.text.data() + i, value);
  if (res.ec != std::errc() || res.ptr != cur.text.data() + i) {
    throw ParseError("malformed number", start);
  }
  cur.pos = i;
  return value;
}

Word parse_word_token(Cursor& cur) {
  std::vector<Letter> letters;
  std::size_t start = cur.pos;
  while (cur.pos < cur.text.size() && is_word_char(cur.text[cur.pos])) {
    char c = cur.text[cur.pos];
    if (c != 'e' && c != 'E') {
      if (c >= 'a') {
        letters.push_back(static_cast<Letter>(2 * (c - 'a')));
      } else {
        letters.push_back(static_cast<Letter>(2 * (c - 'A') + 1));
      }
    }
    ++cur.pos;
  }
  if (cur.pos == start) throw ParseError("expected a word", cur.pos);
  return Word::from_letters(letters);
}

}  // namespace

GroupAlgebraElement parse_element(std::string_view text) {
  GroupAlgebraElement out;
  Cursor cur{text};
  if (cur.done()) throw ParseError("empty element", 0);
  bool first = true;
  while (!cur.done()) {
    double sign = 1.0;
    if (!first || cur.peek() == '+' || cur.peek() == '-') {
      char op = cur.peek();
      if (op != '+' && op != '-') {
        throw ParseError("expected '+' or '-' between terms", cur.pos);
      }
      sign = (op == '-') ? -1.0 : 1.0;
      ++cur.pos;
      if (cur.done()) throw ParseError("dangling sign", cur.pos);
      // One signed scalar may follow the operator ("a + -1*b").
      if (cur.peek() == '+' || cur.peek() == '-') {
        if (cur.peek() == '-') sign = -sign;
        ++cur.pos;
        if (cur.done()) throw ParseError("dangling sign", cur.pos);
      }
    }
    first = false;

    char c = cur.peek();
    double scalar = 1.0;
    bool have_scalar = false;
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      scalar = parse_scalar(cur);
      have_scalar = true;
    }
    Word w;  // identity unless a word follows
    if (have_scalar) {
      cur.skip_ws();
      if (!cur.done() && cur.peek() == '*') {
        ++cur.pos;
        cur.skip_ws();
        if (cur.done() || !is_word_char(cur.peek())) {
          throw ParseError("expected a word after '*'", cur.pos);
        }
        w = parse_word_token(cur);
      } else if (!cur.done() && is_word_char(cur.peek())) {
        throw ParseError("missing '*' between scalar and word", cur.pos);
      }
    } else if (is_word_char(c)) {
      w = parse_word_token(cur);
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", cur.pos);
    }
    out.add_term(w, sign * scalar);
  }
  return out;
}

GroupAlgebraElement averaging_element(int n_gens) {
  GroupAlgebraElement a;
  double c = 1.0 / (2.0 * n_gens);
  for (int g = 0; g < n_gens; ++g) {
    Letter pos = static_cast<Letter>(2 * g);
    a.add_term(Word::from_letters(std::span<const Letter>(&pos, 1)), c);
    Letter neg = inverse_letter(pos);
    a.add_term(Word::from_letters(std::span<const Letter>(&neg, 1)), c);
  }
  return a;
}

}  // namespace towernorm
