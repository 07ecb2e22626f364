#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qdlab {

// A letter is encoded as 2*(generator-1) + (0 for the generator, 1 for its
// inverse), so a=0, a^-1=1, b=2, b^-1=3, ... The encoding makes the inverse
// a single XOR and gives the canonical letter order a < a^-1 < b < b^-1 < ...
// directly as integer order.
using Letter = std::int8_t;

inline constexpr Letter inv_letter(Letter c) { return c ^ 1; }
inline constexpr int letter_gen(Letter c) { return c / 2 + 1; }
inline constexpr int letter_sign(Letter c) { return (c & 1) ? -1 : +1; }
inline constexpr Letter make_letter(int gen, int sign) {
  return static_cast<Letter>(2 * (gen - 1) + (sign < 0 ? 1 : 0));
}

// Freely reduced word; empty vector is the identity e. Equality is
// structural, values are immutable by convention.
using Word = std::vector<Letter>;

// Length-lexicographic order with the letter order above.
struct WordLess {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

bool is_reduced(const Word& w);

// Free reduction of the concatenation xy.
Word multiply(const Word& x, const Word& y);
Word invert(const Word& x);

// gen^k for a single generator, k may be negative.
Word gen_pow(int gen, long k);

// Swap generators 1 and 2, preserving signs. Defined only for words over
// two generators; throws otherwise.
Word alpha(const Word& x);

// Flip the sign of every letter (each generator to its inverse, extended
// letterwise as an automorphism). Commutes with alpha.
Word beta(const Word& x);

// All reduced words of length <= R over d generators, in length-lex order.
std::vector<Word> ball(int R, int d);

bool starts_with(const Word& x, const Word& prefix);

// True iff x lies in W_p for some p in prefixes, where W_p is the set of
// reduced words beginning with p, with the convention W_e = {e}.
bool prefix_member(const Word& x, const std::vector<Word>& prefixes);

// Canonical text form: "a", "A" (= a^-1), "b", "B", ...; identity is "e".
std::string word_text(const Word& w);
Word parse_word(const std::string& s);

}  // namespace qdlab
