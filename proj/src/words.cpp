#include "qdlab/words.hpp"

#include <stdexcept>

namespace qdlab {

bool is_reduced(const Word& w) {
  for (size_t i = 1; i < w.size(); ++i)
    if (w[i] == inv_letter(w[i - 1])) return false;
  return true;
}

Word multiply(const Word& x, const Word& y) {
  Word out = x;
  for (Letter c : y) {
    if (!out.empty() && out.back() == inv_letter(c))
      out.pop_back();
    else
      out.push_back(c);
  }
  return out;
}

Word invert(const Word& x) {
  Word out;
  out.reserve(x.size());
  for (auto it = x.rbegin(); it != x.rend(); ++it)
    out.push_back(inv_letter(*it));
  return out;
}

Word gen_pow(int gen, long k) {
  Letter c = make_letter(gen, k < 0 ? -1 : +1);
  Word out(static_cast<size_t>(k < 0 ? -k : k), c);
  return out;
}

Word alpha(const Word& x) {
  Word out;
  out.reserve(x.size());
  for (Letter c : x) {
    if (c > 3) throw std::invalid_argument("alpha: word has generators beyond the first two");
    out.push_back(static_cast<Letter>(c ^ 2));
  }
  return out;
}

Word beta(const Word& x) {
  Word out;
  out.reserve(x.size());
  for (Letter c : x) out.push_back(inv_letter(c));
  return out;
}

std::vector<Word> ball(int R, int d) {
  if (R < 0) throw std::invalid_argument("ball: R must be nonnegative");
  if (d < 2) throw std::invalid_argument("ball: d must be at least 2");
  std::vector<Word> out;
  out.push_back(Word{});
  size_t sphere_begin = 0, sphere_end = 1;
  for (int len = 1; len <= R; ++len) {
    // Extending each word of the previous sphere by every non-cancelling
    // letter in letter order keeps the whole output length-lex sorted.
    for (size_t i = sphere_begin; i < sphere_end; ++i) {
      for (Letter c = 0; c < 2 * d; ++c) {
        if (!out[i].empty() && c == inv_letter(out[i].back())) continue;
        Word w = out[i];
        w.push_back(c);
        out.push_back(std::move(w));
      }
    }
    sphere_begin = sphere_end;
    sphere_end = out.size();
  }
  return out;
}

bool starts_with(const Word& x, const Word& prefix) {
  if (prefix.size() > x.size()) return false;
  for (size_t i = 0; i < prefix.size(); ++i)
    if (x[i] != prefix[i]) return false;
  return true;
}

bool prefix_member(const Word& x, const std::vector<Word>& prefixes) {
  for (const Word& p : prefixes) {
    if (p.empty()) {
      if (x.empty()) return true;  // W_e = {e}
    } else if (starts_with(x, p)) {
      return true;
    }
  }
  return false;
}

std::string word_text(const Word& w) {
  if (w.empty()) return "e";
  std::string s;
  s.reserve(w.size());
  for (Letter c : w) {
    char base = static_cast<char>('a' + letter_gen(c) - 1);
    s.push_back(letter_sign(c) > 0 ? base : static_cast<char>(base - 'a' + 'A'));
  }
  return s;
}

Word parse_word(const std::string& s) {
  if (s == "e" || s.empty()) return Word{};
  Word w;
  w.reserve(s.size());
  for (char ch : s) {
    int gen, sign;
    if (ch >= 'a' && ch <= 'z') {
      gen = ch - 'a' + 1;
      sign = +1;
    } else if (ch >= 'A' && ch <= 'Z') {
      gen = ch - 'A' + 1;
      sign = -1;
    } else {
      throw std::invalid_argument("parse_word: bad character in word");
    }
    w.push_back(make_letter(gen, sign));
  }
  if (!is_reduced(w)) throw std::invalid_argument("parse_word: word is not reduced");
  return w;
}

}  // namespace qdlab
