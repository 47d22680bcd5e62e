#include "sofic/words.hpp"

#include <cctype>
#include <cstdlib>

#include "sofic/error.hpp"

namespace sofic {

namespace {

void check_same_rank(const Word& a, const Word& b, const char* op) {
  if (a.rank() != b.rank())
    throw MalformedInput(std::string(op) + ": rank mismatch " + std::to_string(a.rank()) + " vs " +
                         std::to_string(b.rank()));
}

// Position of a letter in the order x1 < X1 < x2 < X2 < ...
int letter_key(Letter l) { return 2 * (std::abs(l) - 1) + (l < 0 ? 1 : 0); }

}  // namespace

Word::Word(int rank) : rank_(rank) {
  if (rank < 1) throw MalformedInput("free group rank must be positive");
}

Word reduce(std::span<const Letter> letters, int rank) {
  Word w(rank);
  for (auto l : letters) {
    if (l == 0 || std::abs(l) > rank)
      throw MalformedInput("generator index " + std::to_string(l) + " outside rank " + std::to_string(rank));
    if (!w.letters_.empty() && w.letters_.back() == -l) {
      w.letters_.pop_back();
    } else {
      w.letters_.push_back(l);
    }
  }
  return w;
}

Word generator(int rank, int index) {
  Letter l = index;
  return reduce(std::span<const Letter>(&l, 1), rank);
}

Word mul(const Word& a, const Word& b) {
  check_same_rank(a, b, "mul");
  std::vector<Letter> joined(a.letters().begin(), a.letters().end());
  joined.insert(joined.end(), b.letters().begin(), b.letters().end());
  return reduce(joined, a.rank());
}

Word inv(const Word& a) {
  std::vector<Letter> reversed(a.letters().rbegin(), a.letters().rend());
  for (auto& l : reversed) l = -l;
  return reduce(reversed, a.rank());
}

Word conj(const Word& a, const Word& c) {
  check_same_rank(a, c, "conj");
  return mul(mul(inv(c), a), c);
}

std::strong_ordering shortlex(const Word& a, const Word& b) {
  if (auto c = a.length() <=> b.length(); c != 0) return c;
  for (std::size_t i = 0; i < a.length(); ++i)
    if (auto c = letter_key(a.letters()[i]) <=> letter_key(b.letters()[i]); c != 0) return c;
  return std::strong_ordering::equal;
}

std::vector<Word> ball(int rank, int radius) {
  if (radius < 0) throw MalformedInput("ball radius must be nonnegative");
  std::vector<Letter> alphabet;
  for (int i = 1; i <= rank; ++i) {
    alphabet.push_back(i);
    alphabet.push_back(-i);
  }
  std::vector<Word> out{Word(rank)};
  std::size_t layer_begin = 0;
  for (int len = 1; len <= radius; ++len) {
    const std::size_t layer_end = out.size();
    for (std::size_t k = layer_begin; k < layer_end; ++k) {
      for (auto l : alphabet) {
        const auto& prefix = out[k];
        if (!prefix.is_identity() && prefix.letters().back() == -l) continue;
        std::vector<Letter> letters(prefix.letters().begin(), prefix.letters().end());
        letters.push_back(l);
        out.push_back(reduce(letters, rank));
      }
    }
    layer_begin = layer_end;
  }
  return out;
}

std::size_t ball_size(int rank, int radius) {
  std::size_t total = 1, layer = 2 * static_cast<std::size_t>(rank);
  for (int l = 1; l <= radius; ++l) {
    total += layer;
    layer *= 2 * static_cast<std::size_t>(rank) - 1;
  }
  return total;
}

namespace {

class WordParser {
 public:
  WordParser(std::string_view text, int rank) : text_(text), rank_(rank) {}

  Word parse() {
    auto letters = sequence();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return reduce(letters, rank_);
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw MalformedInput("bad word '" + std::string(text_) + "' at column " + std::to_string(pos_ + 1) + ": " + why);
  }

  void skip() {
    while (pos_ < text_.size() && (std::isspace(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '*'))
      ++pos_;
  }

  bool at_end() { return skip(), pos_ >= text_.size(); }

  std::vector<Letter> sequence() {
    std::vector<Letter> out;
    while (!at_end() && text_[pos_] != ')') {
      auto item = atom();
      skip();
      if (pos_ < text_.size() && text_[pos_] == '^') {
        ++pos_;
        item = power(item, exponent());
      }
      out.insert(out.end(), item.begin(), item.end());
    }
    return out;
  }

  long exponent() {
    skip();
    bool negative = false;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) negative = text_[pos_++] == '-';
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) fail("exponent expected");
    long k = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      k = k * 10 + (text_[pos_++] - '0');
      if (k > 100000) fail("exponent too large");
    }
    return negative ? -k : k;
  }

  static std::vector<Letter> power(const std::vector<Letter>& base, long k) {
    std::vector<Letter> unit = base;
    if (k < 0) {
      unit.assign(base.rbegin(), base.rend());
      for (auto& l : unit) l = -l;
      k = -k;
    }
    std::vector<Letter> out;
    for (long i = 0; i < k; ++i) out.insert(out.end(), unit.begin(), unit.end());
    return out;
  }

  std::vector<Letter> atom() {
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto inner = sequence();
      if (pos_ >= text_.size() || text_[pos_] != ')') fail("missing ')'");
      ++pos_;
      return inner;
    }
    if (c == 'e' || c == '1') {
      ++pos_;
      return {};
    }
    int sign = std::isupper(static_cast<unsigned char>(c)) ? -1 : 1;
    char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    int index = 0;
    if (lower == 'x') {
      ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          index = index * 10 + (text_[pos_++] - '0');
          if (index > 1000000) fail("generator index too large");
        }
      } else {
        index = 1;
      }
    } else if (lower == 'y' || lower == 'z') {
      ++pos_;
      index = lower == 'y' ? 2 : 3;
    } else {
      fail("unexpected '" + std::string(1, c) + "'");
    }
    if (index < 1 || index > rank_)
      fail("generator " + std::to_string(index) + " outside rank " + std::to_string(rank_));
    return {sign * index};
  }

  std::string_view text_;
  int rank_;
  std::size_t pos_ = 0;
};

}  // namespace

Word parse_word(std::string_view text, int rank) { return WordParser(text, rank).parse(); }

std::string to_string(const Word& w) {
  if (w.is_identity()) return "e";
  std::string out;
  for (auto l : w.letters()) {
    const int i = std::abs(l);
    if (w.rank() <= 2) {
      out += static_cast<char>(l > 0 ? (i == 1 ? 'x' : 'y') : (i == 1 ? 'X' : 'Y'));
    } else {
      out += (l > 0 ? 'x' : 'X') + std::to_string(i);
    }
  }
  return out;
}

Elem evaluate(const Word& w, const GenImages& gi) {
  if (w.rank() != gi.rank())
    throw MalformedInput("evaluate: word rank " + std::to_string(w.rank()) + " vs " + std::to_string(gi.rank()) +
                         " generator images");
  const auto& g = *gi.group;
  Elem result = FiniteGroup::identity();
  for (auto l : w.letters()) {
    Elem image = gi.images[static_cast<std::size_t>(std::abs(l) - 1)];
    result = g.mul(result, l > 0 ? image : g.inv(image));
  }
  return result;
}

}  // namespace sofic
