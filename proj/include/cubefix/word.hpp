#pragma once

#include <string>
#include <vector>

namespace cubefix {

// A letter of S^± is encoded as 2*generator + (inverse ? 1 : 0).
using Letter = int;
using Word = std::vector<Letter>;

inline Letter letter(int gen, bool inverse) { return 2 * gen + (inverse ? 1 : 0); }
inline int generator_of(Letter l) { return l >> 1; }
inline bool is_inverse(Letter l) { return (l & 1) != 0; }
inline Letter inverse(Letter l) { return l ^ 1; }

Word inverse(const Word& w);
Word concat(const Word& u, const Word& v);
bool is_reduced(const Word& w);
bool is_cyclically_reduced(const Word& w);
Word free_reduce(const Word& w);
Word cyclic_reduce(const Word& w);

// pre(w) and suf(w), each with |w|+1 elements ordered by length.
std::vector<Word> prefixes(const Word& w);
std::vector<Word> suffixes(const Word& w);

// Text form: generators a..z, inverse marked with a trailing apostrophe ("ab'a").
// Uppercase letters are also accepted on input as inverses.
Word parse_word(const std::string& text);
std::string format_word(const Word& w);
std::string letter_name(Letter l);

}  // namespace cubefix
