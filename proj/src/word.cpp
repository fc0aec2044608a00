#include "cubefix/word.hpp"
#include "cubefix/error.hpp"

#include <algorithm>
#include <cctype>

namespace cubefix {

Word inverse(const Word& w) {
    Word r(w.rbegin(), w.rend());
    for (auto& l : r) l = inverse(l);
    return r;
}

Word concat(const Word& u, const Word& v) {
    Word r = u;
    r.insert(r.end(), v.begin(), v.end());
    return r;
}

bool is_reduced(const Word& w) {
    for (size_t i = 1; i < w.size(); ++i)
        if (w[i] == inverse(w[i - 1])) return false;
    return true;
}

bool is_cyclically_reduced(const Word& w) {
    return is_reduced(w) && (w.size() < 2 || w.front() != inverse(w.back()));
}

Word free_reduce(const Word& w) {
    Word r;
    for (Letter l : w) {
        if (!r.empty() && r.back() == inverse(l))
            r.pop_back();
        else
            r.push_back(l);
    }
    return r;
}

Word cyclic_reduce(const Word& w) {
    Word r = free_reduce(w);
    size_t i = 0, j = r.size();
    while (j - i >= 2 && r[i] == inverse(r[j - 1])) {
        ++i;
        --j;
    }
    return Word(r.begin() + static_cast<long>(i), r.begin() + static_cast<long>(j));
}

std::vector<Word> prefixes(const Word& w) {
    std::vector<Word> out;
    for (size_t i = 0; i <= w.size(); ++i) out.emplace_back(w.begin(), w.begin() + static_cast<long>(i));
    return out;
}

std::vector<Word> suffixes(const Word& w) {
    std::vector<Word> out;
    for (size_t i = 0; i <= w.size(); ++i) out.emplace_back(w.end() - static_cast<long>(i), w.end());
    return out;
}

Word parse_word(const std::string& text) {
    Word w;
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (c >= 'a' && c <= 'z') {
            w.push_back(letter(c - 'a', false));
        } else if (c >= 'A' && c <= 'Z') {
            w.push_back(letter(c - 'A', true));
        } else if (c == '\'' && !w.empty()) {
            w.back() = inverse(w.back());
        } else if (c == '1' && text.size() == 1) {
            // "1" denotes the empty word
        } else {
            fail(ErrorKind::Format, "bad word '" + text + "'");
        }
    }
    return w;
}

std::string letter_name(Letter l) {
    std::string s(1, static_cast<char>('a' + generator_of(l)));
    if (is_inverse(l)) s += '\'';
    return s;
}

std::string format_word(const Word& w) {
    std::string s;
    for (Letter l : w) s += letter_name(l);
    return s;
}

}  // namespace cubefix
