#pragma once

// Symbolic itineraries over the alphabet {L, R}.
//
// Index 0 is the leftmost character of the textual form and is the first
// symbol applied when a word is composed into a map.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bcnf {

enum class Symbol : std::uint8_t { L, R };

inline char to_char(Symbol s) { return s == Symbol::L ? 'L' : 'R'; }

class WordParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class Word {
public:
    Word() = default;
    explicit Word(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
        if (symbols_.empty()) throw std::invalid_argument("a word must be nonempty");
    }

    std::size_t size() const { return symbols_.size(); }
    bool empty() const { return symbols_.empty(); }
    Symbol operator[](std::size_t i) const { return symbols_[i]; }
    Symbol front() const { return symbols_.front(); }
    const std::vector<Symbol>& symbols() const { return symbols_; }
    auto begin() const { return symbols_.begin(); }
    auto end() const { return symbols_.end(); }

    std::size_t count(Symbol s) const {
        std::size_t n = 0;
        for (Symbol t : symbols_) n += (t == s);
        return n;
    }

    std::string str() const {
        std::string out;
        out.reserve(symbols_.size());
        for (Symbol s : symbols_) out.push_back(to_char(s));
        return out;
    }

    friend bool operator==(const Word&, const Word&) = default;
    friend std::ostream& operator<<(std::ostream& os, const Word& w) { return os << w.str(); }

private:
    std::vector<Symbol> symbols_;
};

inline Word parse_word(std::string_view text) {
    if (text.empty()) throw WordParseError("empty word");
    std::vector<Symbol> out;
    out.reserve(text.size());
    for (char ch : text) {
        switch (ch) {
            case 'L': out.push_back(Symbol::L); break;
            case 'R': out.push_back(Symbol::R); break;
            default:
                throw WordParseError(std::string("invalid symbol '") + ch + "' in word \"" + std::string(text) + "\"");
        }
    }
    return Word(std::move(out));
}

/// A word is primitive iff it occurs exactly twice in w.w (at offsets 0 and |w|).
inline bool is_primitive(const Word& w) {
    const std::string s = w.str();
    const std::string ss = s + s;
    return ss.find(s, 1) == s.size();
}

/// Cyclic left shift by m, 0 <= m < |w|.
inline Word shift(const Word& w, std::size_t m) {
    if (m >= w.size()) throw std::out_of_range("shift amount must be smaller than the word length");
    std::vector<Symbol> out;
    out.reserve(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out.push_back(w[(i + m) % w.size()]);
    return Word(std::move(out));
}

/// X^k Y. The warning flag is set when X_0 == Y_0, which the infinite
/// coexistence results exclude; the word itself is still well defined.
struct FamilyWord {
    Word word;
    bool leadingSymbolsCoincide = false;
};

inline FamilyWord family_word_checked(const Word& X, int k, const Word& Y) {
    if (k < 0) throw std::invalid_argument("family exponent k must be nonnegative");
    std::vector<Symbol> out;
    out.reserve(static_cast<std::size_t>(k) * X.size() + Y.size());
    for (int j = 0; j < k; ++j) out.insert(out.end(), X.begin(), X.end());
    out.insert(out.end(), Y.begin(), Y.end());
    return {Word(std::move(out)), X.front() == Y.front()};
}

inline Word family_word(const Word& X, int k, const Word& Y) { return family_word_checked(X, k, Y).word; }

inline Word operator""_w(const char* s, std::size_t n) { return parse_word(std::string_view(s, n)); }

}  // namespace bcnf
