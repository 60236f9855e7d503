#pragma once

#include <string>
#include <string_view>
#include <utility>

namespace maintmine {

// Porter suffix-stripping stemmer, reference-implementation variant: step 2
// maps "bli" -> "ble" and "logi" -> "log", and words of one or two letters
// are returned unchanged. Input is expected lowercase; any token containing
// a character outside [a-z] passes through untouched.
class PorterStemmer {
public:
  std::string operator()(std::string_view word) const {
    for (char c : word)
      if (c < 'a' || c > 'z')
        return std::string(word);
    State s{std::string(word), static_cast<int>(word.size()) - 1, 0};
    if (s.k <= 1)
      return s.b;
    s.step1ab();
    if (s.k > 0) {
      s.step1c();
      s.step2();
      s.step3();
      s.step4();
      s.step5();
    }
    return s.b.substr(0, static_cast<std::size_t>(s.k + 1));
  }

private:
  struct State {
    std::string b;
    int k; // index of the last character of the current stem
    int j; // end of the stem preceding a matched suffix

    bool cons(int i) const {
      switch (b[static_cast<std::size_t>(i)]) {
      case 'a':
      case 'e':
      case 'i':
      case 'o':
      case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !cons(i - 1);
      default:
        return true;
      }
    }

    // Number of VC sequences in b[0..j].
    int m() const {
      int n = 0;
      int i = 0;
      for (;; ++i) {
        if (i > j)
          return n;
        if (!cons(i))
          break;
      }
      ++i;
      for (;;) {
        for (;; ++i) {
          if (i > j)
            return n;
          if (cons(i))
            break;
        }
        ++i;
        ++n;
        for (;; ++i) {
          if (i > j)
            return n;
          if (!cons(i))
            break;
        }
        ++i;
      }
    }

    bool vowel_in_stem() const {
      for (int i = 0; i <= j; ++i)
        if (!cons(i))
          return true;
      return false;
    }

    bool double_cons(int i) const {
      if (i < 1)
        return false;
      if (b[static_cast<std::size_t>(i)] != b[static_cast<std::size_t>(i - 1)])
        return false;
      return cons(i);
    }

    // consonant-vowel-consonant ending at i, last consonant not w, x or y
    bool cvc(int i) const {
      if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2))
        return false;
      char ch = b[static_cast<std::size_t>(i)];
      return ch != 'w' && ch != 'x' && ch != 'y';
    }

    bool ends(std::string_view s) {
      const int len = static_cast<int>(s.size());
      if (len > k + 1)
        return false;
      if (std::string_view(b).substr(static_cast<std::size_t>(k - len + 1), s.size()) != s)
        return false;
      j = k - len;
      return true;
    }

    void set_to(std::string_view s) {
      b.replace(static_cast<std::size_t>(j + 1), static_cast<std::size_t>(k - j), s);
      k = j + static_cast<int>(s.size());
      b.resize(static_cast<std::size_t>(k + 1));
    }

    void replace_if_measured(std::string_view s) {
      if (m() > 0)
        set_to(s);
    }

    char at(int i) const { return i < 0 ? '\0' : b[static_cast<std::size_t>(i)]; }

    void step1ab() {
      if (at(k) == 's') {
        if (ends("sses"))
          k -= 2;
        else if (ends("ies"))
          set_to("i");
        else if (at(k - 1) != 's')
          --k;
      }
      b.resize(static_cast<std::size_t>(k + 1));
      if (ends("eed")) {
        if (m() > 0)
          --k;
      } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
        k = j;
        b.resize(static_cast<std::size_t>(k + 1));
        if (ends("at"))
          set_to("ate");
        else if (ends("bl"))
          set_to("ble");
        else if (ends("iz"))
          set_to("ize");
        else if (double_cons(k)) {
          --k;
          char ch = at(k);
          if (ch == 'l' || ch == 's' || ch == 'z')
            ++k;
        } else if (m() == 1 && cvc(k)) {
          j = k;
          set_to("e");
        }
      }
      b.resize(static_cast<std::size_t>(k + 1));
    }

    void step1c() {
      if (ends("y") && vowel_in_stem())
        b[static_cast<std::size_t>(k)] = 'i';
    }

    // Tries each (suffix, replacement) in order; stops at the first suffix
    // that matches whether or not the measure allows the replacement.
    template <std::size_t N>
    void try_rules(const std::pair<std::string_view, std::string_view> (&rules)[N]) {
      for (const auto &[suffix, repl] : rules) {
        if (ends(suffix)) {
          replace_if_measured(repl);
          return;
        }
      }
    }

    void step2() {
      if (k < 1)
        return;
      switch (at(k - 1)) {
      case 'a': {
        static constexpr std::pair<std::string_view, std::string_view> r[] = {{"ational", "ate"}, {"tional", "tion"}};
        try_rules(r);
        break;
      }
      case 'c': {
        static constexpr std::pair<std::string_view, std::string_view> r[] = {{"enci", "ence"}, {"anci", "ance"}};
        try_rules(r);
        break;
      }
      case 'e': {
        static constexpr std::pair<std::string_view, std::string_view> r[] = {{"izer", "ize"}};
        try_rules(r);
        break;
      }
      case 'l': {
        static constexpr std::pair<std::string_view, std::string_view> r[] = {
            {"bli", "ble"}, {"alli", "al"}, {"entli", "ent"}, {"eli", "e"}, {"ousli", "ous"}};
        try_rules(r);
        break;
      }
      case 'o': {
        static constexpr std::pair<std::string_view, std::string_view> r[] = {
            {"ization", "ize"}, {"ation", "ate"}, {"ator", "ate"}};
        try_rules(r);
        break;
      }
      case 's': {
        static constexpr std::pair<std::string_view, std::string_view> r[] = {
            {"alism", "al"}, {"iveness", "ive"}, {"fulness", "ful"}, {"ousness", "ous"}};
        try_rules(r);
        break;
      }
      case 't': {
        static constexpr std::pair<std::string_view, std::string_view> r[] = {
            {"aliti", "al"}, {"iviti", "ive"}, {"biliti", "ble"}};
        try_rules(r);
        break;
      }
      case 'g': {
        static constexpr std::pair<std::string_view, std::string_view> r[] = {{"logi", "log"}};
        try_rules(r);
        break;
      }
      default:
        break;
      }
    }

    void step3() {
      switch (at(k)) {
      case 'e': {
        static constexpr std::pair<std::string_view, std::string_view> r[] = {
            {"icate", "ic"}, {"ative", ""}, {"alize", "al"}};
        try_rules(r);
        break;
      }
      case 'i': {
        static constexpr std::pair<std::string_view, std::string_view> r[] = {{"iciti", "ic"}};
        try_rules(r);
        break;
      }
      case 'l': {
        static constexpr std::pair<std::string_view, std::string_view> r[] = {{"ical", "ic"}, {"ful", ""}};
        try_rules(r);
        break;
      }
      case 's': {
        static constexpr std::pair<std::string_view, std::string_view> r[] = {{"ness", ""}};
        try_rules(r);
        break;
      }
      default:
        break;
      }
    }

    void step4() {
      if (k < 1)
        return;
      bool matched = false;
      switch (at(k - 1)) {
      case 'a':
        matched = ends("al");
        break;
      case 'c':
        matched = ends("ance") || ends("ence");
        break;
      case 'e':
        matched = ends("er");
        break;
      case 'i':
        matched = ends("ic");
        break;
      case 'l':
        matched = ends("able") || ends("ible");
        break;
      case 'n':
        matched = ends("ant") || ends("ement") || ends("ment") || ends("ent");
        break;
      case 'o':
        matched = (ends("ion") && j >= 0 && (at(j) == 's' || at(j) == 't')) || ends("ou");
        break;
      case 's':
        matched = ends("ism");
        break;
      case 't':
        matched = ends("ate") || ends("iti");
        break;
      case 'u':
        matched = ends("ous");
        break;
      case 'v':
        matched = ends("ive");
        break;
      case 'z':
        matched = ends("ize");
        break;
      default:
        break;
      }
      if (matched && m() > 1) {
        k = j;
        b.resize(static_cast<std::size_t>(k + 1));
      }
    }

    void step5() {
      j = k;
      if (at(k) == 'e') {
        int a = m();
        if (a > 1 || (a == 1 && !cvc(k - 1)))
          --k;
      }
      if (at(k) == 'l' && double_cons(k) && m() > 1)
        --k;
      b.resize(static_cast<std::size_t>(k + 1));
    }
  };
};

inline std::string stem(std::string_view word) { return PorterStemmer{}(word); }

} // namespace maintmine
