#include "summ/textproc.hpp"

#include <cctype>
#include <stdexcept>

namespace summ {

namespace {

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::string clean_piece(const std::string& piece) {
  std::string out;
  out.reserve(piece.size());
  for (size_t i = 0; i < piece.size(); ++i) {
    char c = piece[i];
    if (is_alnum(c)) {
      out.push_back(c);
    } else if ((c == '-' || c == '\'') && i > 0 && i + 1 < piece.size() &&
               is_alnum(piece[i - 1]) && is_alnum(piece[i + 1])) {
      out.push_back(c);
    }
  }
  return out;
}

// --- Porter stemmer, after the 1980 paper. Works on w[0..k]; j marks the
// --- stem end while a suffix is under consideration.

struct Stemmer {
  std::string w;
  int k = 0;  // last valid index
  int j = 0;

  bool cons(int i) const {
    switch (w[i]) {
      case 'a': case 'e': case 'i': case 'o': case 'u': return false;
      case 'y': return i == 0 ? true : !cons(i - 1);
      default: return true;
    }
  }

  // number of VC sequences in w[0..j]
  int m() const {
    int n = 0, i = 0;
    while (true) {
      if (i > j) return n;
      if (!cons(i)) break;
      ++i;
    }
    ++i;
    while (true) {
      while (true) {
        if (i > j) return n;
        if (cons(i)) break;
        ++i;
      }
      ++i;
      ++n;
      while (true) {
        if (i > j) return n;
        if (!cons(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool vowel_in_stem() const {
    for (int i = 0; i <= j; ++i)
      if (!cons(i)) return true;
    return false;
  }

  bool double_c(int i) const { return i >= 1 && w[i] == w[i - 1] && cons(i); }

  // consonant-vowel-consonant ending at i, final consonant not w/x/y
  bool cvc(int i) const {
    if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
    char c = w[i];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends(const char* s) {
    int len = static_cast<int>(std::char_traits<char>::length(s));
    if (len > k + 1) return false;
    if (w.compare(k - len + 1, len, s) != 0) return false;
    j = k - len;
    return true;
  }

  void setto(const char* s) {
    int len = static_cast<int>(std::char_traits<char>::length(s));
    w.replace(j + 1, w.size() - j - 1, s);
    k = j + len;
    w.resize(k + 1);
  }

  void r(const char* s) {
    if (m() > 0) setto(s);
  }

  void step1ab() {
    if (w[k] == 's') {
      if (ends("sses")) k -= 2;
      else if (ends("ies")) setto("i");
      else if (w[k - 1] != 's') --k;
      w.resize(k + 1);
    }
    if (ends("eed")) {
      if (m() > 0) --k, w.resize(k + 1);
    } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
      k = j;
      w.resize(k + 1);
      if (ends("at")) setto("ate");
      else if (ends("bl")) setto("ble");
      else if (ends("iz")) setto("ize");
      else if (double_c(k)) {
        char c = w[k];
        if (c != 'l' && c != 's' && c != 'z') --k, w.resize(k + 1);
      } else {
        j = k;
        if (m() == 1 && cvc(k)) setto("e");
      }
    }
  }

  void step1c() {
    if (ends("y") && vowel_in_stem()) w[k] = 'i';
  }

  void step2() {
    if (k < 1) return;
    switch (w[k - 1]) {
      case 'a':
        if (ends("ational")) { r("ate"); break; }
        if (ends("tional")) { r("tion"); break; }
        break;
      case 'c':
        if (ends("enci")) { r("ence"); break; }
        if (ends("anci")) { r("ance"); break; }
        break;
      case 'e':
        if (ends("izer")) { r("ize"); break; }
        break;
      case 'l':
        if (ends("abli")) { r("able"); break; }
        if (ends("alli")) { r("al"); break; }
        if (ends("entli")) { r("ent"); break; }
        if (ends("eli")) { r("e"); break; }
        if (ends("ousli")) { r("ous"); break; }
        break;
      case 'o':
        if (ends("ization")) { r("ize"); break; }
        if (ends("ation")) { r("ate"); break; }
        if (ends("ator")) { r("ate"); break; }
        break;
      case 's':
        if (ends("alism")) { r("al"); break; }
        if (ends("iveness")) { r("ive"); break; }
        if (ends("fulness")) { r("ful"); break; }
        if (ends("ousness")) { r("ous"); break; }
        break;
      case 't':
        if (ends("aliti")) { r("al"); break; }
        if (ends("iviti")) { r("ive"); break; }
        if (ends("biliti")) { r("ble"); break; }
        break;
      default:
        break;
    }
  }

  void step3() {
    switch (w[k]) {
      case 'e':
        if (ends("icate")) { r("ic"); break; }
        if (ends("ative")) { r(""); break; }
        if (ends("alize")) { r("al"); break; }
        break;
      case 'i':
        if (ends("iciti")) { r("ic"); break; }
        break;
      case 'l':
        if (ends("ical")) { r("ic"); break; }
        if (ends("ful")) { r(""); break; }
        break;
      case 's':
        if (ends("ness")) { r(""); break; }
        break;
      default:
        break;
    }
  }

  void step4() {
    if (k < 1) return;
    switch (w[k - 1]) {
      case 'a': if (ends("al")) break; return;
      case 'c': if (ends("ance")) break; if (ends("ence")) break; return;
      case 'e': if (ends("er")) break; return;
      case 'i': if (ends("ic")) break; return;
      case 'l': if (ends("able")) break; if (ends("ible")) break; return;
      case 'n':
        if (ends("ant")) break;
        if (ends("ement")) break;
        if (ends("ment")) break;
        if (ends("ent")) break;
        return;
      case 'o':
        if (ends("ion") && j >= 0 && (w[j] == 's' || w[j] == 't')) break;
        if (ends("ou")) break;
        return;
      case 's': if (ends("ism")) break; return;
      case 't': if (ends("ate")) break; if (ends("iti")) break; return;
      case 'u': if (ends("ous")) break; return;
      case 'v': if (ends("ive")) break; return;
      case 'z': if (ends("ize")) break; return;
      default: return;
    }
    if (m() > 1) k = j, w.resize(k + 1);
  }

  void step5() {
    j = k;
    if (w[k] == 'e') {
      int a = m();
      if (a > 1 || (a == 1 && !cvc(k - 1))) --k, w.resize(k + 1);
    }
    j = k;
    if (w[k] == 'l' && double_c(k) && m() > 1) --k, w.resize(k + 1);
  }
};

}  // namespace

std::string porter_stem(const std::string& word) {
  if (word.size() <= 2) return word;
  Stemmer st;
  st.w = word;
  st.k = static_cast<int>(word.size()) - 1;
  st.step1ab();
  st.step1c();
  st.step2();
  st.step3();
  st.step4();
  st.step5();
  return st.w;
}

std::vector<Token> normalize_tokens(const std::string& raw, bool stem) {
  std::vector<Token> out;
  std::string piece;
  auto flush = [&] {
    if (piece.empty()) return;
    std::string cleaned = clean_piece(piece);
    piece.clear();
    if (cleaned.empty()) return;
    out.push_back(stem ? porter_stem(cleaned) : cleaned);
  };
  for (char c : raw) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      piece.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  flush();
  return out;
}

NGramCounts ngrams(const std::vector<Token>& tokens, int n) {
  if (n < 1) throw std::invalid_argument("ngram order must be >= 1");
  NGramCounts counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (size_t i = 0; i + n <= tokens.size(); ++i)
    ++counts[std::vector<Token>(tokens.begin() + i, tokens.begin() + i + n)];
  return counts;
}

int lcs_length(const std::vector<Token>& a, const std::vector<Token>& b) {
  const size_t m = a.size(), n = b.size();
  if (m == 0 || n == 0) return 0;
  std::vector<int> prev(n + 1, 0), cur(n + 1, 0);
  for (size_t i = 1; i <= m; ++i) {
    for (size_t j = 1; j <= n; ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

std::vector<int> lcs_union_positions(const std::vector<Token>& ref,
                                     const std::vector<Token>& cand) {
  const int m = static_cast<int>(ref.size());
  const int n = static_cast<int>(cand.size());
  std::vector<int> out;
  if (m == 0 || n == 0) return out;
  // suffix table: L[i][j] = lcs(ref[i:], cand[j:])
  std::vector<std::vector<int>> L(m + 1, std::vector<int>(n + 1, 0));
  for (int i = m - 1; i >= 0; --i)
    for (int j = n - 1; j >= 0; --j)
      L[i][j] = ref[i] == cand[j] ? L[i + 1][j + 1] + 1
                                  : std::max(L[i + 1][j], L[i][j + 1]);
  int i = 0, j = 0;
  while (i < m && j < n && L[i][j] > 0) {
    int jj = j;
    while (jj < n && cand[jj] != ref[i]) ++jj;
    if (jj < n && 1 + L[i + 1][jj + 1] == L[i][j]) {
      out.push_back(i);
      ++i;
      j = jj + 1;
    } else {
      ++i;
    }
  }
  return out;
}

Sentence make_sentence(const std::string& raw, bool stem) {
  return Sentence{raw, normalize_tokens(raw, stem)};
}

}  // namespace summ
