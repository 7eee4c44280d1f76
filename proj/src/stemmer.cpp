#include "offlang/stemmer.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <span>

#include "offlang/error.hpp"
#include "offlang/unicode.hpp"

namespace offlang {
namespace {

using Word = std::u32string;
using View = std::u32string_view;

bool ends_with(const Word& w, View suffix) {
  return w.size() >= suffix.size() && View(w).substr(w.size() - suffix.size()) == suffix;
}

void replace_suffix(Word& w, std::size_t suffix_len, View replacement) {
  w.resize(w.size() - suffix_len);
  w.append(replacement);
}

struct Rule {
  View suffix;
  View replacement;
};

// Longest suffix of `w` among `rules`, or nullptr.
const Rule* longest_match(const Word& w, std::span<const Rule> rules) {
  const Rule* best = nullptr;
  for (const auto& r : rules) {
    if (ends_with(w, r.suffix) && (!best || r.suffix.size() > best->suffix.size())) best = &r;
  }
  return best;
}

// ---------------------------------------------------------------------------
// English (Porter2)

bool en_vowel(char32_t c) {
  return c == U'a' || c == U'e' || c == U'i' || c == U'o' || c == U'u' || c == U'y';
}

bool en_double(const Word& w) {
  if (w.size() < 2) return false;
  const char32_t c = w.back();
  if (w[w.size() - 2] != c) return false;
  return c == U'b' || c == U'd' || c == U'f' || c == U'g' || c == U'm' || c == U'n' ||
         c == U'p' || c == U'r' || c == U't';
}

bool en_li_ending(char32_t c) {
  return c == U'c' || c == U'd' || c == U'e' || c == U'g' || c == U'h' || c == U'k' ||
         c == U'm' || c == U'n' || c == U'r' || c == U't';
}

std::size_t en_region(const Word& w, std::size_t from) {
  for (std::size_t i = from + 1; i < w.size(); ++i) {
    if (en_vowel(w[i - 1]) && !en_vowel(w[i])) return i + 1;
  }
  return w.size();
}

bool en_short_syllable_at_end(const Word& w, std::size_t len) {
  if (len == 2) return en_vowel(w[0]) && !en_vowel(w[1]);
  if (len < 3) return false;
  const char32_t last = w[len - 1];
  return !en_vowel(w[len - 3]) && en_vowel(w[len - 2]) && !en_vowel(last) && last != U'w' &&
         last != U'x' && last != U'Y';
}

bool en_has_vowel(const Word& w, std::size_t end) {
  return std::any_of(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(end), en_vowel);
}

const std::map<Word, Word>& en_exceptions() {
  static const std::map<Word, Word> table{
      {U"skis", U"ski"},   {U"skies", U"sky"},   {U"dying", U"die"},   {U"lying", U"lie"},
      {U"tying", U"tie"},  {U"idly", U"idl"},    {U"gently", U"gentl"}, {U"ugly", U"ugli"},
      {U"early", U"earli"}, {U"only", U"onli"},  {U"singly", U"singl"}, {U"sky", U"sky"},
      {U"news", U"news"},  {U"howe", U"howe"},   {U"atlas", U"atlas"}, {U"cosmos", U"cosmos"},
      {U"bias", U"bias"},  {U"andes", U"andes"},
  };
  return table;
}

bool en_post_step1a_invariant(const Word& w) {
  static const std::array<View, 8> words{U"inning", U"outing",  U"canning", U"herring",
                                         U"earring", U"proceed", U"exceed",  U"succeed"};
  return std::find(words.begin(), words.end(), View(w)) != words.end();
}

constexpr std::array<Rule, 24> kEnStep2{{
    {U"ization", U"ize"}, {U"ational", U"ate"}, {U"fulness", U"ful"}, {U"ousness", U"ous"},
    {U"iveness", U"ive"}, {U"tional", U"tion"}, {U"biliti", U"ble"},  {U"lessli", U"less"},
    {U"entli", U"ent"},   {U"ation", U"ate"},   {U"alism", U"al"},    {U"aliti", U"al"},
    {U"ousli", U"ous"},   {U"iviti", U"ive"},   {U"fulli", U"ful"},   {U"enci", U"ence"},
    {U"anci", U"ance"},   {U"abli", U"able"},   {U"izer", U"ize"},    {U"ator", U"ate"},
    {U"alli", U"al"},     {U"bli", U"ble"},     {U"ogi", U"og"},      {U"li", U""},
}};

constexpr std::array<Rule, 9> kEnStep3{{
    {U"ational", U"ate"}, {U"tional", U"tion"}, {U"alize", U"al"}, {U"icate", U"ic"},
    {U"iciti", U"ic"},    {U"ative", U""},      {U"ical", U"ic"},  {U"ness", U""},
    {U"ful", U""},
}};

constexpr std::array<Rule, 18> kEnStep4{{
    {U"ement", U""}, {U"ance", U""}, {U"ence", U""}, {U"able", U""}, {U"ible", U""},
    {U"ment", U""},  {U"ant", U""},  {U"ent", U""},  {U"ism", U""},  {U"ate", U""},
    {U"iti", U""},   {U"ous", U""},  {U"ive", U""},  {U"ize", U""},  {U"ion", U""},
    {U"al", U""},    {U"er", U""},   {U"ic", U""},
}};

Word english_stem(Word w) {
  if (w.size() <= 2) return w;
  if (auto it = en_exceptions().find(w); it != en_exceptions().end()) return it->second;

  if (w.front() == U'\'') w.erase(w.begin());
  if (w.empty()) return w;
  if (w[0] == U'y') w[0] = U'Y';
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i] == U'y' && en_vowel(w[i - 1])) w[i] = U'Y';
  }

  std::size_t r1;
  if (w.starts_with(U"gener") || w.starts_with(U"arsen")) {
    r1 = 5;
  } else if (w.starts_with(U"commun")) {
    r1 = 6;
  } else {
    r1 = en_region(w, 0);
  }
  const std::size_t r2 = en_region(w, r1);
  auto in_r1 = [&](std::size_t suffix_len) { return w.size() - suffix_len >= r1; };
  auto in_r2 = [&](std::size_t suffix_len) { return w.size() - suffix_len >= r2; };

  // Step 0: possessives.
  if (ends_with(w, U"'s'")) {
    w.resize(w.size() - 3);
  } else if (ends_with(w, U"'s")) {
    w.resize(w.size() - 2);
  } else if (ends_with(w, U"'")) {
    w.resize(w.size() - 1);
  }

  // Step 1a.
  if (ends_with(w, U"sses")) {
    replace_suffix(w, 4, U"ss");
  } else if (ends_with(w, U"ied") || ends_with(w, U"ies")) {
    replace_suffix(w, 3, w.size() > 4 ? U"i" : U"ie");
  } else if (ends_with(w, U"us") || ends_with(w, U"ss")) {
    // unchanged
  } else if (ends_with(w, U"s") && w.size() >= 2 && en_has_vowel(w, w.size() - 2)) {
    w.pop_back();
  }
  if (en_post_step1a_invariant(w)) {
    for (auto& c : w) {
      if (c == U'Y') c = U'y';
    }
    return w;
  }

  // Step 1b.
  {
    static constexpr std::array<Rule, 6> suffixes{{
        {U"eedly", U"ee"}, {U"ingly", U""}, {U"edly", U""}, {U"eed", U"ee"}, {U"ing", U""}, {U"ed", U""},
    }};
    if (const Rule* r = longest_match(w, suffixes)) {
      const std::size_t len = r->suffix.size();
      if (r->suffix == U"eed" || r->suffix == U"eedly") {
        if (in_r1(len)) replace_suffix(w, len, U"ee");
      } else if (en_has_vowel(w, w.size() - len)) {
        w.resize(w.size() - len);
        if (ends_with(w, U"at") || ends_with(w, U"bl") || ends_with(w, U"iz")) {
          w.push_back(U'e');
        } else if (en_double(w)) {
          w.pop_back();
        } else if (en_short_syllable_at_end(w, w.size()) && r1 >= w.size()) {
          w.push_back(U'e');
        }
      }
    }
  }

  // Step 1c.
  if (w.size() > 2 && (w.back() == U'y' || w.back() == U'Y') && !en_vowel(w[w.size() - 2])) {
    w.back() = U'i';
  }

  // Step 2.
  if (const Rule* r = longest_match(w, kEnStep2)) {
    const std::size_t len = r->suffix.size();
    if (in_r1(len)) {
      if (r->suffix == U"ogi") {
        if (w.size() > 3 && w[w.size() - 4] == U'l') replace_suffix(w, len, r->replacement);
      } else if (r->suffix == U"li") {
        if (w.size() > 2 && en_li_ending(w[w.size() - 3])) replace_suffix(w, len, U"");
      } else {
        replace_suffix(w, len, r->replacement);
      }
    }
  }

  // Step 3.
  if (const Rule* r = longest_match(w, kEnStep3)) {
    const std::size_t len = r->suffix.size();
    if (in_r1(len) && (r->suffix != U"ative" || in_r2(len))) replace_suffix(w, len, r->replacement);
  }

  // Step 4.
  if (const Rule* r = longest_match(w, kEnStep4)) {
    const std::size_t len = r->suffix.size();
    if (in_r2(len)) {
      if (r->suffix == U"ion") {
        if (w.size() > 3 && (w[w.size() - 4] == U's' || w[w.size() - 4] == U't')) w.resize(w.size() - len);
      } else {
        w.resize(w.size() - len);
      }
    }
  }

  // Step 5.
  if (!w.empty() && w.back() == U'e') {
    if (in_r2(1) || (in_r1(1) && !en_short_syllable_at_end(w, w.size() - 1))) w.pop_back();
  } else if (!w.empty() && w.back() == U'l') {
    if (in_r2(1) && w.size() >= 2 && w[w.size() - 2] == U'l') w.pop_back();
  }

  for (auto& c : w) {
    if (c == U'Y') c = U'y';
  }
  return w;
}

// ---------------------------------------------------------------------------
// Danish

bool da_vowel(char32_t c) {
  return c == U'a' || c == U'e' || c == U'i' || c == U'o' || c == U'u' || c == U'y' ||
         c == U'æ' || c == U'å' || c == U'ø';
}

bool da_s_ending(char32_t c) {
  static constexpr View letters = U"abcdfghjklmnoprtvyzå";
  return letters.find(c) != View::npos;
}

constexpr std::array<View, 31> kDaMainSuffixes{
    U"erendes", U"erende", U"hedens", U"ethed", U"erede", U"heden", U"heder", U"endes",
    U"ernes",   U"erens",  U"erets",  U"ered",  U"ende",  U"erne",  U"eren",  U"erer",
    U"heds",    U"enes",   U"eres",   U"eret",  U"hed",   U"ene",   U"ere",   U"ens",
    U"ers",     U"ets",    U"en",     U"er",    U"es",    U"et",    U"e",
};

void da_consonant_pair(Word& w, std::size_t r1) {
  for (View pair : {View(U"gd"), View(U"dt"), View(U"gt"), View(U"kt")}) {
    if (ends_with(w, pair) && w.size() - 2 >= r1) {
      w.pop_back();
      return;
    }
  }
}

Word danish_stem(Word w) {
  // R1 begins after the first non-vowel following a vowel, but never before
  // the fourth letter; empty for words shorter than three letters.
  std::size_t r1 = w.size();
  if (w.size() >= 3) {
    for (std::size_t i = 1; i < w.size(); ++i) {
      if (da_vowel(w[i - 1]) && !da_vowel(w[i])) {
        r1 = std::max<std::size_t>(i + 1, 3);
        break;
      }
    }
  }

  // Main suffixes: longest match lying entirely inside R1.
  bool removed = false;
  for (View suffix : kDaMainSuffixes) {
    if (ends_with(w, suffix) && w.size() - suffix.size() >= r1) {
      w.resize(w.size() - suffix.size());
      removed = true;
      break;
    }
  }
  if (!removed && ends_with(w, U"s") && w.size() - 1 >= r1 && w.size() >= 2 &&
      da_s_ending(w[w.size() - 2])) {
    w.pop_back();
  }

  da_consonant_pair(w, r1);

  if (ends_with(w, U"igst")) w.resize(w.size() - 2);
  static constexpr std::array<View, 5> other{U"elig", U"løst", U"lig", U"els", U"ig"};
  for (View suffix : other) {
    if (ends_with(w, suffix) && w.size() - suffix.size() >= r1) {
      if (suffix == U"løst") {
        w.pop_back();
      } else {
        w.resize(w.size() - suffix.size());
        da_consonant_pair(w, r1);
      }
      break;
    }
  }

  // Undouble a final consonant inside R1.
  if (w.size() >= 2 && w.size() - 1 >= r1 && !da_vowel(w.back()) && w[w.size() - 2] == w.back()) {
    w.pop_back();
  }
  return w;
}

}  // namespace

std::string Stemmer::stem(std::string_view word) const {
  Word current = unicode::decode(word);
  // Snowball rules are not a closure; iterate to a fixed point. Every pass
  // either shortens the word or leaves it unchanged, except for Porter2's
  // e-restoration, so a small bound suffices.
  for (int pass = 0; pass < 8; ++pass) {
    Word next = stem_once(current);
    if (next == current) break;
    current = std::move(next);
  }
  return unicode::encode(current);
}

std::string Stemmer::stem_single_pass(std::string_view word) const {
  return unicode::encode(stem_once(unicode::decode(word)));
}

std::u32string DanishStemmer::stem_once(std::u32string word) const { return danish_stem(std::move(word)); }

std::u32string EnglishStemmer::stem_once(std::u32string word) const {
  return english_stem(std::move(word));
}

const std::vector<std::string>& supported_stem_languages() {
  static const std::vector<std::string> langs{"da", "en", "none"};
  return langs;
}

std::unique_ptr<Stemmer> make_stemmer(std::string_view language) {
  if (language == "da") return std::make_unique<DanishStemmer>();
  if (language == "en") return std::make_unique<EnglishStemmer>();
  if (language == "none") return std::make_unique<IdentityStemmer>();
  throw ValidationError("unsupported stemming language '" + std::string(language) +
                        "' (supported: da, en, none)");
}

std::string stem(std::string_view token, std::string_view language) {
  return make_stemmer(language)->stem(token);
}

}  // namespace offlang
