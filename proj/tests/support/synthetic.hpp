#pragma once

// Generated OLID-style corpora with a planted, learnable signal.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "offlang/corpus.hpp"
#include "offlang/random.hpp"

namespace offlang::testing {

struct Lexicon {
  std::vector<std::string> off_words;
  std::vector<std::string> not_words;
  std::vector<std::string> noise;
};

inline std::string pseudo_word(Rng& rng, std::size_t syllables) {
  static const char* kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "br", "kl", "st", "tr"};
  static const char* kVowels[] = {"a", "o", "u", "i", "e"};
  std::string w;
  for (std::size_t i = 0; i < syllables; ++i) {
    w += kOnsets[rng.below(std::size(kOnsets))];
    w += kVowels[rng.below(std::size(kVowels))];
  }
  w += "x";  // keeps suffix strippers off the planted words
  return w;
}

inline Lexicon make_lexicon(std::uint64_t seed, std::size_t n_signal = 30, std::size_t n_noise = 500) {
  Rng rng(seed);
  std::set<std::string> used;
  auto fresh = [&](std::size_t syllables) {
    for (;;) {
      auto w = pseudo_word(rng, syllables);
      if (used.insert(w).second) return w;
    }
  };
  Lexicon lex;
  for (std::size_t i = 0; i < n_signal; ++i) lex.off_words.push_back(fresh(3));
  for (std::size_t i = 0; i < n_signal; ++i) lex.not_words.push_back(fresh(3));
  for (std::size_t i = 0; i < n_noise; ++i) lex.noise.push_back(fresh(2 + rng.below(2)));
  return lex;
}

// OFF tweets carry two or three OFF words; NOT tweets carry none, plus one or
// two NOT words. Every tweet is padded with noise, placeholders and casing.
inline Corpus make_separable_corpus(std::size_t n, std::uint64_t seed, double off_fraction = 0.2,
                                    const Lexicon* lexicon = nullptr) {
  const Lexicon local = lexicon ? Lexicon{} : make_lexicon(seed ^ 0x5EEDULL);
  const Lexicon& lex = lexicon ? *lexicon : local;
  Rng rng(derive_seed(seed, 1));
  Corpus c;
  c.language = "da";
  for (std::size_t i = 0; i < n; ++i) {
    Tweet t;
    t.id = std::to_string(100000 + i);
    const bool off = static_cast<double>(rng.below(1000)) < off_fraction * 1000.0;
    std::vector<std::string> words;
    const auto& signal = off ? lex.off_words : lex.not_words;
    const std::size_t n_signal = off ? 2 + rng.below(2) : 1 + rng.below(2);
    for (std::size_t k = 0; k < n_signal; ++k) words.push_back(signal[rng.below(signal.size())]);
    const std::size_t n_noise = 5 + rng.below(8);
    for (std::size_t k = 0; k < n_noise; ++k) words.push_back(lex.noise[rng.below(lex.noise.size())]);
    for (std::size_t k = words.size(); k > 1; --k) std::swap(words[k - 1], words[rng.below(k)]);

    std::string text;
    if (rng.below(3) == 0) text = "@USER ";
    for (auto& w : words) {
      if (rng.below(10) == 0) w[0] = static_cast<char>(w[0] - 'a' + 'A');
      text += w + " ";
    }
    if (rng.below(5) == 0) text += "URL ";
    if (off && rng.below(2) == 0) text += "!!!";
    while (!text.empty() && text.back() == ' ') text.pop_back();
    t.text = text;
    t.label_a = off ? LabelA::OFF : LabelA::NOT;
    c.tweets.push_back(std::move(t));
  }
  return c;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("offlang_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace offlang::testing
