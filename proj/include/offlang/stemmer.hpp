#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace offlang {

// Suffix-stripping stemmer for one language. stem() applies the language's
// rules until the word stops changing, so it is idempotent.
class Stemmer {
 public:
  virtual ~Stemmer() = default;

  std::string stem(std::string_view word) const;
  // A single application of the rules, as the reference algorithm defines it.
  std::string stem_single_pass(std::string_view word) const;

  virtual std::string_view language() const = 0;

 protected:
  // One pass of the language's rules over a lowercase word.
  virtual std::u32string stem_once(std::u32string word) const = 0;
};

// Snowball Danish.
class DanishStemmer final : public Stemmer {
 public:
  std::string_view language() const override { return "da"; }

 protected:
  std::u32string stem_once(std::u32string word) const override;
};

// Snowball English (Porter2).
class EnglishStemmer final : public Stemmer {
 public:
  std::string_view language() const override { return "en"; }

 protected:
  std::u32string stem_once(std::u32string word) const override;
};

// Returns words unchanged; used to switch stemming off per language and in tests.
class IdentityStemmer final : public Stemmer {
 public:
  std::string_view language() const override { return "none"; }

 protected:
  std::u32string stem_once(std::u32string word) const override { return word; }
};

// "da", "en" or "none". Throws ValidationError for anything else.
std::unique_ptr<Stemmer> make_stemmer(std::string_view language);

const std::vector<std::string>& supported_stem_languages();

std::string stem(std::string_view token, std::string_view language);

}  // namespace offlang
