#ifndef CAYLEY_WORDS_HPP_
#define CAYLEY_WORDS_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cayley {

  using Symbol = std::uint32_t;

  // Padding marker of a convolution track. Never a member of an alphabet.
  inline constexpr Symbol kPad = 0xFFFFFFFFu;

  // Textual tokens that no alphabet may use.
  inline constexpr std::string_view kPadToken = "_";
  inline constexpr std::string_view kEmptyToken = "eps";
  inline constexpr std::string_view kBoxPlusToken = "BOX+";
  inline constexpr std::string_view kBoxDotToken = "BOX.";

  class Alphabet;
  using AlphabetPtr = std::shared_ptr<Alphabet const>;

  // An ordered finite set of opaque symbol names.
  //
  // Two flavours exist. An explicit alphabet stores its names. A product
  // alphabet is the convolution alphabet of several tracks: a symbol is a
  // tuple with one entry per track, each entry a track symbol or padding,
  // and the all-padding tuple is not a symbol. Product symbols are computed
  // arithmetically, so very large track products never materialise names.
  class Alphabet {
   public:
    explicit Alphabet(std::vector<std::string> names);

    static AlphabetPtr make(std::vector<std::string> names);
    static AlphabetPtr product(std::vector<AlphabetPtr> tracks);

    // Number of symbol codes; for product alphabets this includes the one
    // unused all-padding code.
    std::size_t size() const noexcept {
      return _size;
    }
    bool is_product() const noexcept {
      return !_tracks.empty();
    }
    bool contains(Symbol s) const noexcept;

    std::string name(Symbol s) const;
    std::optional<Symbol> find(std::string_view name) const;
    // Throws UsageError for an unknown name.
    Symbol at(std::string_view name) const;

    std::vector<std::string> const& names() const;

    std::vector<AlphabetPtr> const& tracks() const noexcept {
      return _tracks;
    }
    // Tuple entries of a product symbol (kPad for padded tracks).
    std::vector<Symbol> components(Symbol s) const;
    Symbol compose(std::span<Symbol const> parts) const;

    bool operator==(Alphabet const& other) const;

   private:
    Alphabet() = default;

    std::vector<std::string>                _names;
    std::unordered_map<std::string, Symbol> _index;
    std::vector<AlphabetPtr>                _tracks;
    std::vector<std::uint64_t>              _radix;
    std::size_t                             _size = 0;
  };

  bool same_alphabet(AlphabetPtr const& a, AlphabetPtr const& b);

  // A finite sequence of symbols over a fixed alphabet; empty is epsilon.
  class Word {
   public:
    Word() = default;
    explicit Word(AlphabetPtr alphabet) : _alphabet(std::move(alphabet)) {}
    Word(AlphabetPtr alphabet, std::vector<Symbol> letters);

    // Space separated tokens; "eps" or the empty string is the empty word.
    static Word parse(AlphabetPtr alphabet, std::string_view text);
    // Names from the alphabet, e.g. {"a", "a'", "b"}.
    static Word of(AlphabetPtr alphabet, std::initializer_list<std::string_view> names);

    AlphabetPtr const& alphabet() const noexcept {
      return _alphabet;
    }
    std::vector<Symbol> const& letters() const noexcept {
      return _letters;
    }
    std::vector<Symbol>& letters() noexcept {
      return _letters;
    }
    std::size_t size() const noexcept {
      return _letters.size();
    }
    bool empty() const noexcept {
      return _letters.empty();
    }
    Symbol operator[](std::size_t i) const {
      return _letters[i];
    }
    auto begin() const noexcept {
      return _letters.begin();
    }
    auto end() const noexcept {
      return _letters.end();
    }

    void push_back(Symbol s);
    Word& operator+=(Word const& other);
    friend Word operator+(Word lhs, Word const& rhs) {
      lhs += rhs;
      return lhs;
    }

    // Letters equal and alphabets equal.
    bool operator==(Word const& other) const;

    std::string str() const;

   private:
    AlphabetPtr         _alphabet;
    std::vector<Symbol> _letters;
  };

  struct WordHash {
    std::size_t operator()(std::vector<Symbol> const& w) const noexcept;
    std::size_t operator()(Word const& w) const noexcept {
      return (*this)(w.letters());
    }
  };

  // u ⊗ v: cell i is (u_i or pad, v_i or pad).
  class ConvolutionWord {
   public:
    using Cell = std::pair<Symbol, Symbol>;

    ConvolutionWord(AlphabetPtr alphabet, std::vector<Cell> cells);

    AlphabetPtr const& alphabet() const noexcept {
      return _alphabet;
    }
    std::vector<Cell> const& cells() const noexcept {
      return _cells;
    }
    std::size_t size() const noexcept {
      return _cells.size();
    }

    std::pair<Word, Word> deconvolve() const;
    std::string str() const;

   private:
    AlphabetPtr       _alphabet;
    std::vector<Cell> _cells;
  };

  ConvolutionWord convolve(Word const& u, Word const& v);

  // n-track convolution over a product alphabet; track i of the result is
  // tracks[i] padded to the common length.
  Word              interleave(AlphabetPtr const& product, std::vector<Word> const& tracks);
  // Inverse of interleave; throws DomainError if padding is not a suffix.
  std::vector<Word> split_tracks(Word const& w);

}  // namespace cayley

#endif  // CAYLEY_WORDS_HPP_
