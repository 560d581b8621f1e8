#include "cayley/words.hpp"

#include <algorithm>
#include <sstream>

#include "cayley/errors.hpp"

namespace cayley {

  namespace {
    bool is_reserved(std::string_view name) {
      return name == kPadToken || name == kEmptyToken || name == kBoxPlusToken
             || name == kBoxDotToken;
    }

    std::vector<std::string_view> split_ws(std::string_view text) {
      std::vector<std::string_view> out;
      std::size_t                   i = 0;
      while (i < text.size()) {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\n')) {
          ++i;
        }
        std::size_t j = i;
        while (j < text.size() && text[j] != ' ' && text[j] != '\t' && text[j] != '\n') {
          ++j;
        }
        if (j > i) {
          out.push_back(text.substr(i, j - i));
        }
        i = j;
      }
      return out;
    }
  }  // namespace

  Alphabet::Alphabet(std::vector<std::string> names) : _names(std::move(names)) {
    for (std::size_t i = 0; i < _names.size(); ++i) {
      auto const& n = _names[i];
      if (n.empty() || is_reserved(n)) {
        throw UsageError("reserved or empty symbol name '" + n + "'");
      }
      if (n.find_first_of(" \t\n") != std::string::npos) {
        throw UsageError("symbol name contains whitespace: '" + n + "'");
      }
      if (!_index.emplace(n, static_cast<Symbol>(i)).second) {
        throw UsageError("duplicate symbol '" + n + "'");
      }
    }
    _size = _names.size();
  }

  AlphabetPtr Alphabet::make(std::vector<std::string> names) {
    return std::make_shared<Alphabet const>(std::move(names));
  }

  AlphabetPtr Alphabet::product(std::vector<AlphabetPtr> tracks) {
    if (tracks.empty()) {
      throw UsageError("product alphabet needs at least one track");
    }
    Alphabet      result;
    std::uint64_t total = 1;
    for (auto const& t : tracks) {
      if (t->is_product()) {
        throw UsageError("nested product alphabets are not supported");
      }
      result._radix.push_back(total);
      total *= t->size() + 1;
      if (total >= kPad) {
        throw UsageError("product alphabet too large for 32-bit symbols");
      }
    }
    result._tracks = std::move(tracks);
    result._size   = static_cast<std::size_t>(total);
    return std::make_shared<Alphabet const>(std::move(result));
  }

  bool Alphabet::contains(Symbol s) const noexcept {
    if (s >= _size) {
      return false;
    }
    if (!is_product()) {
      return true;
    }
    // all-padding code is the maximum code
    return s != _size - 1;
  }

  std::vector<Symbol> Alphabet::components(Symbol s) const {
    std::vector<Symbol> out(_tracks.size());
    std::uint64_t       v = s;
    for (std::size_t i = 0; i < _tracks.size(); ++i) {
      auto base = _tracks[i]->size() + 1;
      auto d    = static_cast<Symbol>(v % base);
      v /= base;
      out[i] = d == _tracks[i]->size() ? kPad : d;
    }
    return out;
  }

  Symbol Alphabet::compose(std::span<Symbol const> parts) const {
    if (parts.size() != _tracks.size()) {
      throw UsageError("wrong number of tracks in product symbol");
    }
    std::uint64_t v       = 0;
    bool          all_pad = true;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      auto d = parts[i];
      if (d == kPad) {
        d = static_cast<Symbol>(_tracks[i]->size());
      } else {
        if (d >= _tracks[i]->size()) {
          throw UsageError("track symbol out of range");
        }
        all_pad = false;
      }
      v += _radix[i] * d;
    }
    if (all_pad) {
      throw UsageError("all-padding tuple is not a symbol");
    }
    return static_cast<Symbol>(v);
  }

  std::string Alphabet::name(Symbol s) const {
    if (s == kPad) {
      return std::string(kPadToken);
    }
    if (!contains(s)) {
      throw UsageError("symbol code " + std::to_string(s) + " not in alphabet");
    }
    if (!is_product()) {
      return _names[s];
    }
    auto        parts = components(s);
    std::string out   = "(";
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i != 0) {
        out += ',';
      }
      out += _tracks[i]->name(parts[i]);
    }
    out += ')';
    return out;
  }

  std::optional<Symbol> Alphabet::find(std::string_view name) const {
    if (!is_product()) {
      auto it = _index.find(std::string(name));
      if (it == _index.end()) {
        return std::nullopt;
      }
      return it->second;
    }
    if (name.size() < 2 || name.front() != '(' || name.back() != ')') {
      return std::nullopt;
    }
    std::vector<Symbol> parts;
    auto                inner = name.substr(1, name.size() - 2);
    std::size_t         start = 0;
    for (std::size_t i = 0; i <= inner.size(); ++i) {
      if (i == inner.size() || inner[i] == ',') {
        auto piece = inner.substr(start, i - start);
        if (parts.size() >= _tracks.size()) {
          return std::nullopt;
        }
        if (piece == kPadToken) {
          parts.push_back(kPad);
        } else {
          auto s = _tracks[parts.size()]->find(piece);
          if (!s) {
            return std::nullopt;
          }
          parts.push_back(*s);
        }
        start = i + 1;
      }
    }
    if (parts.size() != _tracks.size()
        || std::all_of(parts.begin(), parts.end(), [](Symbol s) { return s == kPad; })) {
      return std::nullopt;
    }
    return compose(parts);
  }

  Symbol Alphabet::at(std::string_view name) const {
    auto s = find(name);
    if (!s) {
      throw UsageError("unknown symbol '" + std::string(name) + "'");
    }
    return *s;
  }

  std::vector<std::string> const& Alphabet::names() const {
    if (is_product()) {
      throw UsageError("product alphabets do not list their names");
    }
    return _names;
  }

  bool Alphabet::operator==(Alphabet const& other) const {
    if (this == &other) {
      return true;
    }
    if (is_product() != other.is_product() || _size != other._size) {
      return false;
    }
    if (!is_product()) {
      return _names == other._names;
    }
    if (_tracks.size() != other._tracks.size()) {
      return false;
    }
    for (std::size_t i = 0; i < _tracks.size(); ++i) {
      if (!(*_tracks[i] == *other._tracks[i])) {
        return false;
      }
    }
    return true;
  }

  bool same_alphabet(AlphabetPtr const& a, AlphabetPtr const& b) {
    if (a == b) {
      return true;
    }
    if (!a || !b) {
      return false;
    }
    return *a == *b;
  }

  Word::Word(AlphabetPtr alphabet, std::vector<Symbol> letters)
      : _alphabet(std::move(alphabet)), _letters(std::move(letters)) {
    for (auto s : _letters) {
      if (!_alphabet->contains(s)) {
        throw UsageError("letter code " + std::to_string(s) + " not in alphabet");
      }
    }
  }

  Word Word::parse(AlphabetPtr alphabet, std::string_view text) {
    Word w(alphabet);
    auto tokens = split_ws(text);
    if (tokens.size() == 1 && tokens[0] == kEmptyToken) {
      return w;
    }
    for (auto t : tokens) {
      if (t == kEmptyToken) {
        throw UsageError("'eps' may only appear on its own");
      }
      w._letters.push_back(alphabet->at(t));
    }
    return w;
  }

  Word Word::of(AlphabetPtr alphabet, std::initializer_list<std::string_view> names) {
    Word w(alphabet);
    for (auto n : names) {
      w._letters.push_back(alphabet->at(n));
    }
    return w;
  }

  void Word::push_back(Symbol s) {
    if (!_alphabet->contains(s)) {
      throw UsageError("letter not in alphabet");
    }
    _letters.push_back(s);
  }

  Word& Word::operator+=(Word const& other) {
    if (!same_alphabet(_alphabet, other._alphabet)) {
      throw UsageError("concatenating words over different alphabets");
    }
    _letters.insert(_letters.end(), other._letters.begin(), other._letters.end());
    return *this;
  }

  bool Word::operator==(Word const& other) const {
    return _letters == other._letters && same_alphabet(_alphabet, other._alphabet);
  }

  std::string Word::str() const {
    if (_letters.empty()) {
      return std::string(kEmptyToken);
    }
    std::string out;
    for (std::size_t i = 0; i < _letters.size(); ++i) {
      if (i != 0) {
        out += ' ';
      }
      out += _alphabet->name(_letters[i]);
    }
    return out;
  }

  std::size_t WordHash::operator()(std::vector<Symbol> const& w) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (auto s : w) {
      h ^= s + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }

  ConvolutionWord::ConvolutionWord(AlphabetPtr alphabet, std::vector<Cell> cells)
      : _alphabet(std::move(alphabet)), _cells(std::move(cells)) {
    bool pad_u = false, pad_v = false;
    for (auto const& [x, y] : _cells) {
      if (x == kPad && y == kPad) {
        throw UsageError("(pad, pad) cell in convolution");
      }
      if ((pad_u && x != kPad) || (pad_v && y != kPad)) {
        throw UsageError("padding is not monotone in convolution");
      }
      pad_u = pad_u || x == kPad;
      pad_v = pad_v || y == kPad;
    }
  }

  std::pair<Word, Word> ConvolutionWord::deconvolve() const {
    Word u(_alphabet), v(_alphabet);
    for (auto const& [x, y] : _cells) {
      if (x != kPad) {
        u.push_back(x);
      }
      if (y != kPad) {
        v.push_back(y);
      }
    }
    return {std::move(u), std::move(v)};
  }

  std::string ConvolutionWord::str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < _cells.size(); ++i) {
      if (i != 0) {
        os << ' ';
      }
      os << '(' << _alphabet->name(_cells[i].first) << ','
         << _alphabet->name(_cells[i].second) << ')';
    }
    return os.str();
  }

  ConvolutionWord convolve(Word const& u, Word const& v) {
    if (!same_alphabet(u.alphabet(), v.alphabet())) {
      throw UsageError("convolve: words over different alphabets");
    }
    std::size_t                        n = std::max(u.size(), v.size());
    std::vector<ConvolutionWord::Cell> cells;
    cells.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      cells.emplace_back(i < u.size() ? u[i] : kPad, i < v.size() ? v[i] : kPad);
    }
    return ConvolutionWord(u.alphabet(), std::move(cells));
  }

  Word interleave(AlphabetPtr const& product, std::vector<Word> const& tracks) {
    if (!product->is_product() || product->tracks().size() != tracks.size()) {
      throw UsageError("interleave: track count does not match the alphabet");
    }
    std::size_t n = 0;
    for (auto const& t : tracks) {
      n = std::max(n, t.size());
    }
    Word                out(product);
    std::vector<Symbol> parts(tracks.size());
    out.letters().reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < tracks.size(); ++j) {
        parts[j] = i < tracks[j].size() ? tracks[j][i] : kPad;
      }
      out.push_back(product->compose(parts));
    }
    return out;
  }

  std::vector<Word> split_tracks(Word const& w) {
    auto const& a = w.alphabet();
    if (!a->is_product()) {
      throw UsageError("split_tracks: not a product alphabet");
    }
    std::vector<Word> out;
    for (auto const& t : a->tracks()) {
      out.emplace_back(t);
    }
    std::vector<bool> ended(out.size(), false);
    for (auto x : w) {
      auto parts = a->components(x);
      for (std::size_t j = 0; j < parts.size(); ++j) {
        if (parts[j] == kPad) {
          ended[j] = true;
        } else if (ended[j]) {
          throw DomainError("track " + std::to_string(j) + " resumes after padding");
        } else {
          out[j].push_back(parts[j]);
        }
      }
    }
    return out;
  }

}  // namespace cayley
