#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace gmlab {

/// Integer symbol code. Finite alphabets use 0..|S|-1 or an explicit list (spins use +1/-1),
/// countable alphabets use the naturals or the integers.
using Symbol = std::int32_t;

/// The symbol set S together with its fixed enumeration order.
///
/// Enumeration order is what inverse-CDF sampling and truncation follow:
/// finite alphabets enumerate their listed symbols, the naturals enumerate 0,1,2,...
/// and the integers enumerate 0,+1,-1,+2,-2,...
class Alphabet {
 public:
  enum class Kind { kFinite, kNaturals, kIntegers };

  static Alphabet finite(std::size_t size);
  static Alphabet of(std::vector<Symbol> symbols);
  static Alphabet naturals();
  static Alphabet integers();

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::kFinite; }
  /// Number of symbols for finite alphabets, nullopt for countable ones.
  std::optional<std::size_t> size() const;

  bool contains(Symbol s) const;
  /// The symbol at enumeration position `index`.
  Symbol at(std::size_t index) const;
  /// Enumeration position of `s`; throws if `s` is not in the alphabet.
  std::size_t index_of(Symbol s) const;

  /// Human-readable enumeration order, recorded in artifact metadata.
  std::string enumeration_order() const;
  std::string describe() const;

  const std::vector<Symbol>& symbols() const { return symbols_; }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  Alphabet(Kind kind, std::vector<Symbol> symbols) : kind_(kind), symbols_(std::move(symbols)) {}

  Kind kind_;
  std::vector<Symbol> symbols_;
};

/// A finite word. Prefix words list coordinates 0..len-1 of a context; chain words list
/// the symbols added by a g-chain in order of addition (x_{-1}, x_{-2}, ...).
struct Word {
  enum class Orientation { kContextPrefix, kChainAdded };

  std::vector<Symbol> symbols;
  Orientation orientation = Orientation::kContextPrefix;

  std::size_t size() const { return symbols.size(); }
  bool empty() const { return symbols.empty(); }
  /// Same word in the other orientation (reversed symbol order).
  Word reoriented() const;

  friend bool operator==(const Word&, const Word&) = default;
};

struct ConstantTail {
  Symbol fill = 0;
  friend bool operator==(const ConstantTail&, const ConstantTail&) = default;
};

struct PeriodicTail {
  std::vector<Symbol> period;  // non-empty
  friend bool operator==(const PeriodicTail&, const PeriodicTail&) = default;
};

using TailRule = std::variant<ConstantTail, PeriodicTail>;

/// A point of S^{Z+}: a finite head followed by a constant or periodic tail.
///
/// Coordinate i is head[i] for i < head_length(), otherwise given by the tail rule started at
/// coordinate head_length(). The head is stored with coordinate 0 last so that prepending a
/// symbol (the g-chain step) is amortised O(1).
class Context {
 public:
  Context() : Context(ConstantTail{0}) {}
  explicit Context(TailRule tail);
  Context(std::span<const Symbol> head, TailRule tail);
  Context(std::initializer_list<Symbol> head, TailRule tail)
      : Context(std::span<const Symbol>(head.begin(), head.size()), std::move(tail)) {}

  static Context constant(Symbol fill) { return Context(ConstantTail{fill}); }
  static Context periodic(std::vector<Symbol> period);

  Symbol coordinate(std::size_t i) const;
  Symbol operator[](std::size_t i) const { return coordinate(i); }

  std::size_t head_length() const { return reversed_head_.size(); }
  /// Head in coordinate order 0..len-1.
  std::vector<Symbol> head() const;
  /// Head stored with coordinate 0 at the back: reversed_head()[len-1-i] is coordinate i.
  std::span<const Symbol> reversed_head() const { return reversed_head_; }
  const TailRule& tail() const { return tail_; }

  /// Tail symbol at offset j past the head.
  Symbol tail_symbol(std::size_t j) const;
  /// Length of the tail's period (1 for constant tails).
  std::size_t tail_period() const;

  /// sigma . x, a point of T^{-1}(x).
  Context prepend(Symbol sigma) const;
  void push_front(Symbol sigma) { reversed_head_.push_back(sigma); }

  /// A context agreeing with this one on coordinates 0..keep-1 and continued by `rest`.
  Context with_suffix(std::size_t keep, const Context& rest) const;

  /// Literal form accepted by parse_context.
  std::string to_string() const;

  friend bool operator==(const Context&, const Context&) = default;

 private:
  std::vector<Symbol> reversed_head_;
  TailRule tail_;
};

/// Sentinels for agree_depth.
inline constexpr std::int64_t kDisagreeAtZero = -1;
inline constexpr std::int64_t kAgreeEverywhere = std::numeric_limits<std::int64_t>::max();

/// Largest n with x_i = y_i for all i <= n; kDisagreeAtZero if x_0 != y_0 and
/// kAgreeEverywhere if the two sequences are identical.
std::int64_t agree_depth(const Context& x, const Context& y);

/// Parses "const:<s>", "word:<s0>,<s1>,...;tail=<s>" and "periodic:<s0>,<s1>,...".
/// Symbols are signed integers ("+1" and "-1" are accepted).
Context parse_context(std::string_view literal);

Symbol parse_symbol(std::string_view text);

}  // namespace gmlab
