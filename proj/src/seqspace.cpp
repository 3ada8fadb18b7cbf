#include "gmlab/seqspace.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

#include "gmlab/error.hpp"

namespace gmlab {

Alphabet Alphabet::finite(std::size_t size) {
  std::vector<Symbol> symbols(size);
  std::iota(symbols.begin(), symbols.end(), Symbol{0});
  return Alphabet(Kind::kFinite, std::move(symbols));
}

Alphabet Alphabet::of(std::vector<Symbol> symbols) {
  std::vector<Symbol> sorted = symbols;
  std::sort(sorted.begin(), sorted.end());
  if (symbols.empty() || std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorKind::kConfig, "alphabet symbols must be non-empty and distinct");
  }
  return Alphabet(Kind::kFinite, std::move(symbols));
}

Alphabet Alphabet::naturals() { return Alphabet(Kind::kNaturals, {}); }
Alphabet Alphabet::integers() { return Alphabet(Kind::kIntegers, {}); }

std::optional<std::size_t> Alphabet::size() const {
  if (kind_ == Kind::kFinite) return symbols_.size();
  return std::nullopt;
}

bool Alphabet::contains(Symbol s) const {
  switch (kind_) {
    case Kind::kFinite: return std::find(symbols_.begin(), symbols_.end(), s) != symbols_.end();
    case Kind::kNaturals: return s >= 0;
    case Kind::kIntegers: return true;
  }
  return false;
}

Symbol Alphabet::at(std::size_t index) const {
  switch (kind_) {
    case Kind::kFinite:
      if (index >= symbols_.size()) throw Error(ErrorKind::kOutsideAlphabet, "enumeration index out of range");
      return symbols_[index];
    case Kind::kNaturals:
      return static_cast<Symbol>(index);
    case Kind::kIntegers: {
      // 0, +1, -1, +2, -2, ...
      const auto magnitude = static_cast<Symbol>((index + 1) / 2);
      return (index % 2 == 1) ? magnitude : -magnitude;
    }
  }
  return 0;
}

std::size_t Alphabet::index_of(Symbol s) const {
  if (!contains(s)) throw Error(ErrorKind::kOutsideAlphabet, "symbol " + std::to_string(s) + " not in alphabet");
  switch (kind_) {
    case Kind::kFinite:
      return static_cast<std::size_t>(std::find(symbols_.begin(), symbols_.end(), s) - symbols_.begin());
    case Kind::kNaturals:
      return static_cast<std::size_t>(s);
    case Kind::kIntegers:
      return s > 0 ? 2 * static_cast<std::size_t>(s) - 1 : 2 * static_cast<std::size_t>(-static_cast<std::int64_t>(s));
  }
  return 0;
}

std::string Alphabet::enumeration_order() const {
  switch (kind_) {
    case Kind::kFinite: {
      std::ostringstream out;
      for (std::size_t i = 0; i < symbols_.size(); ++i) out << (i ? "," : "") << symbols_[i];
      return out.str();
    }
    case Kind::kNaturals: return "0,1,2,...";
    case Kind::kIntegers: return "0,+1,-1,+2,-2,...";
  }
  return {};
}

std::string Alphabet::describe() const {
  switch (kind_) {
    case Kind::kFinite: return "finite{" + enumeration_order() + "}";
    case Kind::kNaturals: return "naturals";
    case Kind::kIntegers: return "integers";
  }
  return {};
}

Word Word::reoriented() const {
  Word out{std::vector<Symbol>(symbols.rbegin(), symbols.rend()),
           orientation == Orientation::kContextPrefix ? Orientation::kChainAdded : Orientation::kContextPrefix};
  return out;
}

namespace {

void check_tail(const TailRule& tail) {
  if (const auto* p = std::get_if<PeriodicTail>(&tail); p && p->period.empty()) {
    throw Error(ErrorKind::kInvalidContext, "periodic tail needs at least one symbol");
  }
}

}  // namespace

Context::Context(TailRule tail) : tail_(std::move(tail)) { check_tail(tail_); }

Context::Context(std::span<const Symbol> head, TailRule tail)
    : reversed_head_(head.rbegin(), head.rend()), tail_(std::move(tail)) {
  check_tail(tail_);
}

Context Context::periodic(std::vector<Symbol> period) { return Context(PeriodicTail{std::move(period)}); }

Symbol Context::tail_symbol(std::size_t j) const {
  if (const auto* c = std::get_if<ConstantTail>(&tail_)) return c->fill;
  const auto& period = std::get<PeriodicTail>(tail_).period;
  return period[j % period.size()];
}

std::size_t Context::tail_period() const {
  if (std::holds_alternative<ConstantTail>(tail_)) return 1;
  return std::get<PeriodicTail>(tail_).period.size();
}

Symbol Context::coordinate(std::size_t i) const {
  const std::size_t len = reversed_head_.size();
  if (i < len) return reversed_head_[len - 1 - i];
  return tail_symbol(i - len);
}

std::vector<Symbol> Context::head() const { return {reversed_head_.rbegin(), reversed_head_.rend()}; }

Context Context::prepend(Symbol sigma) const {
  Context out = *this;
  out.push_front(sigma);
  return out;
}

Context Context::with_suffix(std::size_t keep, const Context& rest) const {
  std::vector<Symbol> head;
  head.reserve(keep + rest.head_length());
  for (std::size_t i = 0; i < keep; ++i) head.push_back(coordinate(i));
  for (std::size_t i = 0; i < rest.head_length(); ++i) head.push_back(rest.coordinate(i));
  return Context(head, rest.tail());
}

std::string Context::to_string() const {
  std::ostringstream out;
  auto join = [&out](const std::vector<Symbol>& symbols) {
    for (std::size_t i = 0; i < symbols.size(); ++i) out << (i ? "," : "") << symbols[i];
  };
  if (reversed_head_.empty()) {
    if (const auto* c = std::get_if<ConstantTail>(&tail_)) {
      out << "const:" << c->fill;
    } else {
      out << "periodic:";
      join(std::get<PeriodicTail>(tail_).period);
    }
    return out.str();
  }
  out << "word:";
  join(head());
  if (const auto* c = std::get_if<ConstantTail>(&tail_)) {
    out << ";tail=" << c->fill;
  } else {
    out << ";periodic=";
    join(std::get<PeriodicTail>(tail_).period);
  }
  return out.str();
}

std::int64_t agree_depth(const Context& x, const Context& y) {
  const std::size_t heads = std::max(x.head_length(), y.head_length());
  const std::size_t period = std::lcm(x.tail_period(), y.tail_period());
  const std::size_t horizon = heads + period;
  for (std::size_t i = 0; i < horizon; ++i) {
    if (x.coordinate(i) != y.coordinate(i)) return static_cast<std::int64_t>(i) - 1;
  }
  return kAgreeEverywhere;
}

Symbol parse_symbol(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  Symbol value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size()) {
    throw Error(ErrorKind::kInvalidContext, "invalid symbol '" + std::string(text) + "'");
  }
  return value;
}

namespace {

std::vector<Symbol> parse_symbol_list(std::string_view text) {
  std::vector<Symbol> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_symbol(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

bool consume(std::string_view& text, std::string_view prefix) {
  if (text.substr(0, prefix.size()) != prefix) return false;
  text.remove_prefix(prefix.size());
  return true;
}

}  // namespace

Context parse_context(std::string_view literal) {
  std::string_view rest = literal;
  try {
    if (consume(rest, "const:")) return Context::constant(parse_symbol(rest));
    if (consume(rest, "periodic:")) return Context::periodic(parse_symbol_list(rest));
    if (consume(rest, "word:")) {
      const auto semi = rest.find(';');
      if (semi == std::string_view::npos) {
        throw Error(ErrorKind::kInvalidContext, "word context needs ';tail=<sym>' or ';periodic=<list>'");
      }
      const auto head = parse_symbol_list(rest.substr(0, semi));
      std::string_view tail = rest.substr(semi + 1);
      if (consume(tail, "tail=")) return Context(head, ConstantTail{parse_symbol(tail)});
      if (consume(tail, "periodic=")) return Context(head, PeriodicTail{parse_symbol_list(tail)});
      throw Error(ErrorKind::kInvalidContext, "unknown tail rule");
    }
  } catch (const Error& e) {
    throw Error(ErrorKind::kInvalidContext, "invalid context '" + std::string(literal) + "': " + e.what());
  }
  throw Error(ErrorKind::kInvalidContext, "invalid context '" + std::string(literal) + "'");
}

}  // namespace gmlab
