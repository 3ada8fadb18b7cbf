#include <charconv>
#include <map>

#include "gmlab/error.hpp"
#include "gmlab/registry.hpp"

namespace gmlab {

std::string format_double(double value) {
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, end);
}

namespace {

using Params = std::map<std::string, std::string, std::less<>>;

Params parse_params(std::string_view text, std::string_view spec) {
  Params out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw Error(ErrorKind::kInvalidGfn, "expected key=value in '" + std::string(spec) + "'");
    }
    out.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

double to_double(std::string_view text, std::string_view spec) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size()) {
    throw Error(ErrorKind::kInvalidGfn, "bad number '" + std::string(text) + "' in '" + std::string(spec) + "'");
  }
  return value;
}

double take(Params& params, const std::string& key, double fallback, std::string_view spec) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  const double v = to_double(it->second, spec);
  params.erase(it);
  return v;
}

void reject_leftovers(const Params& params, std::string_view spec) {
  if (!params.empty()) {
    throw Error(ErrorKind::kInvalidGfn, "unknown parameter '" + params.begin()->first + "' in '" + std::string(spec) + "'");
  }
}

bool strip_prefix(std::string_view& text, std::string_view prefix) {
  if (text.substr(0, prefix.size()) != prefix) return false;
  text.remove_prefix(prefix.size());
  return true;
}

}  // namespace

GFunctionPtr make_gfunction(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view kind = spec.substr(0, colon);
  Params params = parse_params(colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1), spec);

  if (kind == "ex11") {
    Ex11Params p;
    p.alpha = take(params, "alpha", p.alpha, spec);
    if (const auto it = params.find("p"); it != params.end()) {
      std::string_view w = it->second;
      if (strip_prefix(w, "geom")) {
        p.weights = Ex11Params::Weights::kGeometric;
      } else if (strip_prefix(w, "zeta")) {
        p.weights = Ex11Params::Weights::kZeta;
      } else {
        throw Error(ErrorKind::kInvalidGfn, "ex11 weights must be geom<R> or zeta<s>");
      }
      p.weight_parameter = to_double(w, spec);
      params.erase(it);
    }
    reject_leftovers(params, spec);
    return make_ex11(p);
  }
  if (kind == "hulse") {
    HulseParams p;
    p.limit = take(params, "a", p.limit, spec);
    p.first = take(params, "a1", p.first, spec);
    p.rate = take(params, "q", p.rate, spec);
    reject_leftovers(params, spec);
    return make_hulse(p);
  }
  if (kind == "spin") {
    SpinParams p;
    if (const auto it = params.find("a"); it != params.end()) {
      std::string_view w = it->second;
      if (!strip_prefix(w, "pow")) throw Error(ErrorKind::kInvalidGfn, "spin couplings must be pow<exponent>");
      p.exponent = to_double(w, spec);
      params.erase(it);
    }
    p.scale = take(params, "c", p.scale, spec);
    reject_leftovers(params, spec);
    return make_spin(p);
  }
  if (kind == "randomwalk") {
    reject_leftovers(params, spec);
    return make_randomwalk_third();
  }
  if (kind == "markov") {
    const auto it = params.find("file");
    if (it == params.end()) throw Error(ErrorKind::kInvalidGfn, "markov needs file=<path.json>");
    const std::string path = it->second;
    params.erase(it);
    reject_leftovers(params, spec);
    return load_markov_json(path);
  }
  throw Error(ErrorKind::kInvalidGfn, "unknown g-function '" + std::string(spec) + "'");
}

std::vector<RegistryEntry> registry() {
  return {
      {"ex11", "ex11:alpha=0.5,p=geom2",
       "countable alphabet, g(i,x) = p_i b(x): square-summable s-variation although var_n log g is infinite"},
      {"hulse", "hulse:a=0.5,a1=0.9,q=1",
       "Hulse's two-symbol g driven by the distance to the first 1: unique g-measure without variation "
       "conditions"},
      {"spin", "spin:a=pow1.5",
       "spin chain phi(+-sum a_i x_i): chains from all +1 and all -1 are mutually singular when "
       "sum_n (sum_{i>=n} a_i)^2 diverges"},
      {"randomwalk", "randomwalk",
       "g = 1/3 on the integer nearest-neighbour subshift: mass escapes, no finite g-measure"},
      {"markov", "markov:file=table.json", "finite-alphabet, finite-depth table (exact oracle instances)"},
  };
}

}  // namespace gmlab
