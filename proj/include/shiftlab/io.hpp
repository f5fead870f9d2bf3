#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "shiftlab/dyadic.hpp"
#include "shiftlab/fcriterion.hpp"
#include "shiftlab/natset.hpp"
#include "shiftlab/seqspace.hpp"
#include "shiftlab/shiftop.hpp"

namespace shiftlab {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string msg, std::size_t line) : std::runtime_error(std::move(msg)), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace io {

/// Shortest round-trip decimal form; deterministic across runs.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

/// Scalar literals: integer ("3", "-2"), dyadic fraction ("5/2^4"), or
/// decimal ("0.25").  Decimals stay exact when the fraction is dyadic
/// (0.1 = 1/10 is not and degrades to an inexact double).
inline Dyadic parse_scalar(std::string_view text, std::size_t line = 1) {
  const std::string_view s = trim(text);
  if (s.empty()) throw ParseError("empty scalar", line);
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto num = parse_int(s.substr(0, slash));
    const std::string_view den = s.substr(slash + 1);
    if (!num || den.size() < 3 || den.substr(0, 2) != "2^")
      throw ParseError("scalar '" + std::string(s) + "' is not of the form p/2^q", line);
    const auto q = parse_int(den.substr(2));
    if (!q || *q < 0 || *q > 4000) throw ParseError("bad dyadic denominator in '" + std::string(s) + "'", line);
    return Dyadic::from_mantissa_exponent(*num, static_cast<std::int32_t>(-*q));
  }
  if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    const std::string_view whole = s.substr(0, dot), frac = s.substr(dot + 1);
    std::string digits = std::string(whole) + std::string(frac);
    const auto p = parse_int(digits);
    if (!p || frac.empty() || frac.size() > 18)
      throw ParseError("bad decimal scalar '" + std::string(s) + "'", line);
    // value = p / 10^k; dyadic iff 5^k divides p.
    std::int64_t mant = *p;
    bool exact = true;
    for (std::size_t i = 0; i < frac.size(); ++i) {
      if (mant % 5 != 0) {
        exact = false;
        break;
      }
      mant /= 5;
    }
    if (!exact) {
      double d = 0.0;
      std::from_chars(s.data(), s.data() + s.size(), d);
      return Dyadic::inexact(d);
    }
    return Dyadic::from_mantissa_exponent(mant, -static_cast<std::int32_t>(frac.size()));
  }
  const auto v = parse_int(s);
  if (!v) throw ParseError("bad scalar '" + std::string(s) + "'", line);
  return Dyadic(*v);
}

inline std::string format_scalar(const Dyadic& v) {
  if (!v.exact()) return format_double(v.to_double());
  if (v.exponent() >= 0) {
    if (v.exponent() <= 62) {
      const __int128 wide = static_cast<__int128>(v.mantissa()) << v.exponent();
      if (wide >= std::numeric_limits<std::int64_t>::min() && wide <= std::numeric_limits<std::int64_t>::max())
        return std::to_string(static_cast<std::int64_t>(wide));
    }
    return format_double(v.to_double());
  }
  return std::to_string(v.mantissa()) + "/2^" + std::to_string(-v.exponent());
}

// ---------------------------------------------------------------------------
// NatSet text format: a "horizon=N" header line, then one element per line.
// ---------------------------------------------------------------------------

inline NatSet parse_natset(std::istream& in) {
  std::string linebuf;
  std::size_t lineno = 0;
  std::optional<Nat> horizon;
  std::vector<Nat> elems;
  while (std::getline(in, linebuf)) {
    ++lineno;
    const std::string_view s = trim(linebuf);
    if (s.empty()) continue;
    if (!horizon) {
      if (s.substr(0, 8) != "horizon=") throw ParseError("expected 'horizon=N' header", lineno);
      const auto h = parse_int(s.substr(8));
      if (!h || *h < 1) throw ParseError("bad horizon value", lineno);
      horizon = static_cast<Nat>(*h);
      continue;
    }
    const auto v = parse_int(s);
    if (!v || *v < 1) throw ParseError("bad element '" + std::string(s) + "'", lineno);
    elems.push_back(static_cast<Nat>(*v));
  }
  if (!horizon) throw ParseError("missing 'horizon=N' header", lineno == 0 ? 1 : lineno);
  try {
    return NatSet(std::move(elems), *horizon);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), lineno);
  }
}

inline NatSet load_natset(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open set file '" + path + "'", 0);
  return parse_natset(f);
}

inline std::string format_natset(const NatSet& a) {
  std::string out = "horizon=" + std::to_string(a.horizon()) + "\n";
  for (Nat v : a.elements()) out += std::to_string(v) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Vector literals: comma-separated "index:value" pairs, e.g. "1:1,5:1/2^3".
// ---------------------------------------------------------------------------

inline SeqVector parse_seqvector(std::string_view text, std::size_t line = 1) {
  SeqVector v;
  const std::string_view s = trim(text);
  if (s.empty() || s == "0") return v;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = std::min(s.find(',', pos), s.size());
    const std::string_view item = trim(s.substr(pos, comma - pos));
    const std::size_t colon = item.find(':');
    if (colon == std::string_view::npos)
      throw ParseError("vector entry '" + std::string(item) + "' is not index:value", line);
    const auto idx = parse_int(item.substr(0, colon));
    if (!idx || *idx < 1) throw ParseError("bad vector index in '" + std::string(item) + "'", line);
    if (!v.at(static_cast<Nat>(*idx)).is_zero())
      throw ParseError("duplicate vector index " + std::to_string(*idx), line);
    v.set(static_cast<Nat>(*idx), parse_scalar(item.substr(colon + 1), line));
    if (comma == s.size()) break;
    pos = comma + 1;
  }
  return v;
}

inline std::string format_seqvector(const SeqVector& v) {
  if (v.is_zero()) return "0";
  std::string out;
  for (const auto& [i, c] : v.coords()) {
    if (!out.empty()) out += ',';
    out += std::to_string(i) + ":" + format_scalar(c);
  }
  return out;
}

/// First `cap` support entries (orbit and probe outputs can be very long).
inline std::string format_seqvector_head(const SeqVector& v, std::size_t cap) {
  if (v.is_zero()) return "0";
  std::string out;
  std::size_t count = 0;
  for (const auto& [i, c] : v.coords()) {
    if (count == cap) {
      out += ",...";
      break;
    }
    if (!out.empty()) out += ',';
    out += std::to_string(i) + ":" + format_scalar(c);
    ++count;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Weight rules named on the command line: "const:<scalar>", "list:@<file>",
// "paper-counterexample".
// ---------------------------------------------------------------------------

inline WeightRule parse_weight_rule(std::string_view name) {
  const std::string_view s = trim(name);
  if (s == "paper-counterexample") return WeightRule::counterexample();
  if (s.substr(0, 6) == "const:") {
    const Dyadic lambda = parse_scalar(s.substr(6));
    if (lambda.is_zero()) throw ParseError("constant weight must be nonzero", 1);
    return WeightRule::constant(lambda);
  }
  if (s.substr(0, 6) == "list:@") {
    const std::string path(s.substr(6));
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open weight list '" + path + "'", 0);
    std::vector<Dyadic> ws;
    std::string tok;
    std::size_t lineno = 1;
    while (f >> tok) ws.push_back(parse_scalar(tok, lineno));
    if (ws.empty()) throw ParseError("empty weight list '" + path + "'", 1);
    return WeightRule::explicit_list(std::move(ws));
  }
  throw ParseError("unknown weight rule '" + std::string(s) + "'", 1);
}

// ---------------------------------------------------------------------------
// CSV tables (fixed column orders).
// ---------------------------------------------------------------------------

inline std::string density_csv(const DensityProfile& p) {
  std::string out = "n,ratio\n";
  for (const auto& s : p.samples) out += std::to_string(s.n) + "," + format_double(s.ratio) + "\n";
  return out;
}

inline std::string ap_profile_csv(const APProfile& p) {
  std::string out = "k,start,difference,length\n";
  for (const auto& [k, w] : p) {
    if (w)
      out += std::to_string(k) + "," + std::to_string(w->start) + "," + std::to_string(w->difference) + "," +
             std::to_string(w->length) + "\n";
    else
      out += std::to_string(k) + ",0," + std::to_string(k) + ",0\n";
  }
  return out;
}

inline std::string family_csv(const std::vector<APFamilySpec>& family) {
  std::string out = "k,start,difference,length\n";
  for (const auto& f : family)
    for (const auto& b : f.blocks)
      out += std::to_string(f.k) + "," + std::to_string(b.start()) + "," + std::to_string(b.difference) + "," +
             std::to_string(b.length) + "\n";
  return out;
}

inline std::string criterion_csv(const CriterionReport& rep) {
  std::string out;
  out += "# condition i\nseparation_ok,witness_a,witness_b\n";
  out += std::string(rep.separation.ok ? "1" : "0") + "," + std::to_string(rep.separation.witness_a) + "," +
         std::to_string(rep.separation.witness_b) + "\n";
  out += "# condition ii\nk,kprime,norm\n";
  for (const auto& [key, v] : rep.series_norms)
    out += std::to_string(key.first) + "," + std::to_string(key.second) + "," + format_double(v) + "\n";
  out += "# condition iii\nk,l,kprime,C\n";
  for (const auto& [key, v] : rep.ckl)
    out += std::to_string(std::get<0>(key)) + "," + std::to_string(std::get<1>(key)) + "," +
           std::to_string(std::get<2>(key)) + "," + format_double(v) + "\n";
  out += "# decay flags\nseries_decay_in_k,sup_decay_in_k,ckl_decay_in_l\n";
  out += std::string(rep.series_decay_in_k ? "1" : "0") + "," + (rep.sup_decay_in_k ? "1" : "0") + "," +
         (rep.ckl_decay_in_l ? "1" : "0") + "\n";
  return out;
}

}  // namespace io
}  // namespace shiftlab
