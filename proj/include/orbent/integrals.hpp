#pragma once

/**
 * @file integrals.hpp
 * @brief Active-space Hamiltonian storage and the FCIDUMP reader/writer.
 *
 * Integrals are addressed with 1-based orbital indices, matching the file
 * format. Two-electron integrals use chemists' notation (pq|rs) and are kept
 * once per 8-fold permutational class under the lexicographically smallest
 * index tuple of the class.
 */

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "orbent/error.hpp"

namespace orbent {

using EriKey = std::array<int, 4>;

/// Smallest of the eight index tuples equivalent under real-orbital
/// permutational symmetry of (pq|rs).
inline EriKey canonical_eri_key(int p, int q, int r, int s) {
  const std::array<EriKey, 8> images = {{{p, q, r, s},
                                         {q, p, r, s},
                                         {p, q, s, r},
                                         {q, p, s, r},
                                         {r, s, p, q},
                                         {s, r, p, q},
                                         {r, s, q, p},
                                         {s, r, q, p}}};
  return *std::min_element(images.begin(), images.end());
}

class IntegralSet {
 public:
  /// Validates electron-count invariants. An empty @p orbsym means all
  /// orbitals carry label 1.
  IntegralSet(int n_orb, int n_elec, int ms2, std::vector<int> orbsym = {},
              int isym = 1)
      : n_orb_(n_orb),
        n_elec_(n_elec),
        ms2_(ms2),
        orbsym_(std::move(orbsym)),
        isym_(isym) {
    if (n_orb_ < 0) throw Error("NORB must be non-negative");
    if (n_elec_ < 0 || n_elec_ > 2 * n_orb_)
      throw Error("NELEC must lie in [0, 2*NORB]");
    if (std::abs(ms2_) > n_elec_) throw Error("|MS2| must not exceed NELEC");
    if ((n_elec_ - ms2_) % 2 != 0)
      throw Error("NELEC and MS2 must have the same parity");
    if (orbsym_.empty()) orbsym_.assign(static_cast<std::size_t>(n_orb_), 1);
    if (static_cast<int>(orbsym_.size()) != n_orb_)
      throw Error("ORBSYM length must equal NORB");
    for (int label : orbsym_)
      if (label < 1) throw Error("ORBSYM labels must be positive");
    if (isym_ < 1) throw Error("ISYM must be positive");
  }

  int n_orb() const noexcept { return n_orb_; }
  int n_elec() const noexcept { return n_elec_; }
  int ms2() const noexcept { return ms2_; }
  int n_alpha() const noexcept { return (n_elec_ + ms2_) / 2; }
  int n_beta() const noexcept { return (n_elec_ - ms2_) / 2; }
  const std::vector<int>& orbsym() const noexcept { return orbsym_; }
  int isym() const noexcept { return isym_; }
  double core_energy() const noexcept { return core_energy_; }

  /// Irrep of orbital p (1-based) as an element of the XOR group.
  int irrep(int p) const {
    check_index(p);
    return orbsym_[static_cast<std::size_t>(p - 1)] - 1;
  }

  double h(int p, int q) const {
    check_index(p);
    check_index(q);
    auto it = one_body_.find(std::minmax(p, q));
    return it == one_body_.end() ? 0.0 : it->second;
  }

  double eri(int p, int q, int r, int s) const {
    check_index(p);
    check_index(q);
    check_index(r);
    check_index(s);
    auto it = two_body_.find(canonical_eri_key(p, q, r, s));
    return it == two_body_.end() ? 0.0 : it->second;
  }

  void set_core_energy(double value) noexcept { core_energy_ = value; }

  void set_h(int p, int q, double value) {
    check_index(p);
    check_index(q);
    one_body_[std::minmax(p, q)] = value;
  }

  void set_eri(int p, int q, int r, int s, double value) {
    check_index(p);
    check_index(q);
    check_index(r);
    check_index(s);
    two_body_[canonical_eri_key(p, q, r, s)] = value;
  }

  const std::map<std::pair<int, int>, double>& one_body() const noexcept {
    return one_body_;
  }
  const std::map<EriKey, double>& two_body() const noexcept {
    return two_body_;
  }

  /// True when every stored nonzero integral is totally symmetric under the
  /// orbital labels, i.e. the Hamiltonian is block diagonal by irrep.
  bool respects_symmetry() const {
    for (const auto& [key, value] : one_body_)
      if (value != 0.0 && irrep(key.first) != irrep(key.second)) return false;
    for (const auto& [key, value] : two_body_)
      if (value != 0.0 && (irrep(key[0]) ^ irrep(key[1]) ^ irrep(key[2]) ^
                           irrep(key[3])) != 0)
        return false;
    return true;
  }

 private:
  void check_index(int p) const {
    if (p < 1 || p > n_orb_)
      throw IndexError("orbital index " + std::to_string(p) +
                       " outside 1.." + std::to_string(n_orb_));
  }

  int n_orb_;
  int n_elec_;
  int ms2_;
  std::vector<int> orbsym_;
  int isym_;
  double core_energy_ = 0.0;
  std::map<std::pair<int, int>, double> one_body_;
  std::map<EriKey, double> two_body_;
};

namespace detail {

struct Token {
  std::string text;
  std::size_t line;
};

inline std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

inline std::optional<double> parse_real(std::string_view token) {
  std::string t(token);
  // Fortran writers sometimes emit D exponents.
  for (auto& c : t)
    if (c == 'D' || c == 'd') c = 'E';
  double value = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

inline std::optional<long> parse_integer(std::string_view token) {
  long value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

// Splits a namelist body into identifiers, '=' and values.
inline std::vector<Token> tokenize_namelist(std::string_view text,
                                            std::size_t line) {
  std::vector<Token> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back({std::move(current), line});
    current.clear();
  };
  for (char c : text) {
    if (c == '\n') {
      flush();
      ++line;
    } else if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      flush();
    } else if (c == '=') {
      flush();
      tokens.push_back({"=", line});
    } else {
      current.push_back(c);
    }
  }
  flush();
  return tokens;
}

}  // namespace detail

/**
 * @brief Parse an FCIDUMP document.
 *
 * Body lines are `value i j k l`. All indices nonzero gives (ij|kl); k = l = 0
 * gives h_ij; all zero gives the core energy. Lines of the form `e i 0 0 0`
 * (orbital energies written by some producers) are ignored. Later duplicates
 * overwrite earlier ones.
 *
 * @throws ParseError on a malformed header, a non-numeric token, an index
 *         outside 0..NORB or an unsupported index pattern, or inconsistent
 *         electron counts.
 */
inline IntegralSet parse_fcidump(std::istream& in) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }

  std::size_t first = 0;
  while (first < lines.size() &&
         lines[first].find_first_not_of(" \t") == std::string::npos)
    ++first;
  if (first == lines.size()) throw ParseError(1, "", "missing &FCI header");

  const std::string& opening = lines[first];
  const auto start = opening.find_first_not_of(" \t");
  if (detail::upper(opening.substr(start, 4)) != "&FCI")
    throw ParseError(first + 1, opening.substr(start, 4),
                     "header must begin with &FCI");

  // Collect header text up to the &END or '/' terminator.
  std::string header;
  std::size_t body_begin = lines.size();
  bool terminated = false;
  for (std::size_t i = first; i < lines.size() && !terminated; ++i) {
    std::string text = i == first ? lines[i].substr(start + 4) : lines[i];
    const std::string up = detail::upper(text);
    std::size_t cut = std::min(up.find("&END"), up.find('/'));
    if (cut != std::string::npos) {
      text = text.substr(0, cut);
      terminated = true;
      body_begin = i + 1;
    }
    header += text;
    header += '\n';
  }
  if (!terminated)
    throw ParseError(first + 1, "&FCI", "header is not terminated by &END or /");

  std::map<std::string, std::vector<detail::Token>> fields;
  {
    const auto tokens = detail::tokenize_namelist(header, first + 1);
    std::string key;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      const bool is_key = t + 1 < tokens.size() && tokens[t + 1].text == "=";
      if (is_key) {
        key = detail::upper(tokens[t].text);
        fields[key];
        ++t;
      } else if (tokens[t].text == "=" || key.empty()) {
        throw ParseError(tokens[t].line, tokens[t].text,
                         "unexpected token in header");
      } else {
        fields[key].push_back(tokens[t]);
      }
    }
  }

  const std::size_t header_line = first + 1;
  auto scalar = [&](const std::string& name,
                    std::optional<long> fallback) -> long {
    auto it = fields.find(name);
    if (it == fields.end()) {
      if (fallback) return *fallback;
      throw ParseError(header_line, name, "header is missing " + name);
    }
    if (it->second.size() != 1)
      throw ParseError(header_line, name, name + " must have exactly one value");
    auto value = detail::parse_integer(it->second.front().text);
    if (!value)
      throw ParseError(it->second.front().line, it->second.front().text,
                       "non-numeric value for " + name);
    return *value;
  };

  const long n_orb = scalar("NORB", std::nullopt);
  const long n_elec = scalar("NELEC", std::nullopt);
  const long ms2 = scalar("MS2", std::nullopt);
  const long isym = scalar("ISYM", 1);
  if (n_orb < 0) throw ParseError(header_line, "NORB", "NORB must be non-negative");
  if ((n_elec - ms2) % 2 != 0)
    throw ParseError(header_line, std::to_string(ms2),
                     "NELEC and MS2 parity mismatch");
  if (n_elec < 0 || n_elec > 2 * n_orb)
    throw ParseError(header_line, std::to_string(n_elec),
                     "NELEC outside [0, 2*NORB]");
  if (std::labs(ms2) > n_elec)
    throw ParseError(header_line, std::to_string(ms2), "|MS2| exceeds NELEC");
  if (isym < 1) throw ParseError(header_line, std::to_string(isym), "ISYM must be positive");

  std::vector<int> orbsym;
  if (auto it = fields.find("ORBSYM"); it != fields.end()) {
    for (const auto& tok : it->second) {
      auto v = detail::parse_integer(tok.text);
      if (!v) throw ParseError(tok.line, tok.text, "non-numeric ORBSYM entry");
      if (*v < 1) throw ParseError(tok.line, tok.text, "ORBSYM labels must be positive");
      orbsym.push_back(static_cast<int>(*v));
    }
    if (static_cast<long>(orbsym.size()) != n_orb)
      throw ParseError(header_line, "ORBSYM", "ORBSYM length differs from NORB");
  }

  IntegralSet ints(static_cast<int>(n_orb), static_cast<int>(n_elec),
                   static_cast<int>(ms2), std::move(orbsym),
                   static_cast<int>(isym));

  for (std::size_t i = body_begin; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    std::istringstream ls(lines[i]);
    std::vector<std::string> tokens;
    for (std::string tok; ls >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;
    if (tokens.size() != 5)
      throw ParseError(line_no, tokens.front(),
                       "body line must have a value and four indices");
    auto value = detail::parse_real(tokens[0]);
    if (!value) throw ParseError(line_no, tokens[0], "non-numeric integral value");
    std::array<int, 4> idx{};
    for (int k = 0; k < 4; ++k) {
      auto v = detail::parse_integer(tokens[k + 1]);
      if (!v) throw ParseError(line_no, tokens[k + 1], "non-numeric index");
      if (*v < 0 || *v > n_orb)
        throw ParseError(line_no, tokens[k + 1], "index out of range 0..NORB");
      idx[k] = static_cast<int>(*v);
    }
    const auto [p, q, r, s] = idx;
    if (p && q && r && s) {
      ints.set_eri(p, q, r, s, *value);
    } else if (p && q && !r && !s) {
      ints.set_h(p, q, *value);
    } else if (!p && !q && !r && !s) {
      ints.set_core_energy(*value);
    } else if (p && !q && !r && !s) {
      // orbital energy, not part of the Hamiltonian
    } else {
      throw ParseError(line_no, lines[i], "unsupported index pattern");
    }
  }
  return ints;
}

inline IntegralSet parse_fcidump(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_fcidump(in);
}

/// Emit an FCIDUMP document. Values use 17 significant digits so a
/// subsequent parse reproduces every accessor bit for bit.
inline void write_fcidump(const IntegralSet& ints, std::ostream& out) {
  char buf[64];
  auto real = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return std::string(buf);
  };
  out << "&FCI NORB=" << ints.n_orb() << ",NELEC=" << ints.n_elec()
      << ",MS2=" << ints.ms2() << ",\n ORBSYM=";
  for (int label : ints.orbsym()) out << label << ",";
  out << "\n ISYM=" << ints.isym() << ",\n&END\n";
  for (const auto& [key, value] : ints.two_body())
    out << real(value) << ' ' << key[0] << ' ' << key[1] << ' ' << key[2]
        << ' ' << key[3] << '\n';
  for (const auto& [key, value] : ints.one_body())
    out << real(value) << ' ' << key.first << ' ' << key.second << " 0 0\n";
  out << real(ints.core_energy()) << " 0 0 0 0\n";
}

inline std::string write_fcidump(const IntegralSet& ints) {
  std::ostringstream out;
  write_fcidump(ints, out);
  return out.str();
}

}  // namespace orbent
