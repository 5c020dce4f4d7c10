#pragma once

// Text front end: the line-oriented presentation file format, ring element
// expressions, and JSON conversions for reports. Format:
//
//   name: bs12
//   class: bs 1 2 | free 2 | abelian 2 | klein | surface 2 orientable
//         | freebycyclic 2 <image words> | formal 2
//   gens: a t
//   rels:
//   t a t^-1 a^-2
//   w: t -1
//   aspherical: true
//
// Relator lines hold space-separated tokens like t a t^-1 a^-2; words
// inside a class line use '.' concatenation (y1.y2^-1).

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gric/bstorsion.hpp"
#include "gric/cup.hpp"
#include "gric/gamma.hpp"
#include "gric/hermitian.hpp"

namespace gric {

using Json = nlohmann::ordered_json;

namespace io_detail {

inline std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline int find_gen(const std::vector<std::string>& gens, const std::string& name) {
  auto it = std::find(gens.begin(), gens.end(), name);
  if (it == gens.end())
    throw Error(ErrorKind::input, "undeclared generator '" + name + "'");
  return static_cast<int>(it - gens.begin());
}

// token: name or name^<int>
inline void append_token(std::vector<Letter>& letters,
                         const std::vector<std::string>& gens,
                         const std::string& token) {
  std::string name = token;
  long long exp = 1;
  size_t caret = token.find('^');
  if (caret != std::string::npos) {
    name = token.substr(0, caret);
    std::string e = token.substr(caret + 1);
    try {
      exp = std::stoll(e);
    } catch (...) {
      throw Error(ErrorKind::input, "bad exponent in token '" + token + "'");
    }
  }
  int gen = find_gen(gens, name);
  int8_t sign = exp >= 0 ? int8_t{1} : int8_t{-1};
  for (long long i = 0, n = exp >= 0 ? exp : -exp; i < n; ++i)
    letters.push_back({gen, sign});
}

inline FreeWord parse_word_tokens(const std::vector<std::string>& tokens,
                                  const std::vector<std::string>& gens) {
  std::vector<Letter> letters;
  for (const std::string& t : tokens) append_token(letters, gens, t);
  return FreeWord(std::move(letters));
}

// dotted word: y1.y2^-1, or "1" for the empty word
inline FreeWord parse_dotted_word(const std::string& text,
                                  const std::vector<std::string>& gens) {
  if (text == "1") return FreeWord();
  std::vector<Letter> letters;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, '.')) append_token(letters, gens, cur);
  return FreeWord(std::move(letters));
}

}  // namespace io_detail

// ---------------------------------------------------------------------------
// presentation files

inline Presentation parse_presentation(const std::string& text) {
  using io_detail::split_ws;
  using io_detail::trim;

  std::string name = "presentation";
  std::vector<std::string> class_tokens;
  std::vector<std::string> gens;
  std::vector<std::vector<std::string>> rel_lines;
  std::vector<std::pair<std::string, int>> w_entries;
  bool aspherical = false;
  bool in_rels = false;

  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto starts = [&t](const char* key) {
      return t.rfind(key, 0) == 0;
    };
    if (starts("name:")) {
      name = trim(t.substr(5));
      in_rels = false;
    } else if (starts("class:")) {
      class_tokens = split_ws(t.substr(6));
      in_rels = false;
    } else if (starts("gens:")) {
      gens = split_ws(t.substr(5));
      in_rels = false;
    } else if (starts("rels:")) {
      in_rels = true;
      std::string rest = trim(t.substr(5));
      if (!rest.empty()) rel_lines.push_back(split_ws(rest));
    } else if (starts("w:")) {
      std::vector<std::string> toks = split_ws(t.substr(2));
      if (toks.size() % 2 != 0)
        throw Error(ErrorKind::input, "w line needs generator/sign pairs");
      for (size_t i = 0; i < toks.size(); i += 2) {
        int s = 0;
        if (toks[i + 1] == "1" || toks[i + 1] == "+1") s = 1;
        if (toks[i + 1] == "-1") s = -1;
        if (s == 0)
          throw Error(ErrorKind::input, "w signs must be +1 or -1");
        w_entries.emplace_back(toks[i], s);
      }
      in_rels = false;
    } else if (starts("aspherical:")) {
      std::string v = trim(t.substr(11));
      aspherical = (v == "true" || v == "1" || v == "yes");
      in_rels = false;
    } else if (in_rels) {
      rel_lines.push_back(split_ws(t));
    } else {
      throw Error(ErrorKind::input, "unrecognized line: '" + t + "'");
    }
  }

  if (class_tokens.empty())
    throw Error(ErrorKind::input, "missing class line");
  if (gens.empty()) throw Error(ErrorKind::input, "missing gens line");

  GroupClass cls = [&]() -> GroupClass {
    const std::string& tag = class_tokens[0];
    const auto arg = [&](size_t i) -> long long {
      if (i >= class_tokens.size())
        throw Error(ErrorKind::input, "class line is missing an argument");
      try {
        return std::stoll(class_tokens[i]);
      } catch (...) {
        throw Error(ErrorKind::input,
                    "bad class argument '" + class_tokens[i] + "'");
      }
    };
    if (tag == "free") return GroupClass::free_group(static_cast<int>(arg(1)), gens);
    if (tag == "abelian")
      return GroupClass::free_abelian(static_cast<int>(arg(1)), gens);
    if (tag == "klein") return GroupClass::klein(gens);
    if (tag == "surface") {
      if (class_tokens.size() < 3)
        throw Error(ErrorKind::input, "surface class needs genus and a flag");
      bool orientable = class_tokens[2] == "orientable";
      if (!orientable && class_tokens[2] != "nonorientable")
        throw Error(ErrorKind::input,
                    "surface flag must be orientable or nonorientable");
      return GroupClass::surface(static_cast<int>(arg(1)), orientable, gens);
    }
    if (tag == "bs") {
      if (arg(1) != 1)
        throw Error(ErrorKind::input, "only BS(1,m) classes are supported");
      return GroupClass::baumslag_solitar(arg(2), gens);
    }
    if (tag == "freebycyclic") {
      int rank = static_cast<int>(arg(1));
      if (static_cast<int>(class_tokens.size()) != 2 + rank)
        throw Error(ErrorKind::input,
                    "freebycyclic needs one image word per fibre generator");
      std::vector<std::string> fibre(gens.begin(),
                                     gens.begin() + std::min<size_t>(rank, gens.size()));
      std::vector<FreeWord> images;
      for (int i = 0; i < rank; ++i)
        images.push_back(io_detail::parse_dotted_word(class_tokens[2 + i], fibre));
      return GroupClass::free_by_cyclic(std::move(images), gens);
    }
    if (tag == "formal") {
      // arity is optional; default to the declared generator count
      int n = class_tokens.size() > 1 ? static_cast<int>(arg(1))
                                      : static_cast<int>(gens.size());
      return GroupClass::formal(n, gens);
    }
    throw Error(ErrorKind::input, "unknown class tag '" + tag + "'");
  }();

  if (static_cast<int>(gens.size()) != cls.arity())
    throw Error(ErrorKind::input, "generator count does not match the class");

  std::vector<FreeWord> relators;
  for (const auto& toks : rel_lines)
    relators.push_back(io_detail::parse_word_tokens(toks, gens));

  std::vector<int> signs(cls.arity(), 1);
  for (const auto& [gname, s] : w_entries)
    signs[io_detail::find_gen(gens, gname)] = s;
  OrientationCharacter w(cls, signs);

  return Presentation(name, cls, gens, relators, w, aspherical);
}

inline std::string render_presentation(const Presentation& p) {
  return p.render();
}

// ---------------------------------------------------------------------------
// ring element expressions:  1 - 2*t.a^-2 + x.y

inline RingElement parse_ring_element(const std::string& text,
                                      const GroupClass& cls) {
  const std::vector<std::string>& gens = cls.gen_names();
  RingElement out(cls);
  std::string s = io_detail::trim(text);
  if (s.empty() || s == "0") return out;
  size_t pos = 0;
  int sign = 1;
  const auto skip_ws = [&]() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  };
  skip_ws();
  if (s[pos] == '+' || s[pos] == '-') {
    sign = s[pos] == '-' ? -1 : 1;
    ++pos;
  }
  while (pos < s.size()) {
    skip_ws();
    // coefficient
    Int coeff = 1;
    bool saw_digit = false;
    std::string digits;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      digits += s[pos++];
      saw_digit = true;
    }
    if (saw_digit) coeff = Int(digits);
    skip_ws();
    if (pos < s.size() && s[pos] == '*') {
      ++pos;
      skip_ws();
    }
    // word part
    GroupElement g = GroupElement::identity(cls);
    if (pos < s.size() && s[pos] != '+' && s[pos] != '-') {
      std::string word;
      while (pos < s.size() && s[pos] != '+' && s[pos] != '-' &&
             !std::isspace(static_cast<unsigned char>(s[pos]))) {
        // a '-' directly after '^' belongs to the exponent
        word += s[pos];
        if (s[pos] == '^' && pos + 1 < s.size() && s[pos + 1] == '-')
          word += s[++pos];
        ++pos;
      }
      if (!word.empty())
        g = normalize_word(cls, io_detail::parse_dotted_word(word, gens));
      else if (!saw_digit)
        throw Error(ErrorKind::input, "empty term in ring expression");
    } else if (!saw_digit) {
      throw Error(ErrorKind::input, "empty term in ring expression");
    }
    out.add_term(g, sign < 0 ? Int(-coeff) : coeff);
    skip_ws();
    if (pos >= s.size()) break;
    if (s[pos] == '+')
      sign = 1;
    else if (s[pos] == '-')
      sign = -1;
    else
      throw Error(ErrorKind::input,
                  std::string("expected + or - in ring expression, got '") +
                      s[pos] + "'");
    ++pos;
    skip_ws();
    if (pos >= s.size())
      throw Error(ErrorKind::input, "dangling operator in ring expression");
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON renderings

inline Json matrix_json(const RingMatrix& m) {
  Json rows = Json::array();
  for (size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (size_t j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).text());
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json vector_json(const ModuleVector& v) {
  Json out = Json::array();
  for (const RingElement& x : v) out.push_back(x.text());
  return out;
}

inline ModuleVector vector_from_json(const Json& j, const GroupClass& cls) {
  ModuleVector v;
  for (const auto& coord : j)
    v.push_back(parse_ring_element(coord.get<std::string>(), cls));
  return v;
}

inline Json gamma_json(const GammaElement& x) {
  Json out;
  out["rank"] = x.rank();
  Json gs = Json::array();
  for (const auto& [v, mult] : x.gamma_terms()) {
    Json t;
    t["mult"] = mult.str();
    t["vector"] = vector_json(v);
    gs.push_back(std::move(t));
  }
  out["gamma"] = std::move(gs);
  Json os = Json::array();
  for (const auto& [m, m2, mult] : x.odot_terms()) {
    Json t;
    t["mult"] = mult.str();
    t["left"] = vector_json(m);
    t["right"] = vector_json(m2);
    os.push_back(std::move(t));
  }
  out["odot"] = std::move(os);
  return out;
}

inline GammaElement gamma_from_json(const Json& j, const GroupClass& cls,
                                    const OrientationCharacter& w) {
  int rank = j.at("rank").get<int>();
  GammaElement x(cls, w, rank);
  if (j.contains("gamma"))
    for (const auto& t : j.at("gamma")) {
      Int mult = t.contains("mult") ? Int(t.at("mult").get<std::string>()) : Int(1);
      x.add_gamma(vector_from_json(t.at("vector"), cls), mult);
    }
  if (j.contains("odot"))
    for (const auto& t : j.at("odot")) {
      Int mult = t.contains("mult") ? Int(t.at("mult").get<std::string>()) : Int(1);
      x.add_odot(vector_from_json(t.at("left"), cls),
                 vector_from_json(t.at("right"), cls), mult);
    }
  return x;
}

inline Json hermitian_json(const HermitianForm& h) {
  Json out;
  out["rank"] = h.rank();
  out["entries"] = matrix_json(h.matrix());
  return out;
}

inline HermitianForm hermitian_from_json(const Json& j, const GroupClass& cls,
                                         const OrientationCharacter& w) {
  int rank = j.at("rank").get<int>();
  RingMatrix m(cls, rank, rank);
  const Json& entries = j.at("entries");
  for (int i = 0; i < rank; ++i)
    for (int k = 0; k < rank; ++k)
      m.at(i, k) = parse_ring_element(entries.at(i).at(k).get<std::string>(), cls);
  return HermitianForm(w, std::move(m));
}

// class spec string for JSON inputs: same syntax as the class line with
// generator names appended after '|', e.g. "bs 1 2 | a t"
inline std::pair<GroupClass, OrientationCharacter> parse_class_spec(
    const Json& j) {
  std::string class_line = j.at("class").get<std::string>();
  std::vector<std::string> gens;
  if (j.contains("gens"))
    for (const auto& g : j.at("gens")) gens.push_back(g.get<std::string>());
  if (gens.empty())
    throw Error(ErrorKind::input, "class spec needs a gens array");
  std::ostringstream file;
  file << "class: " << class_line << "\n";
  file << "gens:";
  for (const std::string& g : gens) file << ' ' << g;
  file << "\nrels:\n";
  if (j.contains("w")) {
    file << "w:";
    for (auto it = j.at("w").begin(); it != j.at("w").end(); ++it)
      file << ' ' << it.key() << ' ' << it.value().get<int>();
    file << "\n";
  }
  Presentation p = parse_presentation(file.str());
  return {p.group_class(), p.w()};
}

inline Json mod2_json(const Mod2Vector& v) {
  Json bits = Json::array();
  for (int b : v.bits) bits.push_back(b);
  return bits;
}

inline Json torsion_json(const TorsionReport& rep) {
  Json out;
  out["m"] = rep.m;
  out["depth"] = rep.depth;
  out["basis_size"] = rep.basis_size.str();
  out["symmetry_rows"] = rep.symmetry_rows;
  out["doubling_rows"] = rep.doubling_rows;
  Json divisors = Json::array();
  for (const Int& d : rep.divisors) divisors.push_back(d.str());
  out["divisors"] = std::move(divisors);
  out["free_rank"] = rep.free_rank.str();
  out["torsion_free"] = rep.torsion_free;
  out["transforms_verified"] = rep.transforms_verified;
  return out;
}

// stable content digest (FNV-1a, hex) for report headers
inline std::string content_digest(const std::string& data) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace gric
