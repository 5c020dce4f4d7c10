#pragma once

// Formal calculus in the w-twisted coinvariants of the quadratic functor
// applied to a free module of finite rank. Elements are integer
// combinations of gamma-terms (images of module vectors under the
// universal quadratic map) and symmetric-square terms. The normal form
// pushes everything into a {0,1} vector of gamma basis terms plus an
// upper triangular coefficient matrix, using
//   gamma(m + m') = gamma(m) + gamma(m') + [m . m'],
//   gamma(g m)    = w(g) gamma(m),   2 gamma(m) = [m . m],
//   [m . g m']    = [conj(g) m . m'],  [(g - conj(g)) e_i . e_i] = 0.

#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "gric/groupring.hpp"

namespace gric {

using ModuleVector = std::vector<RingElement>;

inline ModuleVector zero_vector(const GroupClass& cls, int rank) {
  return ModuleVector(rank, RingElement::zero(cls));
}
inline ModuleVector unit_vector(const GroupClass& cls, int rank, int i,
                                RingElement coeff) {
  ModuleVector v = zero_vector(cls, rank);
  v.at(i) = std::move(coeff);
  return v;
}
inline ModuleVector unit_vector(const GroupClass& cls, int rank, int i) {
  return unit_vector(cls, rank, i, RingElement::one(cls));
}

class GammaElement {
 public:
  GammaElement(GroupClass cls, OrientationCharacter w, int rank)
      : cls_(std::move(cls)), w_(std::move(w)), rank_(rank) {
    if (rank_ < 0) throw Error(ErrorKind::input, "rank must be >= 0");
  }

  const GroupClass& group_class() const { return cls_; }
  const OrientationCharacter& w() const { return w_; }
  int rank() const { return rank_; }

  GammaElement& add_gamma(ModuleVector v, Int mult = 1) {
    check_vector(v);
    if (mult != 0) gamma_.emplace_back(std::move(v), std::move(mult));
    return *this;
  }
  GammaElement& add_odot(ModuleVector m, ModuleVector m2, Int mult = 1) {
    check_vector(m);
    check_vector(m2);
    if (mult != 0) odot_.emplace_back(std::move(m), std::move(m2), std::move(mult));
    return *this;
  }

  const std::vector<std::pair<ModuleVector, Int>>& gamma_terms() const {
    return gamma_;
  }
  const std::vector<std::tuple<ModuleVector, ModuleVector, Int>>& odot_terms()
      const {
    return odot_;
  }

  bool structurally_empty() const { return gamma_.empty() && odot_.empty(); }

  friend GammaElement operator+(GammaElement a, const GammaElement& b) {
    if (!a.cls_.same_group(b.cls_) || a.rank_ != b.rank_)
      throw Error(ErrorKind::class_mismatch,
                  "gamma elements live over different modules");
    a.gamma_.insert(a.gamma_.end(), b.gamma_.begin(), b.gamma_.end());
    a.odot_.insert(a.odot_.end(), b.odot_.begin(), b.odot_.end());
    return a;
  }
  friend GammaElement operator-(GammaElement a, const GammaElement& b) {
    GammaElement neg = b;
    for (auto& [v, c] : neg.gamma_) c = -c;
    for (auto& [m, m2, c] : neg.odot_) c = -c;
    return std::move(a) + neg;
  }

 private:
  void check_vector(const ModuleVector& v) const {
    if (static_cast<int>(v.size()) != rank_)
      throw Error(ErrorKind::shape_mismatch, "module vector has wrong extent");
    for (const RingElement& x : v)
      if (!x.group_class().same_group(cls_))
        throw Error(ErrorKind::class_mismatch,
                    "vector coordinate over the wrong group class");
  }
  GroupClass cls_;
  OrientationCharacter w_;
  int rank_;
  std::vector<std::pair<ModuleVector, Int>> gamma_;
  std::vector<std::tuple<ModuleVector, ModuleVector, Int>> odot_;
};

struct GammaNormalForm {
  std::vector<int> eta;                          // F_2 multiplicities
  std::map<std::pair<int, int>, RingElement> odot;  // upper triangular, i <= j
  GammaElement canonical;

  bool is_zero() const {
    for (int b : eta)
      if (b) return false;
    return odot.empty();
  }
};

namespace detail {

struct Monomial {
  Int coeff;
  GroupElement g;
  int index;
};

inline std::vector<Monomial> monomials(const ModuleVector& v) {
  std::vector<Monomial> out;
  for (size_t i = 0; i < v.size(); ++i)
    for (const auto& [g, c] : v[i].terms())
      out.push_back({c, g, static_cast<int>(i)});
  return out;
}

}  // namespace detail

inline GammaNormalForm gamma_normal_form(const GammaElement& x) {
  const GroupClass& cls = x.group_class();
  if (!cls.is_torsion_free())
    throw Error(ErrorKind::formal_mode,
                "gamma normal forms need a torsion-free class with a solved "
                "word problem");
  const OrientationCharacter& w = x.w();
  const int r = x.rank();

  std::vector<Int> eta_mult(r, 0);
  std::map<std::pair<int, int>, RingElement> acc;

  const auto odot_add = [&](const GroupElement& g, int i, const GroupElement& h,
                            int j, const Int& coeff) {
    if (coeff == 0) return;
    if (i <= j) {
      // [g e_i . h e_j] = w(h) [h^-1 g e_i . e_j]
      GroupElement u = multiply(invert(h), g);
      Int c = w.value(h) < 0 ? Int(-coeff) : coeff;
      auto [it, ok] = acc.try_emplace(std::make_pair(i, j), RingElement::zero(cls));
      it->second.add_term(u, c);
    } else {
      // fold across the symmetry to (j, i): picks up conj of the coefficient
      GroupElement u = multiply(invert(g), h);
      Int c = w.value(g) < 0 ? Int(-coeff) : coeff;
      auto [it, ok] = acc.try_emplace(std::make_pair(j, i), RingElement::zero(cls));
      it->second.add_term(u, c);
    }
  };

  for (const auto& [v, mult] : x.gamma_terms()) {
    std::vector<detail::Monomial> ms = detail::monomials(v);
    for (const auto& m : ms) {
      Int c = mult * m.coeff * m.coeff;
      eta_mult[m.index] += w.value(m.g) < 0 ? Int(-c) : c;
    }
    for (size_t a = 0; a < ms.size(); ++a)
      for (size_t b = a + 1; b < ms.size(); ++b)
        odot_add(ms[a].g, ms[a].index, ms[b].g, ms[b].index,
                 mult * ms[a].coeff * ms[b].coeff);
  }
  for (const auto& [m, m2, mult] : x.odot_terms()) {
    for (const auto& ma : detail::monomials(m))
      for (const auto& mb : detail::monomials(m2))
        odot_add(ma.g, ma.index, mb.g, mb.index, mult * ma.coeff * mb.coeff);
  }

  // 2 gamma(e_i) = [e_i . e_i]: carry the even part into the diagonal
  GammaNormalForm nf{std::vector<int>(r, 0), {}, GammaElement(cls, w, r)};
  for (int i = 0; i < r; ++i) {
    Int n = eta_mult[i];
    Int d = n % 2 == 0 ? Int(0) : Int(1);
    Int q = (n - d) / 2;
    nf.eta[i] = d == 0 ? 0 : 1;
    if (q != 0) {
      auto [it, ok] = acc.try_emplace(std::make_pair(i, i), RingElement::zero(cls));
      it->second.add_term(GroupElement::identity(cls), q);
    }
  }

  // fold each diagonal coefficient across g ~ conj(g)
  for (auto& [key, val] : acc) {
    if (key.first != key.second) continue;
    RingElement folded(cls);
    for (const auto& [g, c] : val.terms()) {
      if (g.is_identity()) {
        folded.add_term(g, c);
        continue;
      }
      GroupElement gi = invert(g);
      if (gi == g)
        throw Error(ErrorKind::unsupported,
                    "2-torsion element fixed by the involution");
      if (gi < g)
        folded.add_term(gi, w.value(g) < 0 ? Int(-c) : c);
      else
        folded.add_term(g, c);
    }
    val = std::move(folded);
  }

  for (auto it = acc.begin(); it != acc.end();) {
    if (it->second.is_zero())
      it = acc.erase(it);
    else
      ++it;
  }

  nf.odot = std::move(acc);
  for (int i = 0; i < r; ++i)
    if (nf.eta[i]) nf.canonical.add_gamma(unit_vector(cls, r, i));
  for (const auto& [key, val] : nf.odot)
    nf.canonical.add_odot(unit_vector(cls, r, key.first, val),
                          unit_vector(cls, r, key.second));
  return nf;
}

inline bool nf_equal(const GammaElement& a, const GammaElement& b) {
  GammaNormalForm na = gamma_normal_form(a);
  GammaNormalForm nb = gamma_normal_form(b);
  return na.eta == nb.eta && na.odot == nb.odot;
}

// image in F_2 tensor the module: coordinates reduced mod (2, I_w);
// symmetric-square terms die, gamma terms reduce their vectors
struct Mod2Vector {
  int rank = 0;
  std::vector<int> bits;

  bool is_zero() const {
    for (int b : bits)
      if (b) return false;
    return true;
  }
  friend bool operator==(const Mod2Vector& a, const Mod2Vector& b) {
    return a.bits == b.bits;
  }
};

inline Mod2Vector reduce_mod2(const GammaElement& x) {
  Mod2Vector out{x.rank(), std::vector<int>(x.rank(), 0)};
  for (const auto& [v, mult] : x.gamma_terms()) {
    if (mult % 2 == 0) continue;
    for (int i = 0; i < x.rank(); ++i) {
      Int a = augment(v[i]);
      if (a % 2 != 0) out.bits[i] ^= 1;
    }
  }
  return out;
}

// Automorphism alpha_theta(m, e) = (m, e + theta(m)) of a declared
// splitting M + E, applied termwise: gamma(v) -> gamma(alpha(v)) and
// [m . m'] -> [alpha(m) . alpha(m')]. theta is an (m_rank x e_rank)
// matrix acting with left coefficients.
inline ModuleVector apply_alpha_theta_vector(const ModuleVector& v, int m_rank,
                                             const RingMatrix& theta) {
  ModuleVector out = v;
  const int e_rank = static_cast<int>(theta.cols());
  for (int j = 0; j < e_rank; ++j) {
    RingElement s = RingElement::zero(theta.group_class());
    for (int i = 0; i < m_rank; ++i) s += v[i] * theta.at(i, j);
    out[m_rank + j] += s;
  }
  return out;
}

inline GammaElement apply_alpha_theta(const GammaElement& x, int m_rank,
                                      const RingMatrix& theta) {
  if (m_rank < 0 || static_cast<int>(theta.rows()) != m_rank ||
      m_rank + static_cast<int>(theta.cols()) != x.rank())
    throw Error(ErrorKind::shape_mismatch,
                "theta does not match the declared splitting");
  if (!theta.group_class().same_group(x.group_class()))
    throw Error(ErrorKind::class_mismatch, "theta over the wrong group class");
  GammaElement out(x.group_class(), x.w(), x.rank());
  for (const auto& [v, mult] : x.gamma_terms())
    out.add_gamma(apply_alpha_theta_vector(v, m_rank, theta), mult);
  for (const auto& [m, m2, mult] : x.odot_terms())
    out.add_odot(apply_alpha_theta_vector(m, m_rank, theta),
                 apply_alpha_theta_vector(m2, m_rank, theta), mult);
  return out;
}

// free rank of the quadratic functor on Z^r (trivial group only)
inline Int gamma_free_rank(const GroupClass& cls, int r) {
  if (!cls.is_trivial())
    throw Error(ErrorKind::unsupported,
                "free rank formula applies to the trivial group class");
  if (r < 0) throw Error(ErrorKind::input, "rank must be >= 0");
  return Int(r) * (r + 1) / 2;
}

}  // namespace gric
