#pragma once

// w-hermitean pairings on free modules and the evaluation map from the
// coinvariants of the quadratic functor: a gamma-term with vector m
// contributes conj(m_k) m_l to the (k,l) entry, a symmetric-square term
// (m, m') contributes conj(m_k) m'_l + conj(m'_k) m_l. The preimage
// construction splits each diagonal entry as 2b + delta + (f + conj(f))
// with b an integer multiple of the identity and delta in {0,1}.

#include <utility>
#include <vector>

#include "gric/gamma.hpp"

namespace gric {

class HermitianForm {
 public:
  HermitianForm(OrientationCharacter w, RingMatrix entries)
      : w_(std::move(w)), h_(std::move(entries)) {
    if (h_.rows() != h_.cols())
      throw Error(ErrorKind::shape_mismatch, "hermitean matrix must be square");
    if (!(conjugate_transpose(h_, w_) == h_))
      throw Error(ErrorKind::not_hermitian,
                  "matrix is not fixed by the conjugate transpose");
  }

  static HermitianForm zero(const GroupClass& cls, OrientationCharacter w,
                            int rank) {
    return HermitianForm(std::move(w), RingMatrix(cls, rank, rank));
  }

  int rank() const { return static_cast<int>(h_.rows()); }
  const GroupClass& group_class() const { return h_.group_class(); }
  const OrientationCharacter& w() const { return w_; }
  const RingMatrix& matrix() const { return h_; }
  const RingElement& at(int i, int j) const { return h_.at(i, j); }

  friend bool operator==(const HermitianForm& a, const HermitianForm& b) {
    return a.h_ == b.h_;
  }

 private:
  OrientationCharacter w_;
  RingMatrix h_;
};

inline HermitianForm bm_evaluate(const GammaElement& x) {
  const GroupClass& cls = x.group_class();
  const OrientationCharacter& w = x.w();
  const int r = x.rank();
  RingMatrix h(cls, r, r);
  for (const auto& [v, mult] : x.gamma_terms()) {
    for (int k = 0; k < r; ++k) {
      if (v[k].is_zero()) continue;
      RingElement ck = involute(v[k], w);
      for (int l = 0; l < r; ++l) {
        if (v[l].is_zero()) continue;
        h.at(k, l) += mult * (ck * v[l]);
      }
    }
  }
  for (const auto& [m, m2, mult] : x.odot_terms()) {
    for (int k = 0; k < r; ++k) {
      RingElement cmk = involute(m[k], w);
      RingElement cm2k = involute(m2[k], w);
      for (int l = 0; l < r; ++l) {
        if (!cmk.is_zero() && !m2[l].is_zero()) h.at(k, l) += mult * (cmk * m2[l]);
        if (!cm2k.is_zero() && !m[l].is_zero()) h.at(k, l) += mult * (cm2k * m[l]);
      }
    }
  }
  return HermitianForm(w, std::move(h));
}

// Constructive preimage: bm_evaluate(bm_preimage(H)) == H exactly.
// Off-diagonal entries h_ij (i < j) contribute the pair
// (conj(h_ij) e_i, e_j); each diagonal h_ii = 2b + delta + f + conj(f)
// contributes ((b + f) e_i, e_i) plus delta gamma(e_i).
inline GammaElement bm_preimage(const HermitianForm& h) {
  const GroupClass& cls = h.group_class();
  if (!cls.is_torsion_free())
    throw Error(ErrorKind::unsupported,
                "preimage construction needs a torsion-free class");
  const OrientationCharacter& w = h.w();
  const int r = h.rank();
  GammaElement out(cls, w, r);
  for (int i = 0; i < r; ++i) {
    for (int j = i + 1; j < r; ++j) {
      const RingElement& hij = h.at(i, j);
      if (hij.is_zero()) continue;
      out.add_odot(unit_vector(cls, r, i, involute(hij, w)),
                   unit_vector(cls, r, j));
    }
    // diagonal: orbit-sort the terms of h_ii under g ~ conj(g)
    const RingElement& hii = h.at(i, i);
    RingElement bf(cls);  // b + f
    Int delta = 0;
    for (const auto& [g, c] : hii.terms()) {
      if (g.is_identity()) {
        // c = 2 b + delta with delta in {0,1}
        delta = c % 2 == 0 ? Int(0) : Int(1);
        bf.add_term(g, (c - delta) / 2);
        continue;
      }
      GroupElement gi = invert(g);
      if (gi == g)
        throw Error(ErrorKind::unsupported,
                    "2-torsion element fixed by the involution");
      // hermitean symmetry pairs the coefficients of g and conj(g);
      // keep the lexicographically smaller representative
      if (gi < g) continue;
      bf.add_term(g, c);
    }
    if (!bf.is_zero())
      out.add_odot(unit_vector(cls, r, i, bf), unit_vector(cls, r, i));
    if (delta != 0) out.add_gamma(unit_vector(cls, r, i));
  }
  return out;
}

// even pairing: the mod-2 augmentation of every diagonal self-value vanishes
inline bool is_even(const HermitianForm& h) {
  for (int i = 0; i < h.rank(); ++i)
    if (epsilon2(h.at(i, i)) != 0) return false;
  return true;
}

// base change H -> U H U*
inline HermitianForm transform(const HermitianForm& h, const RingMatrix& u) {
  if (u.rows() != u.cols() || static_cast<int>(u.rows()) != h.rank())
    throw Error(ErrorKind::shape_mismatch,
                "base change matrix must be square of the form's rank");
  RingMatrix m = mat_mul(mat_mul(u, h.matrix()), conjugate_transpose(u, h.w()));
  return HermitianForm(h.w(), std::move(m));
}

}  // namespace gric
