#include "gatelab/weingarten.hpp"

#include <string>
#include <vector>

#include "gatelab/ensembles.hpp"
#include "gatelab/errors.hpp"
#include "gatelab/rng.hpp"
#include "gatelab/stats.hpp"

namespace gatelab {

namespace {

double delta(std::size_t a, std::size_t b) { return a == b ? 1.0 : 0.0; }

void require_moment_args(const MomentIndices& idx, std::size_t n) {
  if (n < 2) throw ValidationError("degree2_moment: requires n >= 2 (formula divides by n^2 - 1)");
  for (std::size_t v : {idx.i1, idx.i2, idx.i1p, idx.i2p, idx.j1, idx.j2, idx.j1p, idx.j2p}) {
    if (v >= n) {
      throw ValidationError("degree2_moment: index " + std::to_string(v) + " out of range for n=" +
                            std::to_string(n));
    }
  }
}

// All degree-2 moments for U(n), indexed [i1][i2][i1p][i2p][j1][j2][j1p][j2p].
class MomentTable {
 public:
  explicit MomentTable(std::size_t n) : n_(n), values_(pow8(n)) {
    MomentIndices idx;
    std::size_t k = 0;
    for (idx.i1 = 0; idx.i1 < n; ++idx.i1)
      for (idx.i2 = 0; idx.i2 < n; ++idx.i2)
        for (idx.i1p = 0; idx.i1p < n; ++idx.i1p)
          for (idx.i2p = 0; idx.i2p < n; ++idx.i2p)
            for (idx.j1 = 0; idx.j1 < n; ++idx.j1)
              for (idx.j2 = 0; idx.j2 < n; ++idx.j2)
                for (idx.j1p = 0; idx.j1p < n; ++idx.j1p)
                  for (idx.j2p = 0; idx.j2p < n; ++idx.j2p) values_[k++] = degree2_moment(idx, n);
  }

  double operator()(std::size_t i1, std::size_t i2, std::size_t i1p, std::size_t i2p,
                    std::size_t j1, std::size_t j2, std::size_t j1p, std::size_t j2p) const {
    std::size_t k = i1;
    for (std::size_t v : {i2, i1p, i2p, j1, j2, j1p, j2p}) k = k * n_ + v;
    return values_[k];
  }

 private:
  static std::size_t pow8(std::size_t n) {
    std::size_t p = 1;
    for (int i = 0; i < 8; ++i) p *= n;
    return p;
  }

  std::size_t n_;
  std::vector<double> values_;
};

// Two-copy space H_A H_B H_A' H_B', index ((a*N + b)*N + a')*N + b'.
struct TwoCopyIndex {
  std::size_t n;
  std::size_t operator()(std::size_t a, std::size_t b, std::size_t ap, std::size_t bp) const {
    return ((a * n + b) * n + ap) * n + bp;
  }
};

// Permutation exchanging the A and A' factors.
ComplexMatrix swap_a_copies(std::size_t n) {
  const TwoCopyIndex at{n};
  const std::size_t dim = n * n * n * n;
  ComplexMatrix s(dim, dim);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t ap = 0; ap < n; ++ap)
        for (std::size_t bp = 0; bp < n; ++bp) s(at(ap, b, a, bp), at(a, b, ap, bp)) = 1.0;
  return s;
}

// <(W (x) W) q (W (x) W)^dagger> over W = U^A (x) U^B, both Haar.
ComplexMatrix twirl(const ComplexMatrix& q, std::size_t n, const MomentTable& mom) {
  const TwoCopyIndex at{n};
  const std::size_t dim = q.rows();
  ComplexMatrix after_a(dim, dim);
  // A factors: output (a, a'; c, c') from input (pa, pa'; qa, qa').
  for (std::size_t a = 0; a < n; ++a)
   for (std::size_t ap = 0; ap < n; ++ap)
    for (std::size_t c = 0; c < n; ++c)
     for (std::size_t cp = 0; cp < n; ++cp)
      for (std::size_t pa = 0; pa < n; ++pa)
       for (std::size_t pap = 0; pap < n; ++pap)
        for (std::size_t qa = 0; qa < n; ++qa)
         for (std::size_t qap = 0; qap < n; ++qap) {
           const double w = mom(a, ap, c, cp, pa, pap, qa, qap);
           if (w == 0.0) continue;
           for (std::size_t b = 0; b < n; ++b)
             for (std::size_t bp = 0; bp < n; ++bp)
               for (std::size_t d = 0; d < n; ++d)
                 for (std::size_t dp = 0; dp < n; ++dp)
                   after_a(at(a, b, ap, bp), at(c, d, cp, dp)) +=
                       w * q(at(pa, b, pap, bp), at(qa, d, qap, dp));
         }
  ComplexMatrix out(dim, dim);
  for (std::size_t b = 0; b < n; ++b)
   for (std::size_t bp = 0; bp < n; ++bp)
    for (std::size_t d = 0; d < n; ++d)
     for (std::size_t dp = 0; dp < n; ++dp)
      for (std::size_t pb = 0; pb < n; ++pb)
       for (std::size_t pbp = 0; pbp < n; ++pbp)
        for (std::size_t qb = 0; qb < n; ++qb)
         for (std::size_t qbp = 0; qbp < n; ++qbp) {
           const double w = mom(b, bp, d, dp, pb, pbp, qb, qbp);
           if (w == 0.0) continue;
           for (std::size_t a = 0; a < n; ++a)
             for (std::size_t ap = 0; ap < n; ++ap)
               for (std::size_t c = 0; c < n; ++c)
                 for (std::size_t cp = 0; cp < n; ++cp)
                   out(at(a, b, ap, bp), at(c, d, cp, dp)) +=
                       w * after_a(at(a, pb, ap, pbp), at(c, qb, cp, qbp));
         }
  return out;
}

// N^4 <tr rho_R^2(U W V)> = tr[ <(W(x)W) Q (W(x)W)^dagger> P ] with
// Q = (V(x)V) S_AA' (V(x)V)^dagger and P = (U(x)U)^dagger S_AA' (U(x)U).
double averaged_reshuffle_purity(const ComplexMatrix& u, const ComplexMatrix& v, std::size_t n,
                                 const MomentTable& mom, const ComplexMatrix& s_aa) {
  const ComplexMatrix vv = kron(v, v);
  const ComplexMatrix uu = kron(u, u);
  const ComplexMatrix q = matmul(matmul(vv, s_aa), dagger(vv));
  const ComplexMatrix p = matmul(matmul(dagger(uu), s_aa), uu);
  const double n4 = static_cast<double>(n * n * n * n);
  return trace(matmul(twirl(q, n, mom), p)).real() / n4;
}

}  // namespace

double degree2_moment(const MomentIndices& idx, std::size_t n) {
  require_moment_args(idx, n);
  const double nd = static_cast<double>(n);
  const double d_i_direct = delta(idx.i1, idx.i1p) * delta(idx.i2, idx.i2p);
  const double d_i_crossed = delta(idx.i1, idx.i2p) * delta(idx.i2, idx.i1p);
  const double d_j_direct = delta(idx.j1, idx.j1p) * delta(idx.j2, idx.j2p);
  const double d_j_crossed = delta(idx.j1, idx.j2p) * delta(idx.j2, idx.j1p);
  const double matched = d_i_direct * d_j_direct + d_i_crossed * d_j_crossed;
  const double mixed = d_i_direct * d_j_crossed + d_i_crossed * d_j_direct;
  return matched / (nd * nd - 1.0) - mixed / (nd * (nd * nd - 1.0));
}

MomentIndices random_moment_indices(std::size_t n, Rng& rng) {
  auto pick = [&] { return static_cast<std::size_t>(rng.next_u64() % n); };
  MomentIndices idx;
  idx.i1 = pick();
  idx.i2 = pick();
  idx.j1 = pick();
  idx.j2 = pick();
  const double u = rng.uniform();
  if (u < 0.5) {
    idx.i1p = idx.i1;
    idx.i2p = idx.i2;
    idx.j1p = idx.j1;
    idx.j2p = idx.j2;
  } else if (u < 0.75) {
    idx.i1p = idx.i2;
    idx.i2p = idx.i1;
    idx.j1p = idx.j2;
    idx.j2p = idx.j1;
  } else {
    idx.i1p = pick();
    idx.i2p = pick();
    idx.j1p = pick();
    idx.j2p = pick();
  }
  return idx;
}

MomentEstimate mc_verify_moment(const MomentIndices& idx, std::size_t n, std::size_t samples,
                                std::uint64_t seed) {
  require_moment_args(idx, n);
  if (samples < 2) throw ValidationError("mc_verify_moment: need at least 2 samples");
  Rng rng(seed);
  RunningStats re, im;
  for (std::size_t s = 0; s < samples; ++s) {
    const ComplexMatrix u = haar_unitary(n, rng);
    const Complex v = u(idx.i1, idx.j1) * u(idx.i2, idx.j2) * std::conj(u(idx.i1p, idx.j1p)) *
                      std::conj(u(idx.i2p, idx.j2p));
    re.add(v.real());
    im.add(v.imag());
  }
  return {re.mean(), re.standard_error(), im.mean(), im.standard_error()};
}

PurityPair contracted_compose_average(const BipartiteGate& u, const BipartiteGate& v) {
  if (u.n_local() != v.n_local()) {
    throw ShapeError("contracted_compose_average: local dimensions differ");
  }
  const std::size_t n = u.n_local();
  const MomentTable mom(n);
  const ComplexMatrix s_aa = swap_a_copies(n);
  // rho_T(M) = rho_R(S M), so Y follows from X with U replaced by S U.
  const ComplexMatrix su = matmul(swap_gate(n).matrix(), u.matrix());
  return {averaged_reshuffle_purity(u.matrix(), v.matrix(), n, mom, s_aa),
          averaged_reshuffle_purity(su, v.matrix(), n, mom, s_aa)};
}

}  // namespace gatelab
