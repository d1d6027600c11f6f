#include "optosqueeze/fock.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#ifdef OPTOSQUEEZE_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif
#include <unsupported/Eigen/KroneckerProduct>

#include "optosqueeze/errors.hpp"
#include "optosqueeze/transform.hpp"

namespace optosqueeze {

namespace {

using cd = std::complex<double>;
using DenseC = Eigen::MatrixXcd;

// Headroom used when a mechanical operator is a non-normal-ordered product
// (squeezed frame with the nonlinear remainder); products are formed on the
// larger space and truncated afterwards.
constexpr int kProductHeadroom = 8;

SparseMatrixC identity(int n) {
  SparseMatrixC id(n, n);
  id.setIdentity();
  return id;
}

SparseMatrixC adjoint(const SparseMatrixC& m) { return SparseMatrixC(m.adjoint()); }

SparseMatrixC embed(const SparseMatrixC& op, std::size_t mode, const std::vector<int>& dims) {
  SparseMatrixC out = identity(1);
  for (std::size_t k = 0; k < dims.size(); ++k) {
    const SparseMatrixC factor = k == mode ? op : identity(dims[k]);
    out = Eigen::kroneckerProduct(out, factor).eval();
  }
  return out;
}

DenseC dense_annihilation(int n) {
  DenseC b = DenseC::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    b(k - 1, k) = std::sqrt(static_cast<double>(k));
  }
  return b;
}

SparseMatrixC to_sparse(const DenseC& m) {
  return m.sparseView(1.0, 1e-300);
}

// Nonlinear remainder of the mechanical Hamiltonian, as a function of the
// original-frame annihilation operator b (given as a matrix).
DenseC mechanical_remainder(const DenseC& b, Nonlinearity kind, double eta, double beta) {
  const DenseC bd = b.adjoint();
  DenseC t;
  if (kind == Nonlinearity::Duffing) {
    const DenseC bd2 = bd * bd;
    const DenseC bd3 = bd2 * bd;
    // (eta/2)(b+^4 + 4 b+^3 b + 3 b+^2 b^2 + 8 beta b+^3 + 24 beta b+^2 b + h.c.)
    t = bd3 * bd + 4.0 * bd3 * b + 3.0 * bd2 * b * b + 8.0 * beta * bd3 + 24.0 * beta * bd2 * b;
    return 0.5 * eta * (t + t.adjoint());
  }
  // 3 eta b+^2 b + eta b+^3 + h.c.
  t = 3.0 * bd * bd * b + bd * bd * bd;
  return eta * (t + t.adjoint());
}

struct ModeLayout {
  std::vector<int> dims;
  std::size_t cav = 0;
  std::size_t mech = 1;
  std::size_t anc = 2;
  bool has_anc = false;
};

}  // namespace

JumpTerm dissipator(double rate, const SparseMatrixC& op) { return JumpTerm{rate, op, adjoint(op)}; }

JumpTerm squeezing_dissipator(double rate, const SparseMatrixC& op) { return JumpTerm{rate, op, op}; }

SparseMatrixC annihilation(int n) { return to_sparse(dense_annihilation(n)); }

SparseMatrixC lindblad_superoperator(const SparseMatrixC& H, const std::vector<JumpTerm>& terms) {
  const int d = static_cast<int>(H.rows());
  const SparseMatrixC id = identity(d);
  const cd minus_i(0.0, -1.0);
  SparseMatrixC L = minus_i * (Eigen::kroneckerProduct(id, H).eval() -
                               Eigen::kroneckerProduct(SparseMatrixC(H.transpose()), id).eval());
  for (const auto& term : terms) {
    if (term.rate == 0.0) {
      continue;
    }
    const SparseMatrixC rl = term.right * term.left;
    SparseMatrixC piece = Eigen::kroneckerProduct(SparseMatrixC(term.right.transpose()), term.left).eval();
    piece -= 0.5 * Eigen::kroneckerProduct(id, rl).eval();
    piece -= 0.5 * Eigen::kroneckerProduct(SparseMatrixC(rl.transpose()), id).eval();
    L += term.rate * piece;
  }
  L.prune(cd(0.0, 0.0), 0.0);
  L.makeCompressed();
  return L;
}

int Liouvillian::hilbert_dim() const {
  int d = 1;
  for (int n : dims) d *= n;
  return d;
}

Liouvillian build_liouvillian(const LinearizedModel& lin, const SystemParams& params,
                              const ClassicalFixedPoint& fp, const FockConfig& cfg) {
  if (cfg.n_cav < 2 || cfg.n_mech < 2 || (cfg.include_detection && cfg.n_anc < 2)) {
    throw DomainError("build_liouvillian: every cutoff must be at least 2");
  }
  if (cfg.include_detection && !lin.has_detection()) {
    throw DomainError("build_liouvillian: detection requested but the model has no ancilla");
  }

  ModeLayout layout;
  layout.dims = {cfg.n_cav, cfg.n_mech};
  if (cfg.include_detection) {
    layout.dims.push_back(cfg.n_anc);
    layout.has_anc = true;
  }
  std::size_t hilbert = 1;
  for (int n : layout.dims) hilbert *= static_cast<std::size_t>(n);
  if (hilbert * hilbert > cfg.max_superoperator_dim) {
    std::ostringstream os;
    os << "Liouvillian dimension " << hilbert * hilbert << " exceeds budget "
       << cfg.max_superoperator_dim;
    throw CapacityError(os.str());
  }

  const bool squeezed = cfg.frame == Frame::ShiftedAndSqueezed;
  const TransformedModel t = transformed_model(lin);
  const double r = squeezed ? t.r : 0.0;
  const double ch = std::cosh(r);
  const double sh = std::sinh(r);
  const double shrink = std::exp(-r);  // b_o + b_o^dag = e^{-r} (b + b^dag)

  const auto& dims = layout.dims;
  const SparseMatrixC a = embed(annihilation(cfg.n_cav), layout.cav, dims);
  const SparseMatrixC b = embed(annihilation(cfg.n_mech), layout.mech, dims);
  const SparseMatrixC ad = adjoint(a);
  const SparseMatrixC bd = adjoint(b);
  const SparseMatrixC xa = a + ad;
  const SparseMatrixC xb = b + bd;

  SparseMatrixC H = lin.Delta_a * (ad * a);
  if (squeezed) {
    H += t.omega_m_prime * (bd * b);
    H -= t.G_prime * (xa * xb);
  } else {
    H += lin.omega_m_tilde * (bd * b);
    H += lin.Lambda * (b * b + bd * bd);
    H -= lin.G * (xa * xb);
  }

  std::vector<JumpTerm> jumps;
  jumps.push_back(dissipator(lin.kappa, a));
  const double g = lin.gamma;
  const double n = lin.n_th;
  if (squeezed) {
    jumps.push_back(dissipator(g * ((n + 1.0) * ch * ch + n * sh * sh), b));
    jumps.push_back(dissipator(g * ((n + 1.0) * sh * sh + n * ch * ch), bd));
    if (!cfg.rwa) {
      const double cross = -g * (2.0 * n + 1.0) * ch * sh;
      jumps.push_back(squeezing_dissipator(cross, b));
      jumps.push_back(squeezing_dissipator(cross, bd));
    }
  } else {
    jumps.push_back(dissipator(g * (n + 1.0), b));
    jumps.push_back(dissipator(g * n, bd));
  }

  SparseMatrixC as;
  if (layout.has_anc) {
    as = embed(annihilation(cfg.n_anc), layout.anc, dims);
    const SparseMatrixC asd = adjoint(as);
    H += *lin.Delta_s * (asd * as);
    H -= *lin.G_s * shrink * ((as + asd) * xb);
    jumps.push_back(dissipator(*lin.kappa_s, as));
  }

  if (cfg.include_nl) {
    // Radiation-pressure remainder -g a^dag a (b_o + b_o^dag).
    H -= params.g0 * shrink * (ad * a * xb);
    if (layout.has_anc && params.detection) {
      H -= params.detection->g_s * shrink * (adjoint(as) * as * xb);
    }
    // Mechanical remainder built on a padded space, then truncated.
    const int big = cfg.n_mech + (squeezed ? kProductHeadroom : 0);
    const DenseC bb = dense_annihilation(big);
    const DenseC b_orig = squeezed ? DenseC(ch * bb - sh * bb.adjoint()) : bb;
    const DenseC rem = mechanical_remainder(b_orig, params.nonlinearity, params.eta, fp.beta)
                           .topLeftCorner(cfg.n_mech, cfg.n_mech);
    H += embed(to_sparse(rem), layout.mech, dims);
  }

  Liouvillian out;
  out.L = lindblad_superoperator(H, jumps);
  out.dims = dims;
  out.observed_mode = layout.mech;
  const DenseC bm = dense_annihilation(cfg.n_mech);
  const DenseC bmd = bm.adjoint();
  const DenseC x = (bm + bmd) / std::sqrt(2.0);
  const DenseC x2 = 0.5 * (bm * bm + bmd * bmd + 2.0 * bmd * bm +
                           DenseC::Identity(cfg.n_mech, cfg.n_mech));
  out.position = shrink * x;
  out.position_sq = shrink * shrink * x2;
  out.frame = cfg.frame;
  out.r = r;
  return out;
}

Liouvillian damped_oscillator(int levels, double omega, double gamma, double n_th) {
  if (levels < 2) {
    throw DomainError("damped_oscillator: need at least 2 levels");
  }
  const SparseMatrixC b = annihilation(levels);
  const SparseMatrixC bd = adjoint(b);
  const SparseMatrixC H = omega * (bd * b);
  Liouvillian out;
  out.L = lindblad_superoperator(H, {dissipator(gamma * (n_th + 1.0), b), dissipator(gamma * n_th, bd)});
  out.dims = {levels};
  out.observed_mode = 0;
  const DenseC bm = dense_annihilation(levels);
  const DenseC bmd = bm.adjoint();
  out.position = (bm + bmd) / std::sqrt(2.0);
  out.position_sq =
      0.5 * (bm * bm + bmd * bmd + 2.0 * bmd * bm + DenseC::Identity(levels, levels));
  return out;
}

Eigen::MatrixXcd reduced_state(const FockSteadyState& state, std::size_t mode) {
  const auto& dims = state.dims;
  std::size_t inner = 1;
  for (std::size_t k = mode + 1; k < dims.size(); ++k) inner *= static_cast<std::size_t>(dims[k]);
  std::size_t outer = 1;
  for (std::size_t k = 0; k < mode; ++k) outer *= static_cast<std::size_t>(dims[k]);
  const auto n = static_cast<std::size_t>(dims[mode]);

  DenseC red = DenseC::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
          const auto row = static_cast<Eigen::Index>((o * n + j) * inner + i);
          const auto col = static_cast<Eigen::Index>((o * n + k) * inner + i);
          red(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) += state.rho(row, col);
        }
      }
    }
  }
  return red;
}

FockSteadyState steady_state(const Liouvillian& liou) {
  const int d = liou.hilbert_dim();
  const Eigen::Index dim2 = static_cast<Eigen::Index>(d) * d;
  if (liou.L.rows() != dim2 || liou.L.cols() != dim2) {
    throw DomainError("steady_state: superoperator size does not match the mode dimensions");
  }

  // Replace the first equation by Tr rho = 1.
  SparseMatrixC M = liou.L;
  M.prune([](Eigen::Index row, Eigen::Index, const cd&) { return row != 0; });
  std::vector<Eigen::Triplet<cd>> trace_row;
  trace_row.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    trace_row.emplace_back(0, static_cast<Eigen::Index>(i) * d + i, cd(1.0, 0.0));
  }
  SparseMatrixC T(dim2, dim2);
  T.setFromTriplets(trace_row.begin(), trace_row.end());
  M += T;
  M.makeCompressed();

#ifdef OPTOSQUEEZE_HAVE_UMFPACK
  Eigen::UmfPackLU<SparseMatrixC> lu;
  lu.compute(M);
  if (lu.info() != Eigen::Success) {
    throw NumericError("steady_state: sparse LU failed; try larger cutoffs");
  }
#else
  Eigen::SparseLU<SparseMatrixC, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(M);
  lu.factorize(M);
  if (lu.info() != Eigen::Success) {
    throw NumericError("steady_state: sparse LU failed (" + lu.lastErrorMessage() +
                       "); try larger cutoffs");
  }
#endif
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(dim2);
  rhs(0) = 1.0;
  Eigen::VectorXcd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) {
    throw NumericError("steady_state: solve failed; try larger cutoffs");
  }

  FockSteadyState st;
  st.dims = liou.dims;
  st.observed_mode = liou.observed_mode;
  DenseC rho = Eigen::Map<DenseC>(x.data(), d, d);
  st.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  rho = 0.5 * (rho + rho.adjoint());
  st.trace_error = std::abs(rho.trace() - cd(1.0, 0.0));
  st.rho = std::move(rho);

  Eigen::SelfAdjointEigenSolver<DenseC> es(st.rho, Eigen::EigenvaluesOnly);
  st.min_eigenvalue = es.eigenvalues().minCoeff();

  st.cutoff_converged = true;
  for (std::size_t m = 0; m < st.dims.size(); ++m) {
    const DenseC red = reduced_state(st, m);
    const double top = red(red.rows() - 1, red.cols() - 1).real();
    st.top_population.push_back(top);
    if (!(std::abs(top) < 1e-6)) {
      st.cutoff_converged = false;
    }
  }

  const DenseC red = reduced_state(st, st.observed_mode);
  st.mean_X = (liou.position * red).trace().real();
  st.variance_X = (liou.position_sq * red).trace().real() - st.mean_X * st.mean_X;
  return st;
}

double variance_in_original_frame(const FockSteadyState& state, double r) {
  const DenseC red = reduced_state(state, state.observed_mode);
  const int n = static_cast<int>(red.rows());
  const DenseC b = dense_annihilation(n);
  const DenseC bd = b.adjoint();
  // S^dag X S = e^{-r} X with X = (b + b^dag)/sqrt 2
  const double s = std::exp(-r);
  const DenseC x = s * (b + bd) / std::sqrt(2.0);
  const DenseC x2 = s * s * 0.5 * (b * b + bd * bd + 2.0 * bd * b + DenseC::Identity(n, n));
  const double mean = (x * red).trace().real();
  return (x2 * red).trace().real() - mean * mean;
}

CutoffSweepReport cutoff_sweep(const LiouvillianBuilder& build,
                               const std::vector<std::pair<int, int>>& schedule) {
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (schedule[i].first < schedule[i - 1].first || schedule[i].second < schedule[i - 1].second) {
      throw DomainError("cutoff_sweep: schedule must be ascending");
    }
  }
  CutoffSweepReport rep;
  for (const auto& [nc, nm] : schedule) {
    const FockSteadyState st = steady_state(build(nc, nm));
    CutoffPoint pt;
    pt.n_cav = nc;
    pt.n_mech = nm;
    pt.variance_X = st.variance_X;
    pt.trace_error = st.trace_error;
    pt.max_top_population = *std::max_element(st.top_population.begin(), st.top_population.end());
    rep.points.push_back(pt);
  }
  if (rep.points.size() >= 2) {
    const double last = rep.points.back().variance_X;
    const double prev = rep.points[rep.points.size() - 2].variance_X;
    rep.converged = std::abs(last - prev) < 1e-3 * std::abs(last);
  }
  return rep;
}

}  // namespace optosqueeze
