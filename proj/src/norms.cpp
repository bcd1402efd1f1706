#include "icw/norms.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <variant>

#include "icw/errors.hpp"
#include "icw/families.hpp"

namespace icw {

std::string to_string(NormEstimate::Kind kind) {
  switch (kind) {
    case NormEstimate::Kind::LowerBound:
      return "lower_bound";
    case NormEstimate::Kind::UpperBound:
      return "upper_bound";
    case NormEstimate::Kind::Exact:
      return "exact";
  }
  return {};
}

namespace {

template <class Scalar>
Scalar cast_coefficient(cplx alpha) {
  if constexpr (std::is_same_v<Scalar, cplx>)
    return alpha;
  else
    return alpha.real();
}

bool real_coefficients(const GroupRingElement& x) {
  return std::all_of(x.terms().begin(), x.terms().end(), [](const auto& kv) { return kv.second.imag() == 0.0; });
}

// Top eigenvalue of a Hermitian operator given by its action, Lanczos with
// full reorthogonalisation. The returned Ritz value is a Rayleigh quotient.
template <class Scalar, class Apply>
PowerIterationResult lanczos_top(Apply&& apply, Eigen::Index n, std::uint64_t seed, int max_iterations,
                                 double rel_tol) {
  PowerIterationResult out;
  if (n == 0) {
    out.converged = true;
    return out;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector<Scalar> v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if constexpr (std::is_same_v<Scalar, cplx>) {
      double re = gauss(rng);
      v(i) = cplx(re, gauss(rng));
    } else {
      v(i) = gauss(rng);
    }
  }
  v.normalize();
  const int m_max = static_cast<int>(std::min<Eigen::Index>(n, max_iterations));
  Matrix<Scalar> basis(n, m_max);
  std::vector<double> alpha, beta;
  double previous = -1;
  for (int k = 0; k < m_max; ++k) {
    basis.col(k) = v;
    Vector<Scalar> w = apply(v);
    double a = std::real(v.dot(w));
    alpha.push_back(a);
    // full reorthogonalisation against the whole basis, twice
    for (int pass = 0; pass < 2; ++pass) w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).adjoint() * w);
    double b = w.norm();
    out.iterations = k + 1;
    const bool last = (k + 1 == m_max) || b <= 1e-14 * std::max(1.0, std::abs(a));
    if ((k + 1) % 4 == 0 || last) {
      const int size = k + 1;
      MatrixXr t = MatrixXr::Zero(size, size);
      for (int i = 0; i < size; ++i) {
        t(i, i) = alpha[static_cast<std::size_t>(i)];
        if (i + 1 < size) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
      }
      Eigen::SelfAdjointEigenSolver<MatrixXr> es(t, Eigen::EigenvaluesOnly);
      double top = es.eigenvalues().maxCoeff();
      out.eigenvalue = top;
      if (last || std::abs(top - previous) <= rel_tol * std::max(std::abs(top), 1e-300)) {
        out.converged = true;
        return out;
      }
      previous = top;
    }
    beta.push_back(b);
    v = w / b;
  }
  return out;
}

}  // namespace

template <class Scalar>
SparseRowMatrix<Scalar> compressed_convolution(const GroupRingElement& x, const Ball& ball) {
  if (!(x.model() == ball.model())) throw ModelMismatch("element and ball live on different groups");
  const auto n = static_cast<Eigen::Index>(ball.size());
  std::vector<std::pair<GroupElement, Scalar>> terms;
  for (const auto& [g, alpha] : x.terms()) terms.emplace_back(inverse(g), cast_coefficient<Scalar>(alpha));
  SparseRowMatrix<Scalar> m(n, n);
  m.reserve(Eigen::VectorXi::Constant(n, static_cast<int>(terms.size())));
  for (Eigen::Index i = 0; i < n; ++i) {
    const GroupElement& t = ball[static_cast<std::size_t>(i)];
    for (const auto& [ginv, alpha] : terms) {
      auto j = ball.index_of(compose(ginv, t));
      if (j != Ball::npos) m.insert(i, static_cast<Eigen::Index>(j)) = alpha;
    }
  }
  m.makeCompressed();
  return m;
}

template SparseRowMatrix<double> compressed_convolution<double>(const GroupRingElement&, const Ball&);
template SparseRowMatrix<cplx> compressed_convolution<cplx>(const GroupRingElement&, const Ball&);

template <class Scalar>
PowerIterationResult power_iteration(const SparseRowMatrix<Scalar>& a, Vector<Scalar> v, double rel_tol,
                                     int max_iterations) {
  PowerIterationResult out;
  double nv = v.norm();
  if (nv == 0) throw std::invalid_argument("power iteration needs a nonzero start vector");
  v /= nv;
  Vector<Scalar> w(v.size());
  double previous = 0;
  for (int k = 1; k <= max_iterations; ++k) {
    w.noalias() = a * v;
    double lambda = std::real(v.dot(w));
    out.eigenvalue = std::max(out.eigenvalue, lambda);
    out.iterations = k;
    double nw = w.norm();
    if (nw == 0) {
      out.converged = true;
      return out;
    }
    if (k > 1 && std::abs(lambda - previous) <= rel_tol * std::abs(lambda)) {
      out.converged = true;
      return out;
    }
    previous = lambda;
    v = w / nw;
  }
  return out;
}

template PowerIterationResult power_iteration<double>(const SparseRowMatrix<double>&, VectorXr, double, int);
template PowerIterationResult power_iteration<cplx>(const SparseRowMatrix<cplx>&, VectorXc, double, int);

ConvolutionOperator::ConvolutionOperator(const GroupRingElement& x, int radius, std::size_t budget)
    : domain_(std::make_shared<Ball>(x.model(), radius, budget)),
      codomain_(std::make_shared<Ball>(x.model(), radius + x.support_radius(), budget)) {
  const auto rows = static_cast<Eigen::Index>(codomain_->size());
  const auto cols = static_cast<Eigen::Index>(domain_->size());
  std::vector<Eigen::Triplet<cplx>> entries;
  entries.reserve(static_cast<std::size_t>(cols) * x.size());
  for (Eigen::Index s = 0; s < cols; ++s)
    for (const auto& [g, alpha] : x.terms()) {
      auto t = codomain_->index_of(compose(g, (*domain_)[static_cast<std::size_t>(s)]));
      entries.emplace_back(static_cast<Eigen::Index>(t), s, alpha);
    }
  matrix_.resize(rows, cols);
  matrix_.setFromTriplets(entries.begin(), entries.end());
}

namespace {

template <class Scalar>
NormEstimate run_reduced_lower(const GroupRingElement& y, const Ball& b, const PowerIterationConfig& config) {
  SparseRowMatrix<Scalar> a = compressed_convolution<Scalar>(y, b);
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> noise(-1.0, 1.0);
  Vector<Scalar> start(static_cast<Eigen::Index>(b.size()));
  for (Eigen::Index i = 0; i < start.size(); ++i) start(i) = Scalar(1e-3 * noise(rng));
  start(0) += Scalar(1.0);
  PowerIterationResult r = power_iteration<Scalar>(a, std::move(start), config.rel_tol, config.max_iterations);
  NormEstimate e;
  e.value = std::sqrt(std::max(r.eigenvalue, 0.0));
  e.kind = NormEstimate::Kind::LowerBound;
  e.method = "power_iteration_compressed_regular";
  e.radius = b.radius();
  e.converged = r.converged;
  e.iterations = r.iterations;
  return e;
}

}  // namespace

NormEstimate reduced_norm_lower(const GroupRingElement& x, int radius, std::size_t budget,
                                const PowerIterationConfig& config) {
  if (x.empty()) return {0.0, NormEstimate::Kind::Exact, "zero_element", radius};
  Ball b(x.model(), radius, budget);
  GroupRingElement y = x.adjoint() * x;
  return real_coefficients(y) ? run_reduced_lower<double>(y, b, config) : run_reduced_lower<cplx>(y, b, config);
}

NormEstimate haagerup_upper_bound(const GroupRingElement& x) {
  if (x.model().kind() != GroupKind::Free)
    throw Unsupported("the Haagerup inequality bound is implemented for free groups only, not " + x.model().name());
  std::vector<double> sphere_sq(static_cast<std::size_t>(x.support_radius()) + 1, 0.0);
  for (const auto& [s, alpha] : x.terms()) sphere_sq[static_cast<std::size_t>(word_length(s))] += std::norm(alpha);
  double bound = 0;
  for (std::size_t k = 0; k < sphere_sq.size(); ++k) bound += static_cast<double>(k + 1) * std::sqrt(sphere_sq[k]);
  return {bound, NormEstimate::Kind::UpperBound, "haagerup_inequality"};
}

namespace {

double l1_norm(const GroupRingElement& x) {
  double total = 0;
  for (const auto& kv : x.terms()) total += std::abs(kv.second);
  return total;
}

// Row-sum exponents for the weighted Schur test: for t in ball(r) and g in the
// support, |g^{-1} t| - |t| (rows) and |g t| - |t| (columns).
struct SchurData {
  std::vector<double> magnitude;
  std::vector<std::vector<int>> row_exp;
  std::vector<std::vector<int>> col_exp;

  static double worst(const std::vector<std::vector<int>>& exps, const std::vector<double>& mags, double q) {
    double best = 0;
    for (const auto& e : exps) {
      double sum = 0;
      for (std::size_t g = 0; g < mags.size(); ++g) sum += mags[g] * std::pow(q, e[g]);
      best = std::max(best, sum);
    }
    return best;
  }

  double bound(double q) const { return std::sqrt(worst(row_exp, magnitude, q) * worst(col_exp, magnitude, q)); }
};

}  // namespace

NormEstimate schur_upper_bound(const GroupRingElement& x) {
  if (x.model().kind() != GroupKind::Free)
    throw Unsupported("the weighted Schur test bound is implemented for free groups only, not " + x.model().name());
  if (x.empty()) return {0.0, NormEstimate::Kind::UpperBound, "schur_test"};
  SchurData data;
  std::vector<GroupElement> support, support_inv;
  for (const auto& [g, alpha] : x.terms()) {
    support.push_back(g);
    support_inv.push_back(inverse(g));
    data.magnitude.push_back(std::abs(alpha));
  }
  // on a tree the ratio only depends on the first r letters of t, so ball(r) covers every t
  Ball b(x.model(), x.support_radius());
  for (const auto& t : b.elements()) {
    std::vector<int> row, col;
    for (std::size_t g = 0; g < support.size(); ++g) {
      row.push_back(word_length(compose(support_inv[g], t)) - word_length(t));
      col.push_back(word_length(compose(support[g], t)) - word_length(t));
    }
    data.row_exp.push_back(std::move(row));
    data.col_exp.push_back(std::move(col));
  }
  constexpr int kGrid = 200;
  int best_i = kGrid;
  double best = data.bound(1.0);
  for (int i = 1; i < kGrid; ++i) {
    double v = data.bound(static_cast<double>(i) / kGrid);
    if (v < best) {
      best = v;
      best_i = i;
    }
  }
  double lo = static_cast<double>(best_i - 1) / kGrid;
  double hi = std::min(1.0, static_cast<double>(best_i + 1) / kGrid);
  lo = std::max(lo, 1e-6);
  const double phi = (std::sqrt(5.0) - 1) / 2;
  double c = hi - phi * (hi - lo), d = lo + phi * (hi - lo);
  double fc = data.bound(c), fd = data.bound(d);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - phi * (hi - lo);
      fc = data.bound(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + phi * (hi - lo);
      fd = data.bound(d);
    }
  }
  best = std::min({best, fc, fd});
  return {best, NormEstimate::Kind::UpperBound, "weighted_schur_test"};
}

NormEstimate reduced_norm_upper(const GroupRingElement& x) {
  NormEstimate best{l1_norm(x), NormEstimate::Kind::UpperBound, "l1_norm"};
  if (x.model().kind() == GroupKind::Free) {
    for (const NormEstimate& e : {haagerup_upper_bound(x), schur_upper_bound(x)})
      if (e.value < best.value) best = e;
  }
  return best;
}

NormEstimate trivial_norm(const GroupRingElement& x) {
  bool nonnegative = std::all_of(x.terms().begin(), x.terms().end(),
                                 [](const auto& kv) { return kv.second.imag() == 0.0 && kv.second.real() >= 0.0; });
  return {std::abs(coefficient_sum(x)), nonnegative ? NormEstimate::Kind::Exact : NormEstimate::Kind::LowerBound,
          "trivial_representation"};
}

namespace {

template <class Scalar>
struct GnsData {
  Matrix<Scalar> outer_gram;
  // whitening: either a Cholesky factor of the inner Gram or V_+ Lambda_+^{-1/2}
  bool cholesky = false;
  Matrix<Scalar> factor;

  Eigen::Index rank() const { return factor.cols(); }

  void build(const Ball& inner, const GroupFunction& h, double tol, int radius) {
    const double scale = 1.0 + outer_gram.cwiseAbs().rowwise().sum().maxCoeff();
    Matrix<Scalar> shifted = outer_gram;
    shifted.diagonal().array() += Scalar(tol * scale);
    if (Eigen::LLT<Matrix<Scalar>>(shifted).info() != Eigen::Success) {
      PsdVerdict v = psd_verdict(outer_gram, tol);
      throw NotPositiveDefinite("'" + h.label() + "' is not positive definite on ball(" +
                                    std::to_string(outer_gram.rows() == 0 ? 0 : radius) + "+pad): lambda_min = " +
                                    std::to_string(v.min_eigenvalue),
                                v.min_eigenvalue);
    }
    const auto n = static_cast<Eigen::Index>(inner.size());
    Matrix<Scalar> g = outer_gram.topLeftCorner(n, n);
    Eigen::LLT<Matrix<Scalar>> llt(g);
    if (llt.info() == Eigen::Success) {
      Matrix<Scalar> l = llt.matrixL();
      double max_diag = g.diagonal().real().maxCoeff();
      double min_pivot = l.diagonal().real().cwiseAbs2().minCoeff();
      if (min_pivot > 1e-8 * max_diag) {
        cholesky = true;
        factor = std::move(l);
        return;
      }
    }
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(g);
    const VectorXr& ev = es.eigenvalues();
    const double cutoff = 1e-10 * std::max(ev.maxCoeff(), 0.0);
    Eigen::Index first = 0;
    while (first < n && ev(first) <= cutoff) ++first;
    factor = es.eigenvectors().rightCols(n - first) *
             ev.tail(n - first).cwiseSqrt().cwiseInverse().template cast<Scalar>().asDiagonal();
  }

  using Shifted = std::vector<std::vector<std::pair<Eigen::Index, cplx>>>;

  // M[s][s'] = sum_{g, g'} w_{g g'} G[g s][g' s'] with w_{g g'} = conj(alpha_g) alpha_g':
  // one gathered block per pair of terms
  template <class C, class Weight>
  Matrix<C> assemble(const Shifted& shifted, Weight weight) const {
    const auto n_in = static_cast<Eigen::Index>(shifted.size());
    const std::size_t terms = shifted.empty() ? 0 : shifted.front().size();
    std::vector<std::vector<Eigen::Index>> rows(terms, std::vector<Eigen::Index>(static_cast<std::size_t>(n_in)));
    for (std::size_t s = 0; s < shifted.size(); ++s)
      for (std::size_t k = 0; k < terms; ++k) rows[k][s] = shifted[s][k].first;
    Matrix<C> m = Matrix<C>::Zero(n_in, n_in);
    for (std::size_t a = 0; a < terms; ++a)
      for (std::size_t b = 0; b < terms; ++b) {
        const C w = weight(std::conj(shifted.front()[a].second) * shifted.front()[b].second);
        if (w != C(0)) m += w * outer_gram(rows[a], rows[b]);
      }
    return m;
  }

  // top eigenvalue of W^* M W with M = L_x^* G_out L_x
  PowerIterationResult top(const Shifted& shifted, bool complex_coefficients) const {
    if constexpr (std::is_same_v<Scalar, double>) {
      if (complex_coefficients) {
        // real kernel, complex element: M = Mr + i Mi, vectors carried as [re im] columns
        const MatrixXr mr = assemble<double>(shifted, [](cplx w) { return w.real(); });
        const MatrixXr mi = assemble<double>(shifted, [](cplx w) { return w.imag(); });
        auto apply = [&](const VectorXc& v) -> VectorXc {
          MatrixXr ab(v.size(), 2);
          ab.col(0) = v.real();
          ab.col(1) = v.imag();
          if (cholesky)
            factor.template triangularView<Eigen::Lower>().adjoint().solveInPlace(ab);
          else
            ab = (factor * ab).eval();
          MatrixXr y(ab.rows(), 2);
          y.col(0).noalias() = mr * ab.col(0) - mi * ab.col(1);
          y.col(1).noalias() = mr * ab.col(1) + mi * ab.col(0);
          if (cholesky)
            factor.template triangularView<Eigen::Lower>().solveInPlace(y);
          else
            y = (factor.adjoint() * y).eval();
          VectorXc out(y.rows());
          out.real() = y.col(0);
          out.imag() = y.col(1);
          return out;
        };
        return lanczos_top<cplx>(apply, rank(), 0, 400, 1e-13);
      }
    }
    const Matrix<Scalar> m = assemble<Scalar>(shifted, [](cplx w) { return cast_coefficient<Scalar>(w); });
    auto apply = [&](const Vector<Scalar>& v) -> Vector<Scalar> {
      if (cholesky) {
        // L^{-1} M L^{-*}
        Vector<Scalar> w = factor.template triangularView<Eigen::Lower>().adjoint().solve(v);
        w = (m * w).eval();
        factor.template triangularView<Eigen::Lower>().solveInPlace(w);
        return w;
      }
      return factor.adjoint() * (m * (factor * v));
    };
    return lanczos_top<Scalar>(apply, rank(), 0, 400, 1e-13);
  }
};

}  // namespace

struct GnsNormContext::Impl {
  std::variant<GnsData<double>, GnsData<cplx>> data;
};

namespace {

MatrixXc hermitian_kernel(const GroupFunction& h, std::span<const GroupElement> elems) {
  const auto n = static_cast<Eigen::Index>(elems.size());
  MatrixXc g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    GroupElement ti = inverse(elems[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = i; j < n; ++j) {
      g(i, j) = h(compose(ti, elems[static_cast<std::size_t>(j)]));
      if (j != i) g(j, i) = std::conj(g(i, j));
    }
  }
  return g;
}

}  // namespace

GnsNormContext::GnsNormContext(const GroupFunction& h, int radius, int pad, double tol, std::size_t budget)
    : h_(h),
      radius_(radius),
      pad_(pad),
      inner_(std::make_shared<Ball>(h.model(), radius, budget)),
      outer_(std::make_shared<Ball>(h.model(), radius + pad, budget)) {
  if (pad < 0) throw std::invalid_argument("GNS padding must be >= 0");
  // a dense Gram on the outer ball is the dominant cost; refuse it like any other window
  const double dense = static_cast<double>(outer_->size()) * static_cast<double>(outer_->size());
  if (dense > 64.0 * static_cast<double>(budget)) throw BudgetExceeded(static_cast<std::size_t>(dense), 64 * budget);
  // h(s^{-1} t) = conj(h(t^{-1} s)) for PD h, so only the upper triangle is evaluated;
  // the diagonal of a few far entries guards against non-Hermitian input
  for (std::size_t i = 0; i < outer_->size(); i += std::max<std::size_t>(1, outer_->size() / 8)) {
    const GroupElement& t = (*outer_)[outer_->size() - 1 - i];
    const GroupElement& s = (*outer_)[i];
    cplx a = h(compose(inverse(t), s)), b = h(compose(inverse(s), t));
    if (std::abs(a - std::conj(b)) > tol * (1 + std::abs(a)))
      throw NotPositiveDefinite("kernel of '" + h.label() + "' is not Hermitian at (" + to_string(t) + ", " +
                                    to_string(s) + ")",
                                0.0);
  }
  MatrixXc k = hermitian_kernel(h, outer_->elements());
  auto impl = std::make_shared<Impl>();
  if (k.imag().cwiseAbs().maxCoeff() == 0.0) {
    GnsData<double> d;
    d.outer_gram = k.real();
    d.build(*inner_, h, tol, radius + pad);
    impl->data = std::move(d);
  } else {
    GnsData<cplx> d;
    d.outer_gram = std::move(k);
    d.build(*inner_, h, tol, radius + pad);
    impl->data = std::move(d);
  }
  impl_ = std::move(impl);
}

Eigen::Index GnsNormContext::rank() const {
  return std::visit([](const auto& d) { return d.rank(); }, impl_->data);
}

bool GnsNormContext::real_kernel() const { return impl_->data.index() == 0; }

NormEstimate GnsNormContext::estimate(const GroupRingElement& x) const {
  if (!(x.model() == h_.model())) throw ModelMismatch("element and function live on different groups");
  if (x.support_radius() > pad_)
    throw std::invalid_argument("element support radius " + std::to_string(x.support_radius()) +
                                " exceeds the window padding " + std::to_string(pad_));
  const auto n_in = inner_->size();
  // shifted[s] lists (index of g s in the outer ball, alpha_g)
  std::vector<std::vector<std::pair<Eigen::Index, cplx>>> shifted(n_in);
  for (std::size_t s = 0; s < n_in; ++s)
    for (const auto& [g, alpha] : x.terms())
      shifted[s].emplace_back(static_cast<Eigen::Index>(outer_->index_of(compose(g, (*inner_)[s]))), alpha);
  NormEstimate e;
  e.kind = NormEstimate::Kind::LowerBound;
  e.method = "gns_window(" + h_.label() + ")";
  e.radius = radius_;
  if (rank() == 0) return e;
  const bool complex_coefficients = !real_coefficients(x);
  PowerIterationResult r =
      std::visit([&](const auto& d) { return d.top(shifted, complex_coefficients); }, impl_->data);
  e.value = std::sqrt(std::max(r.eigenvalue, 0.0));
  e.iterations = r.iterations;
  e.converged = r.converged;
  return e;
}

NormEstimate gns_norm_lower(const GroupFunction& h, const GroupRingElement& x, int radius, double tol,
                            std::size_t budget) {
  return GnsNormContext(h, radius, x.support_radius(), tol, budget).estimate(x);
}

std::vector<GroupFunction> default_gns_family(const GroupModel& model) {
  std::vector<GroupFunction> family;
  for (double n : {1.0, 2.0, 4.0, 8.0}) family.push_back(haagerup(model, n));
  for (int k = 1; k <= 3; ++k)
    family.push_back(model.kind() == GroupKind::FreeAbelian ? folner_box(model, k + 1) : folner_ball(model, k));
  return family;
}

NormGapReport norm_gap_report(const GroupRingElement& x, const IdealSpec& ideal, const GapConfig& config,
                              std::vector<GroupFunction> family) {
  NormGapReport rep;
  rep.element = to_string(x);
  rep.model = x.model().name();
  rep.ideal = ideal;
  rep.config = config;
  rep.trivial = trivial_norm(x);
  rep.reduced_lower = reduced_norm_lower(x, config.reduced_radius, config.budget, config.power);
  rep.reduced_upper = reduced_norm_upper(x);
  if (family.empty()) family = default_gns_family(x.model());
  for (const auto& h : family) {
    GnsFamilyEntry entry;
    entry.label = h.label();
    entry.membership = ideal_membership(h, ideal, config.budget);
    if (!entry.membership.member()) {
      entry.skipped = "membership " + to_string(entry.membership.verdict);
    } else {
      try {
        entry.estimate = gns_norm_lower(h, x, config.gns_radius, config.psd_tol, config.budget);
      } catch (const NotPositiveDefinite& e) {
        entry.skipped = e.what();
      } catch (const BudgetExceeded& e) {
        entry.skipped = e.what();
      }
    }
    if (entry.estimate && (!rep.best_gns || entry.estimate->value > rep.best_gns->value)) rep.best_gns = entry.estimate;
    rep.family.push_back(std::move(entry));
  }
  const bool exact = rep.trivial.kind == NormEstimate::Kind::Exact;
  rep.gap = exact && rep.trivial.value > rep.reduced_upper.value + config.exact_tol;
  rep.d_exceeds_reduced = rep.best_gns && rep.best_gns->value > rep.reduced_upper.value + config.exact_tol;
  if (rep.gap)
    rep.verdict = "gap";
  else if (exact && rep.trivial.value - rep.reduced_lower.value <= config.gap_tol)
    rep.verdict = "no_gap";
  else
    rep.verdict = "undecided";
  return rep;
}

}  // namespace icw
