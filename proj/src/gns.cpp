#include "icw/gns.hpp"

#include "icw/errors.hpp"

namespace icw {

MatrixXc gns_kernel(const GroupFunction& h, std::span<const GroupElement> rows, std::span<const GroupElement> cols) {
  MatrixXc k(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    GroupElement ti = inverse(rows[i]);
    for (std::size_t j = 0; j < cols.size(); ++j)
      k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = h(compose(ti, cols[j]));
  }
  return k;
}

namespace {

// Hermitian kernel on a single index set; evaluates the upper triangle only.
MatrixXc hermitian_gram(const GroupFunction& h, std::span<const GroupElement> elems) {
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

// h(t^{-1}s) = conj(h(s^{-1}t)) must hold for a PD function; check it on a few entries.
void check_hermitian_sample(const GroupFunction& h, std::span<const GroupElement> elems, double tol) {
  const std::size_t n = elems.size();
  const std::size_t step = std::max<std::size_t>(1, n / 16);
  for (std::size_t i = 0; i < n; i += step)
    for (std::size_t j = 0; j < n; j += step) {
      cplx a = h(compose(inverse(elems[i]), elems[j]));
      cplx b = h(compose(inverse(elems[j]), elems[i]));
      if (std::abs(a - std::conj(b)) > tol * (1 + std::abs(a)))
        throw NotPositiveDefinite("kernel of '" + h.label() + "' is not Hermitian at (" + to_string(elems[i]) + ", " +
                                      to_string(elems[j]) + ")",
                                  0.0);
    }
}

}  // namespace

GnsWindow::GnsWindow(GroupFunction h, int radius, int pad, double tol, std::size_t budget)
    : h_(std::move(h)),
      ball_(h_.model(), radius, budget),
      padded_(h_.model(), radius + pad, budget),
      pad_(pad),
      tol_(tol) {
  if (pad < 0) throw std::invalid_argument("gns_window needs r >= 0");
  check_hermitian_sample(h_, padded_.elements(), tol);
  padded_gram_ = hermitian_gram(h_, padded_.elements());
  verdict_ = psd_verdict(padded_gram_, tol);
  if (!verdict_.pass())
    throw NotPositiveDefinite("'" + h_.label() + "' is not positive definite on ball(" + std::to_string(radius + pad) +
                                  "): lambda_min = " + std::to_string(verdict_.min_eigenvalue),
                              verdict_.min_eigenvalue);
  const auto n = static_cast<Eigen::Index>(ball_.size());
  gram_ = padded_gram_.topLeftCorner(n, n);
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(gram_);
  const VectorXr& ev = es.eigenvalues();
  const double cutoff = 1e-10 * std::max(ev.maxCoeff(), 0.0);
  VectorXr inv = VectorXr::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i)
    if (ev(i) > cutoff) {
      inv(i) = 1.0 / ev(i);
      ++rank_;
    }
  pinv_ = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
}

MatrixXc GnsWindow::coefficient_matrix(const GroupElement& g) const {
  const auto n = static_cast<Eigen::Index>(ball_.size());
  MatrixXc c(n, n);
  if (word_length(g) <= pad_) {
    for (Eigen::Index s = 0; s < n; ++s) {
      auto col = static_cast<Eigen::Index>(padded_.index_of(compose(g, ball_[static_cast<std::size_t>(s)])));
      c.col(s) = padded_gram_.col(col).head(n);
    }
    return c;
  }
  return gns_kernel(h_, ball_.elements(), [&] {
    std::vector<GroupElement> shifted;
    for (const auto& s : ball_.elements()) shifted.push_back(compose(g, s));
    return shifted;
  }());
}

MatrixXc GnsWindow::compressed(const GroupElement& g) const { return pinv_ * coefficient_matrix(g); }

cplx GnsWindow::coefficient(const GroupElement& g, const VectorXc& xi, const VectorXc& eta) const {
  return eta.dot(coefficient_matrix(g) * xi);
}

VectorXc GnsWindow::delta(const GroupElement& s) const {
  auto i = ball_.index_of(s);
  if (i == Ball::npos) throw std::out_of_range(to_string(s) + " is outside the GNS window");
  VectorXc v = VectorXc::Zero(static_cast<Eigen::Index>(ball_.size()));
  v(static_cast<Eigen::Index>(i)) = 1.0;
  return v;
}

GnsWindow gns_window(const GroupFunction& h, int radius, int pad, double tol, std::size_t budget) {
  return GnsWindow(h, radius, pad, tol, budget);
}

}  // namespace icw
