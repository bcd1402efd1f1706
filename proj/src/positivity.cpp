#include "icw/positivity.hpp"

#include <unordered_set>

#include "icw/errors.hpp"

namespace icw {

std::string to_string(PsdVerdict::Status status) {
  switch (status) {
    case PsdVerdict::Status::Pass:
      return "pass";
    case PsdVerdict::Status::Indefinite:
      return "indefinite";
    case PsdVerdict::Status::NonHermitian:
      return "non_hermitian";
  }
  return {};
}

std::string to_string(CndVerdict::Status status) {
  switch (status) {
    case CndVerdict::Status::Pass:
      return "pass";
    case CndVerdict::Status::Fail:
      return "fail";
    case CndVerdict::Status::PreconditionFailed:
      return "precondition_failed";
  }
  return {};
}

namespace {

void require_distinct(std::span<const GroupElement> elements) {
  std::unordered_set<GroupElement, GroupElementHash> seen;
  for (const auto& s : elements)
    if (!seen.insert(s).second) throw std::invalid_argument("window elements must be distinct: " + to_string(s) + " repeats");
}

MatrixXc kernel_matrix(const GroupFunction& h, std::span<const GroupElement> elements) {
  const auto n = static_cast<Eigen::Index>(elements.size());
  std::vector<GroupElement> inverses;
  inverses.reserve(elements.size());
  for (const auto& s : elements) inverses.push_back(inverse(s));
  MatrixXc m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = h(compose(elements[static_cast<std::size_t>(i)], inverses[static_cast<std::size_t>(j)]));
  return m;
}

}  // namespace

MatrixXc pd_matrix(const GroupFunction& h, std::span<const GroupElement> elements) {
  require_distinct(elements);
  return kernel_matrix(h, elements);
}

PsdVerdict pd_window_check(const GroupFunction& h, std::span<const GroupElement> elements, double tol) {
  return psd_verdict(pd_matrix(h, elements), tol);
}

CndVerdict cnd_window_check(const GroupFunction& psi, std::span<const GroupElement> elements, double tol) {
  CndVerdict v;
  MatrixXc n = pd_matrix(psi, elements);
  const auto size = n.rows();
  v.scale = 1.0 + (size ? n.cwiseAbs().rowwise().sum().maxCoeff() : 0.0);
  if (size == 0) return v;
  double imag = n.imag().cwiseAbs().maxCoeff();
  if (imag > tol * v.scale) {
    v.status = CndVerdict::Status::PreconditionFailed;
    v.precondition = "psi is not real-valued on the window";
    return v;
  }
  if (std::abs(psi(identity(psi.model()))) > tol * v.scale) {
    v.status = CndVerdict::Status::PreconditionFailed;
    v.precondition = "psi(e) != 0";
    return v;
  }
  MatrixXr real = n.real();
  if ((real - real.transpose()).cwiseAbs().maxCoeff() > tol * v.scale) {
    v.status = CndVerdict::Status::PreconditionFailed;
    v.precondition = "psi(s) != psi(s^-1) on the window";
    return v;
  }
  MatrixXr centering = MatrixXr::Identity(size, size) - MatrixXr::Constant(size, size, 1.0 / static_cast<double>(size));
  MatrixXr form = centering * ((real + real.transpose()) / 2.0) * centering;
  Eigen::SelfAdjointEigenSolver<MatrixXr> es(form, Eigen::EigenvaluesOnly);
  v.max_violation = es.eigenvalues().maxCoeff();
  if (v.max_violation > tol * v.scale) v.status = CndVerdict::Status::Fail;
  return v;
}

}  // namespace icw
