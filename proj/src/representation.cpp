#include "icw/representation.hpp"

#include <cmath>
#include <numbers>
#include <unsupported/Eigen/KroneckerProduct>

#include "icw/errors.hpp"

namespace icw {

namespace {

double unitarity_defect(const MatrixXc& u) {
  return (u.adjoint() * u - MatrixXc::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace

FiniteUnitaryRep::FiniteUnitaryRep(GroupModel model, std::vector<MatrixXc> images, double tol)
    : model_(model), dim_(0), images_(std::move(images)) {
  if (static_cast<int>(images_.size()) != model_.generator_count())
    throw InputError("representation of " + model_.name() + " needs " + std::to_string(model_.generator_count()) +
                     " generator images, got " + std::to_string(images_.size()));
  if (images_.empty() || images_[0].rows() < 1) throw InputError("representation dimension must be >= 1");
  dim_ = static_cast<int>(images_[0].rows());
  for (int g = 0; g < model_.generator_count(); ++g) {
    const auto& u = images_[static_cast<std::size_t>(g)];
    const std::string name = model_.generator_name(g);
    if (u.rows() != dim_ || u.cols() != dim_)
      throw InputError("image of " + name + " is " + std::to_string(u.rows()) + "x" + std::to_string(u.cols()) +
                       ", expected " + std::to_string(dim_) + "x" + std::to_string(dim_));
    double defect = unitarity_defect(u);
    if (defect > tol) throw InputError("image of " + name + " is not unitary (defect " + std::to_string(defect) + ")");
  }
  const MatrixXc id = MatrixXc::Identity(dim_, dim_);
  for (const auto& rel : model_.relators()) {
    MatrixXc m = id;
    for (char c : rel) m = m * letter_matrix(static_cast<Letter>(c));
    if ((m - id).cwiseAbs().maxCoeff() > tol) {
      std::string name;
      for (char c : rel) name += model_.letter_name(static_cast<Letter>(c));
      throw InvalidHomomorphism(name);
    }
  }
  const auto d = static_cast<std::size_t>(dim_);
  letter_data_.resize(2 * d * d * 2 * images_.size());
  for (std::size_t l = 0; l < 2 * images_.size(); ++l) {
    MatrixXc m = letter_matrix(static_cast<Letter>(l));
    double* out = letter_data_.data() + l * 2 * d * d;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        out[2 * (i * d + j)] = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)).real();
        out[2 * (i * d + j) + 1] = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)).imag();
      }
  }
}

FiniteUnitaryRep FiniteUnitaryRep::trivial(const GroupModel& model, int dim) {
  return FiniteUnitaryRep(model, std::vector<MatrixXc>(static_cast<std::size_t>(model.generator_count()),
                                                       MatrixXc::Identity(dim, dim)));
}

MatrixXc FiniteUnitaryRep::letter_matrix(Letter l) const {
  const auto& u = images_[l / 2];
  return (l & 1) ? MatrixXc(u.adjoint()) : u;
}

VectorXc FiniteUnitaryRep::apply(const GroupElement& s, const VectorXc& v) const {
  // plain real loops over precomputed letter matrices: dims are tiny and words
  // long, and std::complex products go through the NaN-recovering multiply
  const auto d = static_cast<std::size_t>(v.size());
  std::vector<double> cur(2 * d), next(2 * d);
  for (std::size_t i = 0; i < d; ++i) {
    cur[2 * i] = v(static_cast<Eigen::Index>(i)).real();
    cur[2 * i + 1] = v(static_cast<Eigen::Index>(i)).imag();
  }
  for (auto it = s.word.rbegin(); it != s.word.rend(); ++it) {
    const double* u = letter_data_.data() + static_cast<std::size_t>(*it) * 2 * d * d;
    for (std::size_t i = 0; i < d; ++i) {
      double re = 0, im = 0;
      const double* row = u + 2 * i * d;
      for (std::size_t j = 0; j < d; ++j) {
        const double ar = row[2 * j], ai = row[2 * j + 1], br = cur[2 * j], bi = cur[2 * j + 1];
        re += ar * br - ai * bi;
        im += ar * bi + ai * br;
      }
      next[2 * i] = re;
      next[2 * i + 1] = im;
    }
    cur.swap(next);
  }
  VectorXc out(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) out(static_cast<Eigen::Index>(i)) = cplx(cur[2 * i], cur[2 * i + 1]);
  return out;
}

MatrixXc evaluate_word(const FiniteUnitaryRep& pi, const GroupElement& s) {
  if (!(s.model == pi.model())) throw ModelMismatch("element of " + s.model.name() + " for a rep of " + pi.model().name());
  MatrixXc m = MatrixXc::Identity(pi.dim(), pi.dim());
  for (char c : s.word) {
    auto l = static_cast<Letter>(c);
    if (l & 1)
      m = m * pi.image(l / 2).adjoint();
    else
      m = m * pi.image(l / 2);
  }
  return m;
}

GroupFunction matrix_coefficient(const FiniteUnitaryRep& pi, const VectorXc& xi, const VectorXc& eta, int sup_radius) {
  if (xi.size() != pi.dim() || eta.size() != pi.dim())
    throw std::invalid_argument("matrix_coefficient: vector dimension does not match the representation");
  auto rep = std::make_shared<const FiniteUnitaryRep>(pi);
  GroupFunction h(
      pi.model(), [rep, xi, eta](const GroupElement& s) { return eta.dot(rep->apply(s, xi)); }, NoCertificate{},
      "matrix_coefficient(dim=" + std::to_string(pi.dim()) + ")");
  h = h.with_sup_bound(xi.norm() * eta.norm());
  if (sup_radius >= 0) {
    SphereSupSequence seq;
    Ball b(pi.model(), sup_radius);
    seq.bounds.assign(static_cast<std::size_t>(sup_radius) + 1, 0.0);
    for (const auto& s : b.elements()) {
      auto& slot = seq.bounds[static_cast<std::size_t>(word_length(s))];
      slot = std::max(slot, std::abs(h.raw(s)));
    }
    h = h.with_tail(std::move(seq));
  }
  return h;
}

FiniteUnitaryRep tensor(const FiniteUnitaryRep& pi, const FiniteUnitaryRep& sigma) {
  if (!(pi.model() == sigma.model())) throw ModelMismatch("tensor of representations of different groups");
  std::vector<MatrixXc> images;
  for (int g = 0; g < pi.model().generator_count(); ++g)
    images.push_back(Eigen::kroneckerProduct(pi.image(g), sigma.image(g)).eval());
  return FiniteUnitaryRep(pi.model(), std::move(images));
}

FiniteUnitaryRep direct_sum(std::span<const FiniteUnitaryRep> reps) {
  if (reps.empty()) throw std::invalid_argument("direct_sum of an empty list");
  const GroupModel& model = reps.front().model();
  int total = 0;
  for (const auto& r : reps) {
    if (!(r.model() == model)) throw ModelMismatch("direct sum of representations of different groups");
    total += r.dim();
  }
  std::vector<MatrixXc> images;
  for (int g = 0; g < model.generator_count(); ++g) {
    MatrixXc m = MatrixXc::Zero(total, total);
    int off = 0;
    for (const auto& r : reps) {
      m.block(off, off, r.dim(), r.dim()) = r.image(g);
      off += r.dim();
    }
    images.push_back(std::move(m));
  }
  return FiniteUnitaryRep(model, std::move(images));
}

MatrixXc haar_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  MatrixXc z(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) {
      double re = gauss(rng);
      double im = gauss(rng);
      z(i, j) = cplx(re, im);
    }
  Eigen::HouseholderQR<MatrixXc> qr(z);
  MatrixXc q = qr.householderQ();
  MatrixXc r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    cplx d = r(j, j);
    double a = std::abs(d);
    q.col(j) *= a > 0 ? d / a : cplx(1.0);
  }
  return q;
}

namespace {

MatrixXc conjugated_diagonal(const MatrixXc& w, const VectorXc& diag) { return w * diag.asDiagonal() * w.adjoint(); }

VectorXc random_unit(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  VectorXc v(dim);
  for (int i = 0; i < dim; ++i) {
    double re = gauss(rng);
    double im = gauss(rng);
    v(i) = cplx(re, im);
  }
  return v / v.norm();
}

FiniteUnitaryRep random_rep_from(const GroupModel& model, int dim, std::mt19937_64& rng) {
  if (dim < 1) throw std::invalid_argument("representation dimension must be >= 1");
  std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
  std::vector<MatrixXc> images;
  switch (model.kind()) {
    case GroupKind::Free:
      for (int g = 0; g < model.generator_count(); ++g) images.push_back(haar_unitary(dim, rng));
      break;
    case GroupKind::FreeAbelian: {
      // commuting unitaries share one eigenbasis
      MatrixXc w = haar_unitary(dim, rng);
      for (int g = 0; g < model.generator_count(); ++g) {
        VectorXc d(dim);
        for (int i = 0; i < dim; ++i) d(i) = std::polar(1.0, angle(rng));
        images.push_back(conjugated_diagonal(w, d));
      }
      break;
    }
    case GroupKind::FiniteCyclic: {
      MatrixXc w = haar_unitary(dim, rng);
      std::uniform_int_distribution<int> residue(0, model.parameter() - 1);
      VectorXc d(dim);
      for (int i = 0; i < dim; ++i) d(i) = std::polar(1.0, 2 * std::numbers::pi * residue(rng) / model.parameter());
      images.push_back(conjugated_diagonal(w, d));
      break;
    }
    case GroupKind::InfiniteDihedral:
      for (int g = 0; g < 2; ++g) {
        MatrixXc w = haar_unitary(dim, rng);
        std::bernoulli_distribution sign(0.5);
        VectorXc d(dim);
        for (int i = 0; i < dim; ++i) d(i) = sign(rng) ? 1.0 : -1.0;
        images.push_back(conjugated_diagonal(w, d));
      }
      break;
  }
  // relations hold up to roundoff of the conjugation
  return FiniteUnitaryRep(model, std::move(images), 1e-9);
}

}  // namespace

FiniteUnitaryRep random_rep(const GroupModel& model, int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_rep_from(model, dim, rng);
}

GroupFunction random_pd(const GroupModel& model, int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  FiniteUnitaryRep pi = random_rep_from(model, dim, rng);
  VectorXc v = random_unit(dim, rng);
  return matrix_coefficient(pi, v, v)
      .with_sup_bound(1.0)
      .with_label("random_pd(seed=" + std::to_string(seed) + ", dim=" + std::to_string(dim) + ")");
}

}  // namespace icw
