#include "icw/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>
#include <sstream>
#include <unordered_set>

#include "icw/errors.hpp"

namespace icw {

FiniteSystem::FiniteSystem(GroupModel model, std::vector<std::vector<int>> action, std::vector<double> measure)
    : model_(model), action_(std::move(action)), measure_(std::move(measure)) {
  const auto n = static_cast<int>(measure_.size());
  if (n < 1) throw InputError("measure: at least one point is required");
  if (static_cast<int>(action_.size()) != model_.generator_count())
    throw InputError("action: " + model_.name() + " needs " + std::to_string(model_.generator_count()) +
                     " permutations, got " + std::to_string(action_.size()));
  for (int g = 0; g < model_.generator_count(); ++g) {
    const auto& perm = action_[static_cast<std::size_t>(g)];
    const std::string where = "action." + model_.generator_name(g);
    if (static_cast<int>(perm.size()) != n)
      throw InputError(where + ": length " + std::to_string(perm.size()) + ", expected " + std::to_string(n));
    std::vector<int> inv(static_cast<std::size_t>(n), -1);
    for (int x = 0; x < n; ++x) {
      int y = perm[static_cast<std::size_t>(x)];
      if (y < 0 || y >= n)
        throw InputError(where + "[" + std::to_string(x) + "]: image " + std::to_string(y) + " out of range");
      if (inv[static_cast<std::size_t>(y)] >= 0)
        throw InputError(where + "[" + std::to_string(x) + "]: image " + std::to_string(y) + " already taken by [" +
                         std::to_string(inv[static_cast<std::size_t>(y)]) + "], not a bijection");
      inv[static_cast<std::size_t>(y)] = x;
    }
    inverse_.push_back(std::move(inv));
  }
  double total = 0;
  for (int x = 0; x < n; ++x) {
    double m = measure_[static_cast<std::size_t>(x)];
    if (!std::isfinite(m) || m <= 0)
      throw InputError("measure[" + std::to_string(x) + "]: " + std::to_string(m) + " is not strictly positive");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "measure: sums to " << total << ", expected 1 within 1e-12";
    throw InputError(os.str());
  }
  for (const auto& rel : model_.relators()) {
    for (int x = 0; x < n; ++x) {
      int y = x;
      for (auto it = rel.rbegin(); it != rel.rend(); ++it) y = act_letter(static_cast<Letter>(*it), y);
      if (y != x) {
        std::string name;
        for (char c : rel) name += model_.letter_name(static_cast<Letter>(c));
        throw InputError("action: relation " + name + " fails at point " + std::to_string(x));
      }
    }
  }
}

int FiniteSystem::act_letter(Letter l, int x) const {
  const auto& table = (l & 1) ? inverse_[l / 2] : action_[l / 2];
  return table[static_cast<std::size_t>(x)];
}

int FiniteSystem::act(const GroupElement& s, int x) const {
  if (!(s.model == model_)) throw ModelMismatch("element of " + s.model.name() + " acting on a " + model_.name() + " system");
  for (auto it = s.word.rbegin(); it != s.word.rend(); ++it) x = act_letter(static_cast<Letter>(*it), x);
  return x;
}

namespace {

std::vector<int> identity_perm(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  return p;
}

std::vector<int> compose_perm(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[static_cast<std::size_t>(b[i])];
  return c;
}

// disjoint cycles whose lengths divide `order`
std::vector<int> random_periodic_perm(int n, int order, std::mt19937_64& rng) {
  std::vector<int> pts = identity_perm(n);
  std::shuffle(pts.begin(), pts.end(), rng);
  std::vector<int> divisors;
  for (int d = 1; d <= order; ++d)
    if (order % d == 0) divisors.push_back(d);
  std::vector<int> perm = identity_perm(n);
  std::size_t pos = 0;
  while (pos < pts.size()) {
    std::vector<int> fit;
    for (int d : divisors)
      if (pos + static_cast<std::size_t>(d) <= pts.size()) fit.push_back(d);
    int len = fit[std::uniform_int_distribution<std::size_t>(0, fit.size() - 1)(rng)];
    for (int i = 0; i < len; ++i)
      perm[static_cast<std::size_t>(pts[pos + static_cast<std::size_t>(i)])] =
          pts[pos + static_cast<std::size_t>((i + 1) % len)];
    pos += static_cast<std::size_t>(len);
  }
  return perm;
}

}  // namespace

FiniteSystem random_system(const GroupModel& model, int points, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<int>> action;
  switch (model.kind()) {
    case GroupKind::Free:
      for (int g = 0; g < model.generator_count(); ++g) {
        auto p = identity_perm(points);
        std::shuffle(p.begin(), p.end(), rng);
        action.push_back(std::move(p));
      }
      break;
    case GroupKind::FreeAbelian: {
      // powers of one permutation commute
      auto base = identity_perm(points);
      std::shuffle(base.begin(), base.end(), rng);
      std::uniform_int_distribution<int> exponent(0, 3);
      for (int g = 0; g < model.generator_count(); ++g) {
        auto p = identity_perm(points);
        for (int k = exponent(rng); k > 0; --k) p = compose_perm(base, p);
        action.push_back(std::move(p));
      }
      break;
    }
    case GroupKind::FiniteCyclic:
      action.push_back(random_periodic_perm(points, model.parameter(), rng));
      break;
    case GroupKind::InfiniteDihedral:
      for (int g = 0; g < 2; ++g) action.push_back(random_periodic_perm(points, 2, rng));
      break;
  }
  std::uniform_real_distribution<double> weight(0.1, 1.0);
  std::vector<double> mu(static_cast<std::size_t>(points));
  for (auto& m : mu) m = weight(rng);
  double total = std::accumulate(mu.begin(), mu.end(), 0.0);
  for (auto& m : mu) m /= total;
  return FiniteSystem(model, std::move(action), std::move(mu));
}

double defining_identity_defect(const FiniteSystem& system, const GroupElement& s) {
  const int n = system.points();
  const auto& mu = system.measure();
  GroupElement sinv = inverse(s);
  std::vector<double> rhs(static_cast<std::size_t>(n), 0.0);
  for (int x = 0; x < n; ++x) {
    int y = system.act(sinv, x);  // (s.delta_y)(x) = delta_y(s^{-1}.x)
    double rho = mu[static_cast<std::size_t>(y)] / mu[static_cast<std::size_t>(x)];
    rhs[static_cast<std::size_t>(y)] += rho * mu[static_cast<std::size_t>(x)];
  }
  double defect = 0;
  for (int y = 0; y < n; ++y)
    defect = std::max(defect, std::abs(mu[static_cast<std::size_t>(y)] - rhs[static_cast<std::size_t>(y)]));
  return defect;
}

VectorXr radon_nikodym(const FiniteSystem& system, const GroupElement& s) {
  const int n = system.points();
  const auto& mu = system.measure();
  GroupElement sinv = inverse(s);
  VectorXr rho(n);
  for (int x = 0; x < n; ++x)
    rho(x) = mu[static_cast<std::size_t>(system.act(sinv, x))] / mu[static_cast<std::size_t>(x)];
  double defect = defining_identity_defect(system, s);
  if (defect > 1e-12)
    throw ConsistencyError("Radon-Nikodym defining identity fails for " + to_string(s) + " by " + std::to_string(defect));
  return rho;
}

double chain_rule_defect(const FiniteSystem& system, const GroupElement& s, const GroupElement& t) {
  VectorXr rs = radon_nikodym(system, s);
  VectorXr rt = radon_nikodym(system, t);
  VectorXr rst = radon_nikodym(system, compose(s, t));
  GroupElement sinv = inverse(s);
  double defect = 0;
  for (int x = 0; x < system.points(); ++x)
    defect = std::max(defect, std::abs(rst(x) - rs(x) * rt(system.act(sinv, x))));
  return defect;
}

CovariantRep::CovariantRep(FiniteSystem system) : system_(std::move(system)) {
  const int n = system_.points();
  mu_ = Eigen::Map<const VectorXr>(system_.measure().data(), n);
  for (int g = 0; g < system_.model().generator_count(); ++g) {
    GroupElement s = icw::generator(system_.model(), g);
    VectorXr rho = radon_nikodym(system_, s);
    GroupElement sinv = inverse(s);
    MatrixXr u = MatrixXr::Zero(n, n);
    for (int x = 0; x < n; ++x) u(x, system_.act(sinv, x)) = std::sqrt(rho(x));
    generators_.push_back(std::move(u));
  }
  VectorXc f(n);
  for (int x = 0; x < n; ++x) f(x) = cplx(x + 1.0, 0.5 * x);
  for (int g = 0; g < system_.model().generator_count(); ++g) {
    double du = unitarity_defect(generators_[static_cast<std::size_t>(g)]);
    double dc = covariance_defect(icw::generator(system_.model(), g), f);
    if (du > 1e-12 || dc > 1e-12)
      throw ConsistencyError("covariant representation check failed for generator " +
                             system_.model().generator_name(g) + ": unitarity " + std::to_string(du) + ", covariance " +
                             std::to_string(dc));
  }
}

MatrixXr CovariantRep::adjoint(const MatrixXr& u) const {
  return mu_.cwiseInverse().asDiagonal() * u.transpose() * mu_.asDiagonal();
}

MatrixXr CovariantRep::evaluate(const GroupElement& s) const {
  const int n = system_.points();
  MatrixXr m = MatrixXr::Identity(n, n);
  for (char c : s.word) {
    auto l = static_cast<Letter>(c);
    const MatrixXr& u = generators_[l / 2];
    m = (l & 1) ? MatrixXr(m * adjoint(u)) : MatrixXr(m * u);
  }
  return m;
}

MatrixXr CovariantRep::multiplication(const VectorXc& f) {
  if (f.imag().cwiseAbs().maxCoeff() != 0.0)
    throw std::invalid_argument("multiplication operators are stored as real matrices; pass a real function");
  return f.real().asDiagonal();
}

double CovariantRep::unitarity_defect(const MatrixXr& u) const {
  return (u.transpose() * mu_.asDiagonal() * u - MatrixXr(mu_.asDiagonal())).cwiseAbs().maxCoeff();
}

double CovariantRep::covariance_defect(const GroupElement& s, const VectorXc& f) const {
  MatrixXr u = evaluate(s);
  MatrixXr uinv = adjoint(u);
  GroupElement sinv = inverse(s);
  VectorXc sf(f.size());
  for (int x = 0; x < system_.points(); ++x) sf(x) = f(system_.act(sinv, x));
  MatrixXc lhs = u.cast<cplx>() * f.asDiagonal() * uinv.cast<cplx>();
  MatrixXc rhs = sf.asDiagonal();
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

FiniteUnitaryRep CovariantRep::orthonormal() const {
  VectorXr sq = mu_.cwiseSqrt();
  std::vector<MatrixXc> images;
  for (const auto& u : generators_) images.push_back((sq.asDiagonal() * u * sq.cwiseInverse().asDiagonal()).cast<cplx>());
  return FiniteUnitaryRep(system_.model(), std::move(images), 1e-10);
}

cplx CovariantRep::inner(const VectorXc& f, const VectorXc& g) const {
  cplx acc = 0;
  for (int x = 0; x < system_.points(); ++x) acc += f(x) * std::conj(g(x)) * mu_(x);
  return acc;
}

CovariantRep covariant_rep(const FiniteSystem& system) { return CovariantRep(system); }

Envelopes envelopes(const FiniteSystem& system, std::optional<int> radius, std::size_t budget) {
  const int n = system.points();
  const auto& mu = system.measure();
  const GroupModel& model = system.model();
  Envelopes env;
  env.upper = VectorXr::Ones(n);
  env.lower = VectorXr::Ones(n);
  env.argmax.assign(static_cast<std::size_t>(n), identity(model));
  env.argmin.assign(static_cast<std::size_t>(n), identity(model));
  if (!radius) {
    env.mode = "all";
    const auto letters = model.generating_set();
    for (int x = 0; x < n; ++x) {
      // breadth-first orbit walk; word[y] satisfies word[y].x = y, so s = word[y]^{-1} has s^{-1}.x = y
      std::vector<std::optional<GroupElement>> word(static_cast<std::size_t>(n));
      word[static_cast<std::size_t>(x)] = identity(model);
      std::queue<int> queue;
      queue.push(x);
      while (!queue.empty()) {
        int z = queue.front();
        queue.pop();
        for (Letter l : letters) {
          int y = system.act_letter(l, z);
          if (word[static_cast<std::size_t>(y)]) continue;
          word[static_cast<std::size_t>(y)] =
              compose(from_letters(model, std::string(1, static_cast<char>(l))), *word[static_cast<std::size_t>(z)]);
          queue.push(y);
          double r = mu[static_cast<std::size_t>(y)] / mu[static_cast<std::size_t>(x)];
          if (r > env.upper(x)) {
            env.upper(x) = r;
            env.argmax[static_cast<std::size_t>(x)] = inverse(*word[static_cast<std::size_t>(y)]);
          }
          if (r < env.lower(x)) {
            env.lower(x) = r;
            env.argmin[static_cast<std::size_t>(x)] = inverse(*word[static_cast<std::size_t>(y)]);
          }
        }
      }
    }
  } else {
    env.mode = "ball";
    env.radius = *radius;
    Ball b(model, *radius, budget);
    for (int k = 1; k <= *radius; ++k)
      for (const auto& s : b.sphere(k)) {
        GroupElement sinv = inverse(s);
        for (int x = 0; x < n; ++x) {
          double r = mu[static_cast<std::size_t>(system.act(sinv, x))] / mu[static_cast<std::size_t>(x)];
          if (r > env.upper(x)) {
            env.upper(x) = r;
            env.argmax[static_cast<std::size_t>(x)] = s;
            env.last_change = k;
          }
          if (r < env.lower(x)) {
            env.lower(x) = r;
            env.argmin[static_cast<std::size_t>(x)] = s;
            env.last_change = k;
          }
        }
      }
    env.stabilized = env.last_change < *radius || *radius == 0;
  }
  for (int x = 0; x < n; ++x) {
    env.integral_upper += env.upper(x) * mu[static_cast<std::size_t>(x)];
    env.integral_lower += env.lower(x) * mu[static_cast<std::size_t>(x)];
  }
  return env;
}

namespace {

VectorXc canonical_phase(VectorXc v) {
  Eigen::Index i = 0;
  v.cwiseAbs().maxCoeff(&i);
  if (std::abs(v(i)) > 0) v *= std::abs(v(i)) / v(i);
  return v;
}

}  // namespace

SpectralGap spectral_gap(const FiniteUnitaryRep& rep) {
  const int d = rep.dim();
  MatrixXc sum = MatrixXc::Zero(d, d);
  const MatrixXc id = MatrixXc::Identity(d, d);
  for (Letter l : rep.model().generating_set()) {
    MatrixXc u = (l & 1) ? MatrixXc(rep.image(l / 2).adjoint()) : rep.image(l / 2);
    sum += (id - u).adjoint() * (id - u);
  }
  Eigen::SelfAdjointEigenSolver<MatrixXc> es((sum + sum.adjoint()) / 2.0);
  SpectralGap gap;
  gap.lambda_min = es.eigenvalues()(0);
  gap.vector = canonical_phase(es.eigenvectors().col(0));
  gap.fixed = gap.lambda_min <= 1e-10;
  return gap;
}

SpectralGap spectral_gap(const CovariantRep& rep) {
  SpectralGap gap = spectral_gap(rep.orthonormal());
  const auto& mu = rep.system().measure();
  for (int x = 0; x < rep.system().points(); ++x) gap.vector(x) /= std::sqrt(mu[static_cast<std::size_t>(x)]);
  gap.vector /= std::sqrt(rep.inner(gap.vector, gap.vector).real());
  gap.vector = canonical_phase(gap.vector);
  return gap;
}

GroupoidFunction::GroupoidFunction(std::shared_ptr<const FiniteSystem> system, Evaluator eval, TailCertificate tail,
                                   std::string label)
    : system_(std::move(system)),
      eval_(std::make_shared<const Evaluator>(std::move(eval))),
      tail_(std::move(tail)),
      label_(std::move(label)) {}

cplx GroupoidFunction::operator()(int x, const GroupElement& s) const {
  if (x < 0 || x >= system_->points()) throw std::out_of_range("point " + std::to_string(x) + " outside X");
  cplx v = (*eval_)(x, s);
  if (const char* why = certificate_conflict(tail_, std::nullopt, word_length(s), v))
    throw_certificate_violation(tail_, label_, "(" + std::to_string(x) + ", " + to_string(s) + ")", why);
  return v;
}

GroupoidFunction lift(std::shared_ptr<const FiniteSystem> system, const GroupFunction& h) {
  if (!(system->model() == h.model())) throw ModelMismatch("lift of a function on another group");
  return GroupoidFunction(std::move(system), [h](int, const GroupElement& s) { return h(s); }, h.tail(),
                          "lift(" + h.label() + ")");
}

GroupoidPdVerdict groupoid_pd_check(const GroupoidFunction& h, std::span<const GroupElement> elements, double tol) {
  std::unordered_set<GroupElement, GroupElementHash> seen;
  for (const auto& s : elements)
    if (!seen.insert(s).second) throw std::invalid_argument("window elements must be distinct: " + to_string(s) + " repeats");
  const auto m = static_cast<Eigen::Index>(elements.size());
  std::vector<GroupElement> inv;
  for (const auto& s : elements) inv.push_back(inverse(s));
  GroupoidPdVerdict out;
  const FiniteSystem& sys = h.system();
  for (int x = 0; x < sys.points(); ++x) {
    MatrixXc mx(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      int sx = sys.act(elements[static_cast<std::size_t>(i)], x);
      for (Eigen::Index j = 0; j < m; ++j)
        mx(i, j) = h(sx, compose(elements[static_cast<std::size_t>(i)], inv[static_cast<std::size_t>(j)]));
    }
    out.per_point.push_back(psd_verdict(mx, tol));
    if (!out.per_point.back().pass() && out.pass) {
      out.pass = false;
      out.first_failure = x;
    }
  }
  return out;
}

GroupoidElement groupoid_schur_multiply(const GroupoidFunction& h, const GroupoidElement& a) {
  if (a.points != h.system().points()) throw std::invalid_argument("groupoid element lives on a different space");
  GroupoidElement out{a.model, a.points, {}};
  for (const auto& [s, f] : a.terms) {
    VectorXc g(f.size());
    for (int x = 0; x < a.points; ++x) g(x) = f(x) * h(x, s);
    out.terms.emplace(s, std::move(g));
  }
  return out;
}

namespace {

TailCertificate scaled_tail(const TailCertificate& tail, double factor) {
  if (const auto* fs = std::get_if<FiniteSupport>(&tail)) return *fs;
  if (const auto* ed = std::get_if<ExpDecay>(&tail)) return ExpDecay{ed->amplitude * factor, ed->rate, false};
  if (const auto* ss = std::get_if<SphereSupSequence>(&tail)) {
    SphereSupSequence out = *ss;
    for (auto& b : out.bounds) b *= factor;
    return out;
  }
  return NoCertificate{};
}

}  // namespace

GroupFunction state_function(const GroupoidFunction& h, const VectorXc& v) {
  const FiniteSystem& sys = h.system();
  if (v.size() != sys.points()) throw std::invalid_argument("state vector has the wrong length");
  const auto& mu = sys.measure();
  double norm2 = 0;
  for (int x = 0; x < sys.points(); ++x) norm2 += std::norm(v(x)) * mu[static_cast<std::size_t>(x)];
  // |psi(s)| <= H(s) ||v||^2 by Cauchy-Schwarz
  return GroupFunction(
      sys.model(),
      [h, v](const GroupElement& s) {
        const FiniteSystem& sys = h.system();
        const auto& mu = sys.measure();
        GroupElement sinv = inverse(s);
        cplx acc = 0;
        for (int x = 0; x < sys.points(); ++x) {
          int y = sys.act(sinv, x);
          acc += h(x, s) * v(y) * std::conj(v(x)) *
                 std::sqrt(mu[static_cast<std::size_t>(x)] * mu[static_cast<std::size_t>(y)]);
        }
        return acc;
      },
      scaled_tail(h.tail(), norm2), "state(" + h.label() + ")");
}

MatrixXc state_kernel(const GroupoidFunction& h, const VectorXc& v, std::span<const GroupElement> elements) {
  GroupFunction psi = state_function(h, v);
  const auto m = static_cast<Eigen::Index>(elements.size());
  MatrixXc k(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    GroupElement si = inverse(elements[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < m; ++j) k(i, j) = psi(compose(si, elements[static_cast<std::size_t>(j)]));
  }
  return k;
}

GroupFunction sup_norm_profile(const GroupoidFunction& h) {
  return GroupFunction(
      h.system().model(),
      [h](const GroupElement& s) {
        double best = 0;
        for (int x = 0; x < h.system().points(); ++x) best = std::max(best, std::abs(h(x, s)));
        return cplx(best);
      },
      h.tail(), "H(" + h.label() + ")");
}

std::string to_string(ActionKind kind) { return kind == ActionKind::Amenable ? "amenable" : "aTmenable"; }

ActionCertificate action_certificate(ActionKind kind, const std::vector<GroupoidFunction>& family, int conv_radius,
                                     const std::vector<double>& thresholds, double psd_tol, std::size_t budget) {
  if (family.empty()) throw std::invalid_argument("action_certificate needs a nonempty family");
  if (thresholds.size() != family.size()) throw std::invalid_argument("need one threshold per function");
  ActionCertificate cert;
  cert.kind = kind;
  cert.conv_radius = conv_radius;
  const IdealSpec ideal = kind == ActionKind::Amenable ? IdealSpec::cc() : IdealSpec::c0();
  for (std::size_t i = 1; i < thresholds.size(); ++i)
    if (!(thresholds[i] < thresholds[i - 1]))
      cert.failures.push_back("threshold schedule not decreasing at position " + std::to_string(i));
  Ball window(family.front().system().model(), conv_radius, budget);
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < family.size(); ++i) {
    const GroupoidFunction& h = family[i];
    ActionCheck c;
    c.label = h.label();
    c.threshold = thresholds[i];
    try {
      c.pd = groupoid_pd_check(h, window.elements(), psd_tol);
      if (!c.pd.pass) c.failures.push_back("groupoid pd check fails at point " + std::to_string(c.pd.first_failure));
      c.membership = ideal_membership(sup_norm_profile(h), ideal, budget);
      if (!c.membership.member())
        c.failures.push_back("sup-norm profile membership in " + ideal.name() + " " + to_string(c.membership.verdict) +
                             ": " + c.membership.witness);
      for (const auto& s : window.elements())
        for (int x = 0; x < h.system().points(); ++x) c.deviation = std::max(c.deviation, std::abs(h(x, s) - 1.0));
    } catch (const CertificateViolation& e) {
      c.failures.push_back(e.what());
    }
    if (!(c.deviation < c.threshold))
      c.failures.push_back("deviation " + std::to_string(c.deviation) + " not below threshold " +
                           std::to_string(c.threshold));
    if (c.deviation > previous) c.failures.push_back("deviation increased along the family");
    previous = c.deviation;
    for (const auto& f : c.failures) cert.failures.push_back(c.label + ": " + f);
    cert.checks.push_back(std::move(c));
  }
  cert.accepted = cert.failures.empty();
  return cert;
}

DnReport dn_report(const FiniteSystem& system) {
  DnReport rep;
  rep.env = envelopes(system);
  rep.upper_integrable = std::isfinite(rep.env.integral_upper);
  rep.lower_positive = rep.env.lower.minCoeff() > 0;
  rep.caveat = "finite X with full-support measure: the upper envelope is integrable and the lower envelope positive";
  CovariantRep rep_u(system);
  rep.gap = spectral_gap(rep_u);
  rep.fixed_vector_exists = rep.gap.fixed;
  const int n = system.points();
  VectorXc up(n), low(n), mu_inv(n);
  for (int x = 0; x < n; ++x) {
    up(x) = std::sqrt(rep.env.upper(x));
    low(x) = std::sqrt(rep.env.lower(x));
    mu_inv(x) = 1.0 / std::sqrt(system.measure()[static_cast<std::size_t>(x)]);
  }
  for (auto& [name, v] : std::vector<std::pair<std::string, VectorXc>>{
           {"rho_upper_sqrt", up}, {"rho_lower_sqrt", low}, {"mu_inv_sqrt", mu_inv}}) {
    CandidateVector c;
    c.name = name;
    c.vector = v;
    double nv = std::sqrt(rep_u.inner(v, v).real());
    for (int g = 0; g < system.model().generator_count(); ++g) {
      VectorXc d = rep_u.generator(g).cast<cplx>() * v - v;
      c.residual = std::max(c.residual, std::sqrt(rep_u.inner(d, d).real()) / nv);
    }
    c.fixed = c.residual <= 1e-10;
    rep.candidates.push_back(std::move(c));
  }
  return rep;
}

}  // namespace icw
