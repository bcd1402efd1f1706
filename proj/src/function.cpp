#include "icw/function.hpp"

#include <cmath>
#include <sstream>

#include "icw/errors.hpp"

namespace icw {

namespace {
constexpr double kCertRelTol = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
}  // namespace

std::string describe(const TailCertificate& cert) {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const NoCertificate&) { os << "none"; },
                 [&](const FiniteSupport& c) { os << "finite_support(radius=" << c.radius << ")"; },
                 [&](const ExpDecay& c) {
                   os << "exp_decay(A=" << c.amplitude << ", c=" << c.rate << (c.tight ? ", tight" : "");
                   if (c.floor > 0) os << ", floor=" << c.floor;
                   os << ")";
                 },
                 [&](const SphereSupSequence& c) {
                   os << "sphere_sup(" << c.bounds.size() << " radii" << (c.vanishing ? ", vanishing" : "") << ")";
                 },
                 [&](const BoundedBelow& c) { os << "bounded_below(eps=" << c.floor << ", radius=" << c.radius << ")"; },
             },
             cert);
  return os.str();
}

GroupFunction::GroupFunction(GroupModel model, Evaluator eval, TailCertificate tail, std::string label)
    : model_(model),
      eval_(std::make_shared<const Evaluator>(std::move(eval))),
      tail_(std::move(tail)),
      label_(std::move(label)) {}

GroupFunction GroupFunction::radial(GroupModel model, Profile profile, TailCertificate tail, std::string label) {
  GroupFunction f(model, [profile](const GroupElement& s) { return profile(word_length(s)); }, std::move(tail),
                  std::move(label));
  f.profile_ = std::move(profile);
  return f;
}

cplx GroupFunction::profile(int k) const {
  if (!profile_) throw Unsupported("function '" + label_ + "' is not radial");
  return profile_(k);
}

cplx GroupFunction::operator()(const GroupElement& s) const {
  if (!(s.model == model_)) throw ModelMismatch("element of " + s.model.name() + " passed to a function on " + model_.name());
  cplx v = (*eval_)(s);
  check(s, v);
  return v;
}

const char* certificate_conflict(const TailCertificate& tail, const std::optional<double>& sup_bound, int k,
                                 cplx value) {
  const double mag = std::abs(value);
  if (!std::isfinite(mag)) return "non-finite value";
  const char* why = std::visit(
      overloaded{
          [&](const NoCertificate&) -> const char* { return nullptr; },
          [&](const FiniteSupport& c) -> const char* {
            return k > c.radius && mag != 0.0 ? "nonzero outside the support radius" : nullptr;
          },
          [&](const ExpDecay& c) -> const char* {
            const double decay = std::pow(c.rate, k);
            if (mag > c.amplitude * decay * (1 + kCertRelTol) + 1e-300) return "exceeds the decay bound";
            if (c.tight && mag < c.amplitude * decay * (1 - kCertRelTol)) return "below a tight decay bound";
            if (c.floor > 0 && mag < c.floor * decay * (1 - kCertRelTol)) return "below the decay floor";
            return nullptr;
          },
          [&](const SphereSupSequence& c) -> const char* {
            return static_cast<std::size_t>(k) < c.bounds.size() &&
                           mag > c.bounds[static_cast<std::size_t>(k)] * (1 + kCertRelTol) + 1e-15
                       ? "exceeds the sphere sup bound"
                       : nullptr;
          },
          [&](const BoundedBelow& c) -> const char* {
            return k > c.radius && mag < c.floor * (1 - kCertRelTol) ? "falls below the floor" : nullptr;
          },
      },
      tail);
  if (why) return why;
  if (sup_bound && mag > *sup_bound * (1 + kCertRelTol) + 1e-15) return "exceeds the uniform bound";
  return nullptr;
}

[[noreturn]] void throw_certificate_violation(const TailCertificate& tail, const std::string& label,
                                              const std::string& where, const char* why) {
  throw CertificateViolation("function '" + label + "' violates " + describe(tail) + " at " + where + ": " + why);
}

void check_certificate(const TailCertificate& tail, const std::optional<double>& sup_bound, int k, cplx value,
                       const std::string& label, const std::string& where) {
  if (const char* why = certificate_conflict(tail, sup_bound, k, value)) throw_certificate_violation(tail, label, where, why);
}

void GroupFunction::check(const GroupElement& s, cplx value) const {
  if (const char* why = certificate_conflict(tail_, sup_bound_, word_length(s), value))
    throw_certificate_violation(tail_, label_, to_string(s), why);
}

GroupFunction GroupFunction::with_tail(TailCertificate tail) const {
  GroupFunction f = *this;
  f.tail_ = std::move(tail);
  return f;
}

GroupFunction GroupFunction::with_sup_bound(std::optional<double> bound) const {
  GroupFunction f = *this;
  f.sup_bound_ = bound;
  return f;
}

GroupFunction GroupFunction::with_label(std::string label) const {
  GroupFunction f = *this;
  f.label_ = std::move(label);
  return f;
}

IdealSpec IdealSpec::parse(std::string_view text) {
  if (text == "cc") return cc();
  if (text == "c0") return c0();
  if (text == "linf") return linf();
  if (text == "l2plus") return l2plus();
  if (text == "t" || text == "tideal") return t_ideal();
  std::string_view digits;
  if (text.starts_with("lp:"))
    digits = text.substr(3);
  else if (text.starts_with("l"))
    digits = text.substr(1);
  if (!digits.empty()) {
    try {
      std::size_t used = 0;
      double p = std::stod(std::string(digits), &used);
      if (used == digits.size() && p >= 1.0 && std::isfinite(p)) return lp(p);
    } catch (const std::exception&) {
    }
  }
  throw InputError("unknown ideal '" + std::string(text) + "' (expected cc, c0, lp:<p>, linf, l2plus, t)");
}

std::string IdealSpec::name() const {
  switch (kind) {
    case Kind::CC:
      return "cc";
    case Kind::C0:
      return "c0";
    case Kind::Lp: {
      std::ostringstream os;
      os << "lp:" << p;
      return os.str();
    }
    case Kind::Linf:
      return "linf";
    case Kind::L2Plus:
      return "l2plus";
    case Kind::TIdeal:
      return "t";
  }
  return {};
}

}  // namespace icw
