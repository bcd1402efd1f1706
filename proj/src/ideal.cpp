#include "icw/ideal.hpp"

#include <cmath>
#include <sstream>

#include "icw/errors.hpp"

namespace icw {

std::string to_string(SeriesStatus status) {
  switch (status) {
    case SeriesStatus::Finite:
      return "finite";
    case SeriesStatus::Divergent:
      return "divergent";
    case SeriesStatus::Undecided:
      return "undecided";
  }
  return {};
}

std::string to_string(Membership m) {
  switch (m) {
    case Membership::Member:
      return "member";
    case Membership::NonMember:
      return "non_member";
    case Membership::Undecided:
      return "undecided";
  }
  return {};
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

double log_sphere_count(const GroupModel& model, int k) {
  if (model.kind() == GroupKind::Free && k >= 1)
    return std::log(2.0 * model.parameter()) + (k - 1) * std::log(2.0 * model.parameter() - 1.0);
  return std::log(model.sphere_count(k));
}

/// sum over spheres lo..hi of |h|^p (exact).
double sphere_range_sum(const GroupFunction& h, double p, int lo, int hi, std::size_t budget) {
  if (hi < lo) return 0.0;
  double total = 0;
  if (h.is_radial()) {
    for (int k = lo; k <= hi; ++k) {
      double count = h.model().sphere_count(k);
      if (count == 0) continue;
      double v = std::abs(h.profile(k));
      if (v != 0) total += count * std::pow(v, p);
    }
    return total;
  }
  Ball b(h.model(), hi, budget);
  for (int k = lo; k <= hi; ++k)
    for (const auto& s : b.sphere(k)) total += std::pow(std::abs(h(s)), p);
  return total;
}

/// sum_{k > R} s_k (A c^k)^p, valid when |S| c^p < 1.
double exp_decay_tail(const GroupModel& model, const ExpDecay& cert, double p, int radius, double scale) {
  const double log_q = p * std::log(cert.rate);
  const double log_amp = p * std::log(cert.amplitude);
  const double crude = static_cast<double>(model.generating_set().size()) * std::exp(log_q);
  double acc = 0;
  for (int k = radius + 1;; ++k) {
    double count = model.sphere_count(k);
    if (count > 0) acc += std::exp(log_sphere_count(model, k) + k * log_q + log_amp);
    // s_j <= |S|^j bounds everything past k
    double remainder = std::exp(log_amp + (k + 1) * std::log(crude)) / (1.0 - crude);
    if (remainder <= 1e-18 * (scale + acc) || k - radius > 200000) return acc + remainder;
  }
}

}  // namespace

LpNorm lp_norm(const GroupFunction& h, double p, int radius, std::size_t budget) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm needs p >= 1");
  if (radius < 0) throw std::invalid_argument("lp_norm needs R >= 0");
  const GroupModel& model = h.model();
  LpNorm out;
  out.radius = radius;
  out.p = p;

  if (auto diam = model.diameter()) {
    out.partial = sphere_range_sum(h, p, 0, std::min(radius, *diam), budget);
    out.tail_bound = sphere_range_sum(h, p, radius + 1, *diam, budget);
    out.status = SeriesStatus::Finite;
    out.witness = "finite group";
    return out;
  }

  out.partial = sphere_range_sum(h, p, 0, radius, budget);
  const auto& tail = h.tail();
  if (const auto* fs = std::get_if<FiniteSupport>(&tail)) {
    out.tail_bound = sphere_range_sum(h, p, radius + 1, fs->radius, budget);
    out.status = SeriesStatus::Finite;
    out.witness = "finite support radius " + std::to_string(fs->radius);
  } else if (const auto* ed = std::get_if<ExpDecay>(&tail)) {
    const double q = std::pow(ed->rate, p);
    const double generators = static_cast<double>(model.generating_set().size());
    if (ed->amplitude == 0) {
      out.tail_bound = 0;
      out.status = SeriesStatus::Finite;
      out.witness = "zero amplitude";
    } else if (generators * q < 1.0) {
      out.tail_bound = exp_decay_tail(model, *ed, p, radius, out.partial);
      out.status = SeriesStatus::Finite;
      out.witness = "|S| c^p = " + fmt(generators * q) + " < 1";
    } else if (ed->lower_amplitude() > 0 && model.growth_rate() * q >= 1.0) {
      out.status = SeriesStatus::Divergent;
      out.witness = "decay floor with growth * c^p = " + fmt(model.growth_rate() * q) + " >= 1";
    } else {
      out.status = SeriesStatus::Undecided;
      out.witness = "|S| c^p = " + fmt(generators * q) + " >= 1 and no divergence certificate";
    }
  } else if (const auto* bb = std::get_if<BoundedBelow>(&tail); bb && bb->floor > 0) {
    out.status = SeriesStatus::Divergent;
    out.witness = "bounded below by " + fmt(bb->floor) + " off ball(" + std::to_string(bb->radius) + ")";
  } else {
    out.status = SeriesStatus::Undecided;
    out.witness = "certificate " + describe(tail) + " gives no tail bound";
  }
  return out;
}

MembershipVerdict ideal_membership(const GroupFunction& h, const IdealSpec& ideal, std::size_t budget) {
  using K = IdealSpec::Kind;
  const auto& tail = h.tail();
  if (h.model().is_finite()) return {Membership::Member, "finite group: every ideal is l^infinity"};

  const auto* fs = std::get_if<FiniteSupport>(&tail);
  const auto* ed = std::get_if<ExpDecay>(&tail);
  const auto* ss = std::get_if<SphereSupSequence>(&tail);
  const auto* bb = std::get_if<BoundedBelow>(&tail);
  const bool bounded_below = bb && bb->floor > 0;
  const std::string cert = describe(tail);

  auto c0 = [&]() -> MembershipVerdict {
    if (fs) return {Membership::Member, cert};
    if (ed) return {Membership::Member, cert + " vanishes at infinity"};
    if (ss && ss->vanishing) return {Membership::Member, cert};
    if (bounded_below) return {Membership::NonMember, cert};
    return {Membership::Undecided, "certificate " + cert + " does not decide c0"};
  };

  switch (ideal.kind) {
    case K::Linf:
      if (h.sup_bound()) return {Membership::Member, "sup bound " + fmt(*h.sup_bound())};
      if (fs || ed || (ss && ss->vanishing)) return {Membership::Member, cert + " implies boundedness"};
      return {Membership::Undecided, "no boundedness certificate"};
    case K::CC:
      if (fs) return {Membership::Member, cert};
      if (ed && ed->lower_amplitude() > 0) return {Membership::NonMember, cert + " is nonzero everywhere"};
      if (bounded_below) return {Membership::NonMember, cert};
      return {Membership::Undecided, "certificate " + cert + " does not decide finite support"};
    case K::C0:
      return c0();
    case K::TIdeal: {
      auto v = c0();
      if (v.verdict == Membership::Member) return {Membership::Member, "c0 member: " + v.witness};
      if (bounded_below) return {Membership::NonMember, cert + " gives inf_{s not in F} |h| > 0"};
      return {Membership::Undecided, "certificate " + cert + " does not decide the T ideal"};
    }
    case K::Lp: {
      LpNorm n = lp_norm(h, ideal.p, h.is_radial() ? 20 : 0, budget);
      Membership m = n.status == SeriesStatus::Finite      ? Membership::Member
                     : n.status == SeriesStatus::Divergent ? Membership::NonMember
                                                           : Membership::Undecided;
      return {m, n.witness};
    }
    case K::L2Plus: {
      if (fs) return {Membership::Member, cert};
      if (bounded_below) return {Membership::NonMember, cert};
      if (ed) {
        const double generators = static_cast<double>(h.model().generating_set().size());
        const double q2 = ed->rate * ed->rate;
        if (ed->amplitude == 0 || generators * q2 <= 1.0)
          return {Membership::Member, "|S| c^2 = " + fmt(generators * q2) + " <= 1"};
        if (ed->lower_amplitude() > 0 && h.model().growth_rate() * q2 > 1.0)
          return {Membership::NonMember, "decay floor with growth * c^2 = " + fmt(h.model().growth_rate() * q2) + " > 1"};
      }
      return {Membership::Undecided, "certificate " + cert + " does not decide l^{2+}"};
    }
  }
  return {};
}

std::vector<double> sphere_sups(const GroupFunction& h, int radius, std::size_t budget) {
  std::vector<double> sups(static_cast<std::size_t>(radius) + 1, 0.0);
  if (h.is_radial()) {
    for (int k = 0; k <= radius; ++k)
      if (h.model().sphere_count(k) > 0) sups[static_cast<std::size_t>(k)] = std::abs(h.profile(k));
    return sups;
  }
  Ball b(h.model(), radius, budget);
  for (int k = 0; k <= radius; ++k)
    for (const auto& s : b.sphere(k)) sups[static_cast<std::size_t>(k)] = std::max(sups[static_cast<std::size_t>(k)], std::abs(h(s)));
  return sups;
}

}  // namespace icw
