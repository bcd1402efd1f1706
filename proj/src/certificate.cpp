#include "icw/certificate.hpp"

#include <cmath>
#include <sstream>

#include "icw/errors.hpp"
#include "icw/families.hpp"

namespace icw {

GroupRingElement schur_multiply(const GroupFunction& h, const GroupRingElement& x) {
  if (!(h.model() == x.model())) throw ModelMismatch("schur_multiply across different groups");
  GroupRingElement out(x.model());
  for (const auto& [s, alpha] : x.terms()) out.add(s, alpha * h(s));
  return out;
}

GroupFunction state_compose(const GroupFunction& phi, const GroupFunction& h) {
  cplx at_e = phi(identity(phi.model()));
  if (std::abs(at_e - 1.0) > 1e-12)
    throw std::invalid_argument("state_compose needs phi(e) = 1, got |phi(e) - 1| = " + std::to_string(std::abs(at_e - 1.0)));
  return product(phi, h).with_label("state(" + phi.label() + ")o(" + h.label() + ")");
}

std::string witness_label(const IdealSpec& ideal) {
  switch (ideal.kind) {
    case IdealSpec::Kind::CC:
      return "amenability witness";
    case IdealSpec::Kind::C0:
      return "Haagerup witness";
    case IdealSpec::Kind::TIdeal:
      return "Property-(T)-ideal witness";
    default:
      return ideal.name() + " witness";
  }
}

std::vector<double> default_thresholds(std::size_t count) {
  std::vector<double> t;
  for (std::size_t i = 0; i < count; ++i) t.push_back(std::pow(0.95, static_cast<double>(i)));
  return t;
}

namespace {
std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}
}  // namespace

EqualityCertificate equality_certificate(const IdealSpec& ideal, const std::vector<GroupFunction>& family,
                                         int conv_radius, const std::vector<double>& thresholds, double psd_tol,
                                         std::size_t budget) {
  if (family.empty()) throw std::invalid_argument("equality_certificate needs a nonempty family");
  if (thresholds.size() != family.size())
    throw std::invalid_argument("need one threshold per function: " + std::to_string(thresholds.size()) + " vs " +
                                std::to_string(family.size()));
  EqualityCertificate cert;
  cert.ideal = ideal;
  cert.conv_radius = conv_radius;
  cert.witness = witness_label(ideal);
  for (std::size_t i = 1; i < thresholds.size(); ++i)
    if (!(thresholds[i] < thresholds[i - 1]))
      cert.failures.push_back("threshold schedule not decreasing at position " + std::to_string(i));

  Ball window(family.front().model(), conv_radius, budget);
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < family.size(); ++i) {
    const GroupFunction& h = family[i];
    FunctionCheck c;
    c.label = h.label();
    c.threshold = thresholds[i];
    if (!(h.model() == window.model())) throw ModelMismatch("family mixes group models");
    try {
      c.pd = pd_window_check(h, window.elements(), psd_tol);
      if (!c.pd.pass())
        c.failures.push_back("pd check " + to_string(c.pd.status) + " (lambda_min " + fmt(c.pd.min_eigenvalue) + ")");
      c.membership = ideal_membership(h, ideal, budget);
      if (!c.membership.member())
        c.failures.push_back("membership in " + ideal.name() + " " + to_string(c.membership.verdict) + ": " +
                             c.membership.witness);
      for (const auto& s : window.elements()) c.deviation = std::max(c.deviation, std::abs(h(s) - 1.0));
    } catch (const CertificateViolation& e) {
      c.failures.push_back(e.what());
    }
    if (!(c.deviation < c.threshold))
      c.failures.push_back("deviation " + fmt(c.deviation) + " not below threshold " + fmt(c.threshold));
    if (c.deviation > previous)
      c.failures.push_back("deviation increased from " + fmt(previous) + " to " + fmt(c.deviation));
    previous = c.deviation;
    for (const auto& f : c.failures) cert.failures.push_back(c.label + ": " + f);
    cert.checks.push_back(std::move(c));
  }
  cert.accepted = cert.failures.empty();
  return cert;
}

}  // namespace icw
