#include "icw/families.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "icw/errors.hpp"

namespace icw {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

using ElementSet = std::unordered_set<GroupElement, GroupElementHash>;

std::optional<double> product_bound(const std::optional<double>& a, const std::optional<double>& b) {
  if (a && b) return *a * *b;
  return std::nullopt;
}

TailCertificate scaled(const TailCertificate& cert, double factor) {
  if (auto* e = std::get_if<ExpDecay>(&cert)) return ExpDecay{e->amplitude * factor, e->rate, false};
  if (auto* s = std::get_if<SphereSupSequence>(&cert)) {
    SphereSupSequence out = *s;
    for (double& b : out.bounds) b *= factor;
    return out;
  }
  if (std::holds_alternative<FiniteSupport>(cert)) return cert;
  return NoCertificate{};
}

TailCertificate product_tail(const GroupFunction& h, const GroupFunction& g) {
  const auto& a = h.tail();
  const auto& b = g.tail();
  auto* fa = std::get_if<FiniteSupport>(&a);
  auto* fb = std::get_if<FiniteSupport>(&b);
  if (fa && fb) return FiniteSupport{std::min(fa->radius, fb->radius)};
  if (fa) return *fa;
  if (fb) return *fb;
  auto* ea = std::get_if<ExpDecay>(&a);
  auto* eb = std::get_if<ExpDecay>(&b);
  if (ea && eb)
    return ExpDecay{ea->amplitude * eb->amplitude, ea->rate * eb->rate, ea->tight && eb->tight,
                    ea->lower_amplitude() * eb->lower_amplitude()};
  auto* ba = std::get_if<BoundedBelow>(&a);
  auto* bb = std::get_if<BoundedBelow>(&b);
  if (ba && bb) return BoundedBelow{ba->floor * bb->floor, std::max(ba->radius, bb->radius)};
  auto* sa = std::get_if<SphereSupSequence>(&a);
  auto* sb = std::get_if<SphereSupSequence>(&b);
  if (sa && sb) {
    SphereSupSequence out;
    std::size_t n = std::min(sa->bounds.size(), sb->bounds.size());
    for (std::size_t k = 0; k < n; ++k) out.bounds.push_back(sa->bounds[k] * sb->bounds[k]);
    out.vanishing = (sa->vanishing && sb->vanishing) || (sa->vanishing && g.sup_bound()) ||
                    (sb->vanishing && h.sup_bound());
    return out;
  }
  // a decaying factor times a uniformly bounded one
  if ((ea || sa) && g.sup_bound()) return scaled(a, *g.sup_bound());
  if ((eb || sb) && h.sup_bound()) return scaled(b, *h.sup_bound());
  return NoCertificate{};
}

TailCertificate translated_tail(const TailCertificate& cert, int shift) {
  if (auto* f = std::get_if<FiniteSupport>(&cert)) return FiniteSupport{f->radius + shift};
  if (auto* e = std::get_if<ExpDecay>(&cert))
    // |g^{-1}s| lies within |s| -+ |g|, so both bounds survive with shifted constants
    return ExpDecay{e->amplitude * std::pow(e->rate, -shift), e->rate, false,
                    e->lower_amplitude() * std::pow(e->rate, shift)};
  if (auto* b = std::get_if<BoundedBelow>(&cert)) return BoundedBelow{b->floor, b->radius + shift};
  if (auto* s = std::get_if<SphereSupSequence>(&cert)) {
    // |s'| ranges over [k - shift, k + shift] when |s| = k
    SphereSupSequence out;
    out.vanishing = s->vanishing;
    const int n = static_cast<int>(s->bounds.size());
    for (int k = 0; k + shift < n; ++k) {
      double m = 0;
      for (int j = std::max(0, k - shift); j <= k + shift; ++j) m = std::max(m, s->bounds[static_cast<std::size_t>(j)]);
      out.bounds.push_back(m);
    }
    return out;
  }
  return NoCertificate{};
}

int diameter_of(const std::vector<GroupElement>& set) {
  int d = 0;
  for (const auto& f : set) {
    GroupElement finv = inverse(f);
    for (const auto& g : set) d = std::max(d, word_length(compose(g, finv)));
  }
  return d;
}

}  // namespace

GroupFunction haagerup(const GroupModel& model, double n) {
  if (!(n > 0)) throw std::invalid_argument("haagerup parameter n must be positive");
  return GroupFunction::radial(
             model, [n](int k) { return cplx(std::exp(-k / n)); }, ExpDecay{1.0, std::exp(-1.0 / n), true},
             "haagerup(n=" + fmt(n) + ")")
      .with_sup_bound(1.0);
}

GroupFunction word_length_function(const GroupModel& model) {
  return GroupFunction::radial(model, [](int k) { return cplx(k); }, NoCertificate{}, "wordlength");
}

GroupFunction schoenberg(const GroupFunction& psi, double t, TailCertificate tail) {
  if (!(t > 0)) throw std::invalid_argument("schoenberg parameter t must be positive");
  std::string label = "schoenberg(" + psi.label() + ", t=" + fmt(t) + ")";
  if (psi.is_radial()) {
    GroupFunction p = psi;
    return GroupFunction::radial(psi.model(), [p, t](int k) { return std::exp(-t * p.profile(k)); }, std::move(tail),
                                 label);
  }
  GroupFunction p = psi;
  return GroupFunction(psi.model(), [p, t](const GroupElement& s) { return std::exp(-t * p(s)); }, std::move(tail),
                       label);
}

GroupFunction schoenberg_word_length(const GroupModel& model, double t) {
  return schoenberg(word_length_function(model), t, ExpDecay{1.0, std::exp(-t), true}).with_sup_bound(1.0);
}

GroupFunction folner(const GroupModel& model, std::vector<GroupElement> set) {
  if (set.empty()) throw std::invalid_argument("Folner set must be nonempty");
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  for (const auto& s : set)
    if (!(s.model == model)) throw ModelMismatch("Folner set element outside " + model.name());
  auto members = std::make_shared<ElementSet>(set.begin(), set.end());
  auto elements = std::make_shared<std::vector<GroupElement>>(set);
  const int diam = diameter_of(set);
  const double size = static_cast<double>(set.size());
  return GroupFunction(
             model,
             [members, elements, size](const GroupElement& s) {
               std::size_t hits = 0;
               for (const auto& f : *elements)
                 if (members->count(compose(s, f))) ++hits;
               return cplx(static_cast<double>(hits) / size);
             },
             FiniteSupport{diam}, "folner(|F|=" + std::to_string(set.size()) + ")")
      .with_sup_bound(1.0);
}

GroupFunction folner_box(const GroupModel& model, int side) {
  if (model.kind() != GroupKind::FreeAbelian) throw Unsupported("Folner boxes are defined for Z^n models");
  if (side < 1) throw std::invalid_argument("box side must be >= 1");
  const int n = model.parameter();
  std::vector<GroupElement> set;
  std::vector<int> coords(static_cast<std::size_t>(n), 0);
  while (true) {
    std::string letters;
    for (int g = 0; g < n; ++g) letters.append(static_cast<std::size_t>(coords[static_cast<std::size_t>(g)]), static_cast<char>(2 * g));
    set.push_back(from_letters(model, letters));
    int g = 0;
    while (g < n && ++coords[static_cast<std::size_t>(g)] == side) coords[static_cast<std::size_t>(g++)] = 0;
    if (g == n) break;
  }
  return folner(model, std::move(set)).with_label("folner(box=" + std::to_string(side) + ")");
}

GroupFunction folner_ball(const GroupModel& model, int radius) {
  Ball b(model, radius);
  std::vector<GroupElement> set(b.elements().begin(), b.elements().end());
  return folner(model, std::move(set)).with_label("folner(ball=" + std::to_string(radius) + ")");
}

GroupFunction delta_e(const GroupModel& model) {
  return GroupFunction::radial(model, [](int k) { return cplx(k == 0 ? 1.0 : 0.0); }, FiniteSupport{0}, "delta_e")
      .with_sup_bound(1.0);
}

GroupFunction constant(const GroupModel& model, cplx value) {
  const double mag = std::abs(value);
  TailCertificate tail = NoCertificate{};
  if (mag > 0) tail = BoundedBelow{mag, 0};
  else tail = FiniteSupport{0};
  return GroupFunction::radial(model, [value](int) { return value; }, tail, "constant(" + fmt(value.real()) + ")")
      .with_sup_bound(mag);
}

GroupFunction table_function(const GroupModel& model, const std::map<GroupElement, cplx>& values, TailCertificate tail,
                             std::string label) {
  auto table = std::make_shared<std::unordered_map<std::string, cplx>>();
  double sup = 0;
  for (const auto& [s, v] : values) {
    if (!(s.model == model)) throw ModelMismatch("table entry outside " + model.name());
    (*table)[s.word] = v;
    sup = std::max(sup, std::abs(v));
  }
  return GroupFunction(
             model,
             [table](const GroupElement& s) {
               auto it = table->find(s.word);
               return it == table->end() ? cplx{} : it->second;
             },
             std::move(tail), std::move(label))
      .with_sup_bound(sup);
}

GroupFunction product(const GroupFunction& h, const GroupFunction& g) {
  if (!(h.model() == g.model())) throw ModelMismatch("product of functions on different models");
  TailCertificate tail = product_tail(h, g);
  std::string label = "(" + h.label() + ")*(" + g.label() + ")";
  GroupFunction out = h.is_radial() && g.is_radial()
                          ? GroupFunction::radial(h.model(), [h, g](int k) { return h.profile(k) * g.profile(k); }, tail,
                                                  label)
                          : GroupFunction(h.model(), [h, g](const GroupElement& s) { return h(s) * g(s); }, tail, label);
  return out.with_sup_bound(product_bound(h.sup_bound(), g.sup_bound()));
}

GroupFunction real_part(const GroupFunction& h) {
  TailCertificate tail = h.tail();
  if (auto* ed = std::get_if<ExpDecay>(&tail)) {
    ed->tight = false;
    ed->floor = 0;
  }
  if (std::holds_alternative<BoundedBelow>(tail)) tail = NoCertificate{};
  std::string label = "re(" + h.label() + ")";
  GroupFunction out = h.is_radial()
                          ? GroupFunction::radial(h.model(), [h](int k) { return cplx(h.profile(k).real()); }, tail, label)
                          : GroupFunction(h.model(), [h](const GroupElement& s) { return cplx(h(s).real()); }, tail, label);
  return out.with_sup_bound(h.sup_bound());
}

GroupFunction power(const GroupFunction& h, int k) {
  if (k < 1) throw std::invalid_argument("power exponent must be >= 1");
  GroupFunction out = h;
  for (int i = 1; i < k; ++i) out = product(out, h);
  return out.with_label("(" + h.label() + ")^" + std::to_string(k));
}

GroupFunction translate_left(const GroupElement& g, const GroupFunction& h) {
  if (!(g.model == h.model())) throw ModelMismatch("translation by an element of another model");
  GroupElement ginv = inverse(g);
  return GroupFunction(h.model(), [h, ginv](const GroupElement& s) { return h(compose(ginv, s)); },
                       translated_tail(h.tail(), word_length(g)), to_string(g) + "." + h.label())
      .with_sup_bound(h.sup_bound());
}

GroupFunction translate_right(const GroupFunction& h, const GroupElement& g) {
  if (!(g.model == h.model())) throw ModelMismatch("translation by an element of another model");
  return GroupFunction(h.model(), [h, g](const GroupElement& s) { return h(compose(s, g)); },
                       translated_tail(h.tail(), word_length(g)), h.label() + "." + to_string(g))
      .with_sup_bound(h.sup_bound());
}

GroupFunction adjoint_convolve(const GroupFunction& f, std::size_t budget) {
  const auto* support = std::get_if<FiniteSupport>(&f.tail());
  if (!support) throw Unsupported("adjoint_convolve needs a finitely supported function, got " + describe(f.tail()));
  Ball b(f.model(), support->radius, budget);
  std::vector<std::pair<GroupElement, cplx>> atoms;
  for (const auto& u : b.elements()) {
    cplx v = f(u);
    if (v != cplx{}) atoms.emplace_back(u, v);
  }
  std::map<GroupElement, cplx> values;
  double at_identity = 0;
  for (const auto& [u, fu] : atoms) {
    GroupElement uinv = inverse(u);
    at_identity += std::norm(fu);
    for (const auto& [v, fv] : atoms) values[compose(uinv, v)] += std::conj(fu) * fv;
  }
  for (auto it = values.begin(); it != values.end();) it = it->second == cplx{} ? values.erase(it) : std::next(it);
  return table_function(f.model(), values, FiniteSupport{2 * support->radius}, "adjoint_convolve(" + f.label() + ")")
      .with_sup_bound(at_identity);
}

GroupFunction make_family(const GroupModel& model, std::string_view spec) {
  std::string s(spec);
  auto colon = s.find(':');
  std::string head = s.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : s.substr(colon + 1);
  std::map<std::string, std::string> kv;
  std::vector<std::string> positional;
  std::stringstream ss(args);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos)
      positional.push_back(item);
    else
      kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  auto number = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw InputError("function '" + s + "' needs parameter " + key);
    try {
      std::size_t used = 0;
      double v = std::stod(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw InputError("bad value for " + key + " in '" + s + "'");
    }
  };
  if (head == "haagerup") return haagerup(model, number("n"));
  if (head == "schoenberg") {
    if (positional.empty() || positional[0] != "wordlength")
      throw InputError("schoenberg currently takes psi = wordlength: '" + s + "'");
    return schoenberg_word_length(model, number("t"));
  }
  if (head == "folner") {
    if (kv.count("box")) return folner_box(model, static_cast<int>(number("box")));
    if (kv.count("ball")) return folner_ball(model, static_cast<int>(number("ball")));
    throw InputError("folner needs box=<side> or ball=<radius>: '" + s + "'");
  }
  if (head == "delta") return delta_e(model);
  if (head == "one") return constant(model, 1.0);
  if (head == "wordlength") return word_length_function(model);
  if (head == "neg-wordlength")
    return GroupFunction::radial(model, [](int k) { return cplx(-k); }, NoCertificate{}, "neg-wordlength");
  throw InputError("unknown function family '" + s + "'");
}

}  // namespace icw
