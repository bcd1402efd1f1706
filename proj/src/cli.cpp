#include "icw/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "icw/certificate.hpp"
#include "icw/coproduct.hpp"
#include "icw/errors.hpp"
#include "icw/families.hpp"
#include "icw/gns.hpp"
#include "icw/ideal.hpp"
#include "icw/norms.hpp"

namespace icw::cli {

namespace {

struct Params {
  std::string group;
  std::string function;
  std::string table;
  std::string ideal = "c0";
  std::string element = "gensum";
  std::string system;
  std::string op;
  std::string family;
  std::string thresholds;
  std::string action;
  std::string radii;
  std::string at;
  int radius = -1;
  int pad = -1;
  int gns_radius = 3;
  int conv_radius = 3;
  int trials = 100;
  int window = 10;
  double p = 2.0;
};

struct Outcome {
  ordered_json report;
  bool pass = true;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);) {
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError("bad number '" + s + "' in " + what);
  }
}

int parse_int(const std::string& s, const std::string& what) {
  double v = parse_double(s, what);
  if (std::floor(v) != v || std::abs(v) > 1e9) throw InputError("expected an integer, got '" + s + "' in " + what);
  return static_cast<int>(v);
}

ordered_json vec_json(const VectorXr& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(json_number(v(i)));
  return a;
}

ordered_json vec_json(const VectorXc& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(json_complex(v(i)));
  return a;
}

ordered_json to_json(const NormEstimate& e) {
  ordered_json j;
  j["method"] = e.method;
  j["radius"] = e.radius;
  j["value"] = json_number(e.value);
  j["bound_kind"] = to_string(e.kind);
  j["converged"] = e.converged;
  j["iterations"] = e.iterations;
  return j;
}

ordered_json to_json(const PsdVerdict& v, double tol) {
  ordered_json j;
  j["status"] = to_string(v.status);
  j["size"] = v.size;
  j["min_eigenvalue"] = json_number(v.min_eigenvalue);
  j["hermitian_defect"] = json_number(v.hermitian_defect);
  j["scale"] = json_number(v.scale);
  j["threshold"] = json_number(-tol * v.scale);
  return j;
}

ordered_json to_json(const MembershipVerdict& m) {
  ordered_json j;
  j["verdict"] = to_string(m.verdict);
  j["witness"] = m.witness;
  return j;
}

ordered_json words(std::span<const GroupElement> elements) {
  ordered_json a = ordered_json::array();
  for (const auto& s : elements) a.push_back(to_string(s));
  return a;
}

ordered_json header(const RunConfig& cfg) {
  ordered_json j;
  j["schema"] = 1;
  j["command"] = cfg.command;
  j["tolerances"] = {{"psd_tol", cfg.psd_tol}, {"eig_tol", cfg.eig_tol}, {"gap_tol", cfg.gap_tol}};
  j["budget"] = cfg.budget;
  j["seed"] = cfg.seed;
  return j;
}

std::optional<GroupModel> group_option(const Params& p) {
  if (p.group.empty()) return std::nullopt;
  return GroupModel::parse(p.group);
}

GroupModel require_group(const Params& p) {
  auto m = group_option(p);
  if (!m) throw InputError("--group is required");
  return *m;
}

/// --table or --function (falling back to `fallback` when neither is given).
GroupFunction load_function(const Params& p, const RunConfig& cfg, const std::string& fallback = {}) {
  if (!p.table.empty() && !p.function.empty()) throw InputError("give either --function or --table, not both");
  if (!p.table.empty()) {
    GroupFunction h = table_from_json(load_json_file(p.table), p.table);
    if (auto m = group_option(p); m && !(*m == h.model()))
      throw ModelMismatch("--group " + m->name() + " disagrees with table group " + h.model().name());
    return h;
  }
  const std::string spec = p.function.empty() ? fallback : p.function;
  if (spec.empty()) throw InputError("--function or --table is required");
  return resolve_function(require_group(p), spec, cfg.seed);
}

int radius_or(const Params& p, int fallback) { return p.radius < 0 ? fallback : p.radius; }

std::vector<double> parse_thresholds(const std::string& text, std::size_t count) {
  if (text.empty()) return default_thresholds(count);
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_double(item, "--thresholds"));
  return out;
}

// commands

Outcome cmd_pd_check(const Params& p, const RunConfig& cfg) {
  GroupFunction h = load_function(p, cfg);
  const int r = radius_or(p, 3);
  Ball b(h.model(), r, cfg.budget);
  PsdVerdict v = pd_window_check(h, b.elements(), cfg.psd_tol);
  Outcome o{header(cfg)};
  o.report["group"] = h.model().name();
  o.report["function"] = h.label();
  o.report["radius"] = r;
  o.report["window_size"] = b.size();
  o.report["verdict"] = to_json(v, cfg.psd_tol);
  o.pass = v.pass();
  o.report["pass"] = o.pass;
  return o;
}

Outcome cmd_cnd_check(const Params& p, const RunConfig& cfg) {
  GroupFunction psi = load_function(p, cfg, "wordlength");
  const int r = radius_or(p, 3);
  Ball b(psi.model(), r, cfg.budget);
  CndVerdict v = cnd_window_check(psi, b.elements(), cfg.psd_tol);
  Outcome o{header(cfg)};
  o.report["group"] = psi.model().name();
  o.report["function"] = psi.label();
  o.report["radius"] = r;
  o.report["window_size"] = b.size();
  o.report["status"] = to_string(v.status);
  o.report["max_violation"] = json_number(v.max_violation);
  o.report["scale"] = json_number(v.scale);
  o.report["threshold"] = json_number(cfg.psd_tol * v.scale);
  if (!v.precondition.empty()) o.report["precondition"] = v.precondition;
  o.pass = v.pass();
  o.report["pass"] = o.pass;
  return o;
}

Outcome cmd_ideal(const Params& p, const RunConfig& cfg) {
  GroupFunction h = load_function(p, cfg);
  IdealSpec ideal = IdealSpec::parse(p.ideal);
  MembershipVerdict m = ideal_membership(h, ideal, cfg.budget);
  Outcome o{header(cfg)};
  o.report["group"] = h.model().name();
  o.report["function"] = h.label();
  o.report["certificate"] = icw::to_json(h.tail());
  o.report["ideal"] = ideal.name();
  o.report["membership"] = to_json(m);
  o.pass = m.member();
  o.report["pass"] = o.pass;
  return o;
}

Outcome cmd_lp_norm(const Params& p, const RunConfig& cfg) {
  GroupFunction h = load_function(p, cfg);
  const int r = radius_or(p, 20);
  LpNorm n = lp_norm(h, p.p, r, cfg.budget);
  Outcome o{header(cfg)};
  o.report["group"] = h.model().name();
  o.report["function"] = h.label();
  o.report["p"] = p.p;
  o.report["radius"] = r;
  o.report["partial"] = json_number(n.partial);
  o.report["tail_bound"] = json_number(n.tail_bound);
  o.report["total"] = json_number(n.total());
  o.report["status"] = to_string(n.status);
  o.report["witness"] = n.witness;
  o.pass = n.status == SeriesStatus::Finite;
  o.report["pass"] = o.pass;
  return o;
}

Outcome cmd_gns(const Params& p, const RunConfig& cfg) {
  GroupFunction h = load_function(p, cfg);
  const int r = radius_or(p, 3);
  const int pad = p.pad < 0 ? r : p.pad;
  Outcome o{header(cfg)};
  o.report["group"] = h.model().name();
  o.report["function"] = h.label();
  o.report["radius"] = r;
  o.report["pad"] = pad;
  try {
    GnsWindow w(h, r, pad, cfg.psd_tol, cfg.budget);
    const Ball& b = w.ball();
    const GroupElement e = identity(h.model());
    const VectorXc de = w.delta(e);

    // <pi_g delta_e, delta_e> = h(g)
    double recovery = 0;
    for (const auto& g : b.elements()) recovery = std::max(recovery, std::abs(w.coefficient(g, de, de) - h(g)));

    // <pi_s delta_{g1}, delta_{g2}> = h(g2^{-1} s g1) and
    // <pi_{g1} pi_{g2} delta_e, delta_t> = <pi_{g1 g2} delta_e, delta_t>
    const Ball unit(h.model(), std::min(1, r), cfg.budget);
    const std::span<const GroupElement> near = unit.elements();
    double translate = 0;
    for (const auto& s : b.elements())
      for (const auto& g1 : near)
        for (const auto& g2 : near)
          translate = std::max(translate, std::abs(w.coefficient(s, w.delta(g1), w.delta(g2)) -
                                                   h(compose(inverse(g2), compose(s, g1)))));
    double multiplicativity = 0;
    for (const auto& g1 : near)
      for (const auto& g2 : near) {
        VectorXc lhs = w.coefficient_matrix(g1) * (w.compressed(g2) * de);
        VectorXc rhs = w.coefficient_matrix(compose(g1, g2)) * de;
        multiplicativity = std::max(multiplicativity, (lhs - rhs).cwiseAbs().maxCoeff());
      }
    const double scale = 1.0 + std::abs(h(e));
    o.report["window_size"] = b.size();
    o.report["padded_size"] = w.padded().size();
    o.report["padded_verdict"] = to_json(w.padded_verdict(), cfg.psd_tol);
    o.report["rank"] = w.rank();
    o.report["coefficient_recovery_defect"] = json_number(recovery);
    o.report["cyclic_translate_defect"] = json_number(translate);
    o.report["multiplicativity_defect"] = json_number(multiplicativity);
    o.pass = recovery <= 1e-12 * scale && translate <= 1e-12 * scale && multiplicativity <= 1e-8 * scale;
    if (!p.element.empty() && p.element != "none") {
      GroupRingElement x = resolve_element(h.model(), p.element);
      o.report["element"] = to_string(x);
      o.report["norm"] = to_json(gns_norm_lower(h, x, r, cfg.psd_tol, cfg.budget));
    }
  } catch (const NotPositiveDefinite& e) {
    o.report["error"] = e.what();
    o.report["min_eigenvalue"] = json_number(e.min_eigenvalue);
    o.pass = false;
  }
  o.report["pass"] = o.pass;
  return o;
}

Outcome cmd_norm_gap(const Params& p, const RunConfig& cfg) {
  GroupModel model = require_group(p);
  GroupRingElement x = resolve_element(model, p.element);
  IdealSpec ideal = IdealSpec::parse(p.ideal);
  GapConfig gc;
  gc.gap_tol = cfg.gap_tol;
  gc.reduced_radius = radius_or(p, 8);
  gc.gns_radius = p.gns_radius;
  gc.psd_tol = cfg.psd_tol;
  gc.budget = cfg.budget;
  gc.power.rel_tol = cfg.eig_tol;
  gc.power.seed = cfg.seed;
  std::vector<GroupFunction> family;
  if (!p.family.empty())
    for (const auto& spec : expand_family(p.family)) family.push_back(resolve_function(model, spec, cfg.seed));
  NormGapReport r = norm_gap_report(x, ideal, gc, family);

  Outcome o{header(cfg)};
  o.report["group"] = r.model;
  o.report["element"] = r.element;
  o.report["ideal"] = r.ideal.name();
  o.report["reduced_radius"] = gc.reduced_radius;
  o.report["gns_radius"] = gc.gns_radius;
  o.report["exact_tol"] = gc.exact_tol;
  o.report["trivial"] = to_json(r.trivial);
  o.report["reduced_lower"] = to_json(r.reduced_lower);
  o.report["reduced_upper"] = to_json(r.reduced_upper);
  ordered_json fam = ordered_json::array();
  for (const auto& f : r.family) {
    ordered_json j;
    j["function"] = f.label;
    j["membership"] = to_json(f.membership);
    if (f.estimate) j["estimate"] = to_json(*f.estimate);
    if (!f.skipped.empty()) j["skipped"] = f.skipped;
    fam.push_back(j);
  }
  o.report["family"] = fam;
  if (r.best_gns) o.report["best_gns"] = to_json(*r.best_gns);
  o.report["verdict"] = r.verdict;
  o.report["gap"] = r.gap;
  o.report["d_exceeds_reduced"] = r.d_exceeds_reduced;
  if (!p.radii.empty()) {
    ordered_json table = ordered_json::array();
    for (const auto& item : split(p.radii, ',')) {
      const int radius = parse_int(item, "--radii");
      NormEstimate e = reduced_norm_lower(x, radius, cfg.budget, gc.power);
      ordered_json row;
      row["radius"] = radius;
      row["reduced_lower"] = json_number(e.value);
      row["iterations"] = e.iterations;
      row["converged"] = e.converged;
      row["reduced_upper"] = json_number(r.reduced_upper.value);
      row["trivial"] = json_number(r.trivial.value);
      table.push_back(row);
    }
    o.report["table"] = table;
  }
  o.pass = r.verdict != "undecided";
  o.report["pass"] = o.pass;
  return o;
}

Outcome cmd_certificate(const Params& p, const RunConfig& cfg) {
  if (p.family.empty()) throw InputError("--family is required");
  IdealSpec ideal = IdealSpec::parse(p.ideal);
  const auto specs = expand_family(p.family);
  const auto thresholds = parse_thresholds(p.thresholds, specs.size());
  Outcome o{header(cfg)};

  if (!p.system.empty()) {
    auto system = std::make_shared<const FiniteSystem>(system_from_json(load_json_file(p.system), p.system));
    if (auto m = group_option(p); m && !(*m == system->model()))
      throw ModelMismatch("--group " + m->name() + " disagrees with system group " + system->model().name());
    ActionKind kind;
    if (p.action.empty())
      kind = ideal.kind == IdealSpec::Kind::CC ? ActionKind::Amenable : ActionKind::ATmenable;
    else if (p.action == "amenable")
      kind = ActionKind::Amenable;
    else if (p.action == "atmenable")
      kind = ActionKind::ATmenable;
    else
      throw InputError("--action must be amenable or atmenable");
    std::vector<GroupoidFunction> family;
    for (const auto& spec : specs) family.push_back(lift(system, resolve_function(system->model(), spec, cfg.seed)));
    ActionCertificate c = action_certificate(kind, family, p.conv_radius, thresholds, cfg.psd_tol, cfg.budget);
    o.report["group"] = system->model().name();
    o.report["system_points"] = system->points();
    o.report["action_kind"] = to_string(c.kind);
    o.report["conv_radius"] = c.conv_radius;
    ordered_json checks = ordered_json::array();
    for (const auto& ch : c.checks) {
      ordered_json j;
      j["function"] = ch.label;
      j["pd_pass"] = ch.pd.pass;
      j["membership"] = to_json(ch.membership);
      j["deviation"] = json_number(ch.deviation);
      j["threshold"] = json_number(ch.threshold);
      j["failures"] = ch.failures;
      checks.push_back(j);
    }
    o.report["checks"] = checks;
    o.report["failures"] = c.failures;
    o.report["accepted"] = c.accepted;
    o.pass = c.accepted;
  } else {
    GroupModel model = require_group(p);
    std::vector<GroupFunction> family;
    for (const auto& spec : specs) family.push_back(resolve_function(model, spec, cfg.seed));
    EqualityCertificate c = equality_certificate(ideal, family, p.conv_radius, thresholds, cfg.psd_tol, cfg.budget);
    o.report["group"] = model.name();
    o.report["ideal"] = c.ideal.name();
    o.report["conv_radius"] = c.conv_radius;
    ordered_json checks = ordered_json::array();
    for (const auto& ch : c.checks) {
      ordered_json j;
      j["function"] = ch.label;
      j["pd"] = to_json(ch.pd, cfg.psd_tol);
      j["membership"] = to_json(ch.membership);
      j["deviation"] = json_number(ch.deviation);
      j["threshold"] = json_number(ch.threshold);
      j["failures"] = ch.failures;
      checks.push_back(j);
    }
    o.report["checks"] = checks;
    o.report["failures"] = c.failures;
    o.report["accepted"] = c.accepted;
    if (c.accepted) o.report["witness"] = c.witness;
    o.pass = c.accepted;
  }
  o.report["pass"] = o.pass;
  return o;
}

Outcome cmd_coproduct(const Params& p, const RunConfig& cfg) {
  GroupModel model = require_group(p);
  const int r = radius_or(p, 1);
  CoproductReport c = coproduct_checks(model, r, p.trials, cfg.seed, cfg.budget);
  Outcome o{header(cfg)};
  o.report["group"] = c.model;
  o.report["radius"] = c.radius;
  o.report["trials"] = c.trials;
  o.report["max_coassociativity_defect"] = json_number(c.max_coassociativity_defect);
  o.report["density_rank"] = c.rank;
  o.report["target_rank"] = c.target_rank;
  o.pass = c.pass();
  o.report["pass"] = o.pass;
  return o;
}

Outcome cmd_growth(const Params& p, const RunConfig& cfg) {
  GroupModel model = require_group(p);
  if (p.window < 1) throw InputError("--window must be >= 1");
  GrowthReport g = growth_check(model, p.window);
  Outcome o{header(cfg)};
  o.report["group"] = model.name();
  o.report["window"] = p.window;
  o.report["constant"] = json_number(g.constant);
  o.report["attained_at"] = g.attained_at;
  o.report["growth_rate"] = json_number(model.growth_rate());
  ordered_json table = ordered_json::array();
  for (std::size_t k = 0; k < g.sphere_counts.size(); ++k)
  {
    const double c = g.sphere_counts[k];
    // exact integers while they fit a double mantissa
    ordered_json count = c < 9e15 ? ordered_json(static_cast<std::uint64_t>(c)) : json_number(c);
    table.push_back({{"k", k + 1}, {"sphere_count", count}});
  }
  o.report["table"] = table;
  o.report["pass"] = true;
  return o;
}

ordered_json envelopes_json(const Envelopes& env) {
  ordered_json j;
  j["mode"] = env.mode;
  if (env.radius >= 0) j["radius"] = env.radius;
  j["upper"] = vec_json(env.upper);
  j["lower"] = vec_json(env.lower);
  j["argmax"] = words(env.argmax);
  j["argmin"] = words(env.argmin);
  j["integral_upper"] = json_number(env.integral_upper);
  j["integral_lower"] = json_number(env.integral_lower);
  if (env.mode == "ball") {
    j["last_change"] = env.last_change;
    j["stabilized"] = env.stabilized;
  }
  return j;
}

ordered_json gap_json(const SpectralGap& g) {
  return {{"lambda_min", json_number(g.lambda_min)}, {"vector", vec_json(g.vector)}, {"fixed", g.fixed}};
}

Outcome dn_outcome(const FiniteSystem& system, Outcome o) {
  DnReport d = dn_report(system);
  o.report["envelopes"] = envelopes_json(d.env);
  o.report["upper_integrable"] = d.upper_integrable;
  o.report["lower_positive"] = d.lower_positive;
  o.report["caveat"] = d.caveat;
  o.report["spectral_gap"] = gap_json(d.gap);
  ordered_json cands = ordered_json::array();
  for (const auto& c : d.candidates)
    cands.push_back({{"name", c.name}, {"vector", vec_json(c.vector)}, {"residual", json_number(c.residual)}, {"fixed", c.fixed}});
  o.report["candidates"] = cands;
  o.report["fixed_vector"] = d.fixed_vector_exists;
  o.pass = d.fixed_vector_exists;
  o.report["pass"] = o.pass;
  return o;
}

FiniteSystem load_system(const Params& p) {
  if (p.system.empty()) throw InputError("--system is required");
  FiniteSystem system = system_from_json(load_json_file(p.system), p.system);
  if (auto m = group_option(p); m && !(*m == system.model()))
    throw ModelMismatch("--group " + m->name() + " disagrees with system group " + system.model().name());
  return system;
}

Outcome cmd_dynamics(const Params& p, const RunConfig& cfg) {
  FiniteSystem system = load_system(p);
  Outcome o{header(cfg)};
  o.report["group"] = system.model().name();
  o.report["points"] = system.points();
  o.report["op"] = p.op;
  constexpr double kExact = 1e-12;
  if (p.op == "dn-report") return dn_outcome(system, std::move(o));
  if (p.op == "radon-nikodym") {
    if (p.at.empty()) throw InputError("--at <element> is required for radon-nikodym");
    GroupElement s = parse_element(system.model(), p.at);
    VectorXr rho = radon_nikodym(system, s);
    double defect = defining_identity_defect(system, s);
    o.report["element"] = to_string(s);
    o.report["rho"] = vec_json(rho);
    o.report["defining_identity_defect"] = json_number(defect);
    o.pass = defect <= kExact;
  } else if (p.op == "covariant") {
    CovariantRep rep(system);
    VectorXc f(system.points());
    for (int x = 0; x < system.points(); ++x) f(x) = cplx(x + 1, 0.5 * x);
    ordered_json gens = ordered_json::array();
    double worst = 0;
    for (int g = 0; g < system.model().generator_count(); ++g) {
      const GroupElement s = generator(system.model(), g);
      double u = rep.unitarity_defect(rep.generator(g));
      double c = rep.covariance_defect(s, f);
      worst = std::max({worst, u, c});
      ordered_json rows = ordered_json::array();
      for (Eigen::Index i = 0; i < rep.generator(g).rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index j = 0; j < rep.generator(g).cols(); ++j) row.push_back(json_number(rep.generator(g)(i, j)));
        rows.push_back(row);
      }
      gens.push_back({{"generator", to_string(s)}, {"matrix", rows}, {"unitarity_defect", json_number(u)},
                      {"covariance_defect", json_number(c)}});
    }
    o.report["generators"] = gens;
    o.pass = worst <= kExact;
  } else if (p.op == "envelopes") {
    std::optional<int> r;
    if (p.radius >= 0) r = p.radius;
    Envelopes env = envelopes(system, r, cfg.budget);
    o.report["envelopes"] = envelopes_json(env);
    o.pass = env.stabilized;
  } else if (p.op == "spectral-gap") {
    SpectralGap g = spectral_gap(CovariantRep(system));
    o.report["spectral_gap"] = gap_json(g);
    o.pass = g.fixed;
  } else {
    throw InputError("--op must be one of radon-nikodym, covariant, envelopes, spectral-gap, dn-report");
  }
  o.report["pass"] = o.pass;
  return o;
}

Outcome cmd_dn_report(const Params& p, const RunConfig& cfg) {
  FiniteSystem system = load_system(p);
  Outcome o{header(cfg)};
  o.report["group"] = system.model().name();
  o.report["points"] = system.points();
  return dn_outcome(system, std::move(o));
}

std::string csv_field(const ordered_json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return s;
}

void flatten(const ordered_json& v, const std::string& path, std::vector<std::pair<std::string, ordered_json>>& out) {
  if (v.is_object()) {
    for (const auto& [k, child] : v.items()) flatten(child, path.empty() ? k : path + "." + k, out);
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], path + "[" + std::to_string(i) + "]", out);
  } else {
    out.emplace_back(path, v);
  }
}

}  // namespace

std::size_t default_budget() {
  const char* env = std::getenv("ICW_ELEMENT_BUDGET");
  if (!env || !*env) return 2'000'000;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0' || v < 1 || env[0] == '-')
    throw InputError(std::string("ICW_ELEMENT_BUDGET must be a positive integer, got '") + env + "'");
  return static_cast<std::size_t>(v);
}

GroupFunction resolve_function(const GroupModel& model, const std::string& spec, std::uint64_t seed) {
  if (spec.find('*') != std::string::npos) {
    auto factors = split(spec, '*');
    if (factors.empty()) throw InputError("empty function product '" + spec + "'");
    GroupFunction h = resolve_function(model, factors[0], seed);
    for (std::size_t i = 1; i < factors.size(); ++i) h = product(h, resolve_function(model, factors[i], seed));
    return h;
  }
  if (spec.rfind("random_pd", 0) == 0) {
    int dim = 2;
    std::uint64_t s = seed;
    auto colon = spec.find(':');
    if (colon != std::string::npos)
      for (const auto& item : split(spec.substr(colon + 1), ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw InputError("bad parameter '" + item + "' in '" + spec + "'");
        const std::string key = item.substr(0, eq), val = item.substr(eq + 1);
        if (key == "dim")
          dim = parse_int(val, spec);
        else if (key == "seed")
          s = static_cast<std::uint64_t>(parse_int(val, spec));
        else
          throw InputError("unknown parameter '" + key + "' in '" + spec + "'");
      }
    if (dim < 1) throw InputError("random_pd needs dim >= 1");
    return random_pd(model, dim, s);
  }
  if (spec.rfind("real_part(", 0) == 0 && spec.back() == ')')
    return real_part(resolve_function(model, spec.substr(10, spec.size() - 11), seed));
  return make_family(model, spec);
}

GroupRingElement resolve_element(const GroupModel& model, const std::string& text) {
  if (text == "gensum") return gensum(model);
  return parse_group_ring(model, text);
}

std::vector<std::string> expand_family(const std::string& spec) {
  std::vector<std::string> out;
  for (const auto& item : split(spec, ';')) {
    auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(item);
      continue;
    }
    auto eq = item.rfind('=', dots);
    if (eq == std::string::npos) throw InputError("range needs key=a..b: '" + item + "'");
    std::string tail = item.substr(dots + 2);
    auto stop = tail.find(',');
    std::string rest = stop == std::string::npos ? "" : tail.substr(stop);
    int lo = parse_int(item.substr(eq + 1, dots - eq - 1), item);
    int hi = parse_int(tail.substr(0, stop), item);
    if (hi < lo) throw InputError("empty range in '" + item + "'");
    for (int v = lo; v <= hi; ++v) out.push_back(item.substr(0, eq + 1) + std::to_string(v) + rest);
  }
  if (out.empty()) throw InputError("empty family '" + spec + "'");
  return out;
}

std::string to_csv(const ordered_json& report) {
  std::ostringstream os;
  if (auto it = report.find("table"); it != report.end() && it->is_array() && !it->empty()) {
    bool first = true;
    for (const auto& [k, v] : (*it)[0].items()) {
      os << (first ? "" : ",") << k;
      first = false;
    }
    os << "\n";
    for (const auto& row : *it) {
      first = true;
      for (const auto& [k, v] : row.items()) {
        os << (first ? "" : ",") << csv_field(v);
        first = false;
      }
      os << "\n";
    }
    return os.str();
  }
  std::vector<std::pair<std::string, ordered_json>> flat;
  flatten(report, "", flat);
  os << "key,value\n";
  for (const auto& [k, v] : flat) os << csv_field(k) << "," << csv_field(v) << "\n";
  return os.str();
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  Params p;
  CLI::App app{"icw: group completions, positive definite functions and groupoid dynamics"};
  app.require_subcommand(1);

  try {
    cfg.budget = default_budget();
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  using Handler = std::function<Outcome(const Params&, const RunConfig&)>;
  std::vector<std::pair<CLI::App*, Handler>> commands;

  auto add = [&](const std::string& name, const std::string& help, Handler handler) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--psd-tol", cfg.psd_tol, "PSD tolerance (relative)")->check(CLI::PositiveNumber);
    sub->add_option("--eig-tol", cfg.eig_tol, "eigenvalue iteration tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--gap-tol", cfg.gap_tol, "gap declaration tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--budget", cfg.budget, "element budget")->check(CLI::Range(std::size_t{1}, std::size_t(-1)));
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--format", cfg.format, "report format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("-o,--output", cfg.output, "write the report to this file");
    sub->add_option("--group", p.group, "group model: F2, F3, Z, Z2, ZmodN:5, Dinf");
    commands.emplace_back(sub, std::move(handler));
    return sub;
  };
  auto function_opts = [&](CLI::App* sub) {
    sub->add_option("--function", p.function, "function spec, e.g. haagerup:n=2");
    sub->add_option("--table", p.table, "JSON function table");
  };

  auto* pd = add("pd-check", "positive definiteness on ball(R)", cmd_pd_check);
  function_opts(pd);
  pd->add_option("--radius", p.radius, "window radius (default 3)");

  auto* cnd = add("cnd-check", "conditionally negative type on ball(R)", cmd_cnd_check);
  function_opts(cnd);
  cnd->add_option("--radius", p.radius, "window radius (default 3)");

  auto* id = add("ideal", "ideal membership from the tail certificate", cmd_ideal);
  function_opts(id);
  id->add_option("--ideal", p.ideal, "cc, c0, lp:<p>, linf, l2plus, t");

  auto* lp = add("lp-norm", "l^p mass with certified tail", cmd_lp_norm);
  function_opts(lp);
  lp->add_option("--p", p.p, "exponent >= 1")->check(CLI::Range(1.0, 1e300));
  lp->add_option("--radius", p.radius, "exact partial sum radius (default 20)");

  auto* gns = add("gns", "truncated GNS construction", cmd_gns);
  function_opts(gns);
  gns->add_option("--radius", p.radius, "window radius (default 3)");
  gns->add_option("--pad", p.pad, "padding radius (default: radius)");
  gns->add_option("--element", p.element, "group ring element for a norm estimate, or none");

  auto* ng = add("norm-gap", "full vs reduced vs D norms", cmd_norm_gap);
  ng->add_option("--element", p.element, "gensum or a group ring expression");
  ng->add_option("--ideal", p.ideal, "ideal D");
  ng->add_option("--radius", p.radius, "reduced window radius (default 8)");
  ng->add_option("--gns-radius", p.gns_radius, "GNS window radius");
  ng->add_option("--family", p.family, "D-member function specs, ';'-separated");
  ng->add_option("--radii", p.radii, "comma list of radii for a reduced-norm sweep table");

  auto* cert = add("certificate", "equality certificate for a family", cmd_certificate);
  cert->add_option("--ideal", p.ideal, "ideal D");
  cert->add_option("--family", p.family, "family, e.g. haagerup:n=1..10");
  cert->add_option("--conv-radius", p.conv_radius, "pointwise convergence radius");
  cert->add_option("--thresholds", p.thresholds, "comma list, strictly decreasing");
  cert->add_option("--system", p.system, "lift the family to this system (action certificate)");
  cert->add_option("--action", p.action, "amenable or atmenable");

  auto* cop = add("coproduct", "co-associativity and density checks", cmd_coproduct);
  cop->add_option("--radius", p.radius, "ball radius (default 1)");
  cop->add_option("--trials", p.trials, "random elements")->check(CLI::PositiveNumber);

  auto* gr = add("growth", "sphere growth on a window", cmd_growth);
  gr->add_option("--window", p.window, "largest sphere index");

  auto* dyn = add("dynamics", "finite transformation groupoid analysis", cmd_dynamics);
  dyn->add_option("--system", p.system, "system JSON")->required();
  dyn->add_option("--op", p.op, "radon-nikodym, covariant, envelopes, spectral-gap, dn-report")->required();
  dyn->add_option("--at", p.at, "group element for radon-nikodym");
  dyn->add_option("--radius", p.radius, "envelope ball radius (default: whole orbit)");

  auto* dn = add("dn-report", "invariant vector analysis of a system", cmd_dn_report);
  dn->add_option("--system", p.system, "system JSON")->required();

  if (!args.empty() && !args[0].empty() && args[0][0] != '-' && !app.get_subcommand_no_throw(args[0])) {
    err << "error: unknown command '" << args[0] << "'; expected one of:";
    for (const auto& [sub, h] : commands) err << " " << sub->get_name();
    err << "\n";
    return kExitUsage;
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitPass;
    }
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  const Handler* handler = nullptr;
  for (const auto& [sub, h] : commands)
    if (sub->parsed()) {
      cfg.command = sub->get_name();
      handler = &h;
    }
  if (!handler) {
    err << "error: no command given\n";
    return kExitUsage;
  }

  try {
    Outcome o = (*handler)(p, cfg);
    std::string text = cfg.format == "csv" ? to_csv(o.report) : o.report.dump(2) + "\n";
    if (cfg.output.empty()) {
      out << text;
    } else {
      std::ofstream f(cfg.output, std::ios::binary);
      if (!f) throw InputError("cannot write " + cfg.output);
      f << text;
    }
    return o.pass ? kExitPass : kExitFail;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConsistencyError& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const NotPositiveDefinite& e) {
    err << "error: " << e.what() << "\n";
    return kExitFail;
  } catch (const std::invalid_argument& e) {  // InputError, ModelMismatch, InvalidHomomorphism
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Unsupported& e) {
    err << "error: unsupported: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CertificateViolation& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

int dispatch(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace icw::cli
