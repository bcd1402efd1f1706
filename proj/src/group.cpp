#include "icw/group.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "icw/errors.hpp"

namespace icw {

namespace {

constexpr std::string_view kFreeNames = "abcdfghijklmnopqrstuvwxyz";  // 'e' is the identity

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

int parse_positive(std::string_view digits, std::string_view whole) {
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(c); }))
    throw InputError("unknown group model '" + std::string(whole) + "'");
  int v = std::stoi(std::string(digits));
  if (v < 1) throw InputError("group parameter must be >= 1 in '" + std::string(whole) + "'");
  return v;
}

}  // namespace

GroupModel GroupModel::free(int rank) {
  if (rank < 1 || rank > static_cast<int>(kFreeNames.size())) throw std::invalid_argument("free group rank out of range");
  return {GroupKind::Free, rank};
}

GroupModel GroupModel::free_abelian(int rank) {
  if (rank < 1 || rank > static_cast<int>(kFreeNames.size())) throw std::invalid_argument("free abelian rank out of range");
  return {GroupKind::FreeAbelian, rank};
}

GroupModel GroupModel::cyclic(int order) {
  if (order < 1) throw std::invalid_argument("cyclic order must be >= 1");
  return {GroupKind::FiniteCyclic, order};
}

GroupModel GroupModel::infinite_dihedral() { return {GroupKind::InfiniteDihedral, 2}; }

GroupModel GroupModel::parse(std::string_view name) {
  if (name == "Dinf") return infinite_dihedral();
  if (name.starts_with("ZmodN:")) return cyclic(parse_positive(name.substr(6), name));
  if (name == "Z") return free_abelian(1);
  if (name.starts_with("Z")) return free_abelian(parse_positive(name.substr(1), name));
  if (name.starts_with("F")) return free(parse_positive(name.substr(1), name));
  throw InputError("unknown group model '" + std::string(name) + "'");
}

std::string GroupModel::name() const {
  switch (kind_) {
    case GroupKind::Free:
      return "F" + std::to_string(param_);
    case GroupKind::FreeAbelian:
      return param_ == 1 ? "Z" : "Z" + std::to_string(param_);
    case GroupKind::FiniteCyclic:
      return "ZmodN:" + std::to_string(param_);
    case GroupKind::InfiniteDihedral:
      return "Dinf";
  }
  return {};
}

int GroupModel::generator_count() const {
  if (kind_ == GroupKind::FiniteCyclic) return param_ == 1 ? 0 : 1;
  return param_;
}

bool GroupModel::involutive(int g) const {
  return kind_ == GroupKind::InfiniteDihedral || (kind_ == GroupKind::FiniteCyclic && param_ == 2 && g == 0);
}

Letter GroupModel::inverse(Letter l) const {
  int g = l / 2;
  return involutive(g) ? static_cast<Letter>(2 * g) : static_cast<Letter>(l ^ 1);
}

std::vector<Letter> GroupModel::generating_set() const {
  std::vector<Letter> s;
  for (int g = 0; g < generator_count(); ++g) {
    s.push_back(static_cast<Letter>(2 * g));
    if (!involutive(g)) s.push_back(static_cast<Letter>(2 * g + 1));
  }
  return s;
}

std::string GroupModel::generator_name(int g) const {
  if (kind_ == GroupKind::InfiniteDihedral) return g == 0 ? "s" : "t";
  return std::string(1, kFreeNames[static_cast<std::size_t>(g)]);
}

std::string GroupModel::letter_name(Letter l) const {
  int g = l / 2;
  bool inv = (l & 1) && !involutive(g);
  return generator_name(g) + (inv ? "^-1" : "");
}

std::optional<int> GroupModel::generator_index(std::string_view name) const {
  for (int g = 0; g < generator_count(); ++g)
    if (generator_name(g) == name) return g;
  return std::nullopt;
}

std::optional<int> GroupModel::diameter() const {
  if (kind_ != GroupKind::FiniteCyclic) return std::nullopt;
  return param_ / 2;
}

std::vector<std::string> GroupModel::relators() const {
  std::vector<std::string> rel;
  switch (kind_) {
    case GroupKind::Free:
      break;
    case GroupKind::FreeAbelian:
      for (int i = 0; i < param_; ++i)
        for (int j = i + 1; j < param_; ++j) {
          std::string w;
          w += static_cast<char>(2 * i);
          w += static_cast<char>(2 * j);
          w += static_cast<char>(2 * i + 1);
          w += static_cast<char>(2 * j + 1);
          rel.push_back(w);
        }
      break;
    case GroupKind::FiniteCyclic:
      if (param_ >= 2) rel.emplace_back(static_cast<std::size_t>(param_), static_cast<char>(0));
      break;
    case GroupKind::InfiniteDihedral:
      rel.emplace_back(2, static_cast<char>(0));
      rel.emplace_back(2, static_cast<char>(2));
      break;
  }
  return rel;
}

double GroupModel::sphere_count(int k) const {
  if (k < 0) return 0.0;
  if (k == 0) return 1.0;
  switch (kind_) {
    case GroupKind::Free:
      return 2.0 * param_ * std::pow(2.0 * param_ - 1.0, k - 1);
    case GroupKind::FreeAbelian: {
      double total = 0;
      for (int i = 1; i <= std::min(param_, k); ++i)
        total += std::ldexp(1.0, i) * binomial(param_, i) * binomial(k - 1, i - 1);
      return total;
    }
    case GroupKind::FiniteCyclic:
      if (param_ == 1) return 0.0;
      if (2 * k < param_) return 2.0;
      return 2 * k == param_ ? 1.0 : 0.0;
    case GroupKind::InfiniteDihedral:
      return 2.0;
  }
  return 0.0;
}

double GroupModel::ball_count(int radius) const {
  double total = 0;
  int top = radius;
  if (auto d = diameter()) top = std::min(top, *d);
  for (int k = 0; k <= top; ++k) {
    total += sphere_count(k);
    if (!std::isfinite(total)) return std::numeric_limits<double>::infinity();
  }
  return total;
}

double GroupModel::growth_rate() const {
  switch (kind_) {
    case GroupKind::Free:
      return 2.0 * param_ - 1.0;
    case GroupKind::FreeAbelian:
    case GroupKind::InfiniteDihedral:
      return 1.0;
    case GroupKind::FiniteCyclic:
      return 0.0;
  }
  return 0.0;
}

std::string GroupModel::normalize(std::string_view letters) const {
  std::string out;
  switch (kind_) {
    case GroupKind::Free:
    case GroupKind::InfiniteDihedral:
      out.reserve(letters.size());
      for (char c : letters) {
        auto l = static_cast<Letter>(c);
        if (kind_ == GroupKind::InfiniteDihedral) l = static_cast<Letter>(l & ~1);
        if (!out.empty() && static_cast<Letter>(out.back()) == inverse(l))
          out.pop_back();
        else
          out.push_back(static_cast<char>(l));
      }
      break;
    case GroupKind::FreeAbelian: {
      std::vector<long> exps(static_cast<std::size_t>(param_), 0);
      for (char c : letters) exps[static_cast<std::size_t>(c / 2)] += (c & 1) ? -1 : 1;
      for (int g = 0; g < param_; ++g) {
        long e = exps[static_cast<std::size_t>(g)];
        out.append(static_cast<std::size_t>(std::labs(e)), static_cast<char>(2 * g + (e < 0 ? 1 : 0)));
      }
      break;
    }
    case GroupKind::FiniteCyclic: {
      if (param_ == 1) break;
      long r = 0;
      for (char c : letters) r += (c & 1) ? -1 : 1;
      r %= param_;
      if (r < 0) r += param_;
      if (r <= param_ - r)
        out.assign(static_cast<std::size_t>(r), static_cast<char>(0));
      else
        out.assign(static_cast<std::size_t>(param_ - r), static_cast<char>(1));
      break;
    }
  }
  return out;
}

bool operator<(const GroupElement& a, const GroupElement& b) {
  if (a.word.size() != b.word.size()) return a.word.size() < b.word.size();
  return a.word < b.word;
}

GroupElement identity(const GroupModel& model) { return {model, {}}; }

GroupElement generator(const GroupModel& model, int index, bool inverse_letter) {
  if (index < 0 || index >= model.generator_count()) throw std::out_of_range("generator index out of range");
  char c = static_cast<char>(2 * index + (inverse_letter ? 1 : 0));
  return {model, model.normalize(std::string_view(&c, 1))};
}

GroupElement from_letters(const GroupModel& model, std::string_view letters) {
  return {model, model.normalize(letters)};
}

GroupElement compose(const GroupElement& a, const GroupElement& b) {
  if (!(a.model == b.model))
    throw ModelMismatch("cannot compose elements of " + a.model.name() + " and " + b.model.name());
  const GroupModel& m = a.model;
  if (m.kind() == GroupKind::Free || m.kind() == GroupKind::InfiniteDihedral) {
    // both operands are already reduced, so only the seam can cancel
    std::size_t cancel = 0;
    std::size_t na = a.word.size(), nb = b.word.size();
    while (cancel < na && cancel < nb &&
           m.inverse(static_cast<Letter>(a.word[na - 1 - cancel])) == static_cast<Letter>(b.word[cancel]))
      ++cancel;
    std::string w;
    w.reserve(na + nb - 2 * cancel);
    w.append(a.word, 0, na - cancel);
    w.append(b.word, cancel, std::string::npos);
    return {m, std::move(w)};
  }
  return {m, m.normalize(a.word + b.word)};
}

GroupElement inverse(const GroupElement& a) {
  std::string w(a.word.rbegin(), a.word.rend());
  for (char& c : w) c = static_cast<char>(a.model.inverse(static_cast<Letter>(c)));
  return {a.model, a.model.normalize(w)};
}

GroupElement parse_element(const GroupModel& model, std::string_view text) {
  std::string letters;
  std::size_t i = 0;
  auto fail = [&](const std::string& why) {
    throw InputError("cannot parse element '" + std::string(text) + "' for " + model.name() + ": " + why);
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) fail("unexpected character '" + std::string(1, c) + "'");
    std::string name(1, c);
    ++i;
    long power = 1;
    if (i < text.size() && text[i] == '^') {
      ++i;
      std::size_t start = i;
      if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      std::string digits(text.substr(start, i - start));
      if (digits.empty() || digits == "-" || digits == "+") fail("missing exponent");
      power = std::stol(digits);
    }
    if (name == "e") continue;
    auto g = model.generator_index(name);
    if (!g) fail("unknown generator '" + name + "'");
    char letter = static_cast<char>(2 * *g + (power < 0 ? 1 : 0));
    letters.append(static_cast<std::size_t>(std::labs(power)), letter);
  }
  return from_letters(model, letters);
}

std::string to_string(const GroupElement& s) {
  if (s.word.empty()) return "e";
  std::string out;
  for (char c : s.word) out += s.model.letter_name(static_cast<Letter>(c));
  return out;
}

Ball::Ball(const GroupModel& model, int radius, std::size_t budget) : model_(model), radius_(radius) {
  if (radius < 0) throw std::invalid_argument("ball radius must be non-negative");
  double predicted = model.ball_count(radius);
  if (predicted > static_cast<double>(budget)) {
    auto count = predicted >= 1e19 ? std::numeric_limits<std::size_t>::max() : static_cast<std::size_t>(predicted);
    throw BudgetExceeded(count, budget);
  }
  auto total = static_cast<std::size_t>(predicted);
  elements_.reserve(total);
  index_.reserve(total);
  sphere_offsets_.push_back(0);
  elements_.push_back(identity(model));
  const auto gens = model.generating_set();
  for (int k = 0; k < radius; ++k) {
    std::size_t begin = sphere_offsets_.back();
    std::size_t end = elements_.size();
    sphere_offsets_.push_back(end);
    std::vector<GroupElement> next;
    for (std::size_t i = begin; i < end; ++i) {
      for (Letter l : gens) {
        GroupElement cand = compose(elements_[i], GroupElement{model, std::string(1, static_cast<char>(l))});
        if (word_length(cand) == k + 1) next.push_back(std::move(cand));
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    for (auto& e : next) elements_.push_back(std::move(e));
  }
  sphere_offsets_.push_back(elements_.size());
  for (std::size_t i = 0; i < elements_.size(); ++i) index_.emplace(elements_[i].word, i);
}

std::span<const GroupElement> Ball::sphere(int k) const {
  if (k < 0 || k > radius_) return {};
  auto b = sphere_offsets_[static_cast<std::size_t>(k)];
  auto e = sphere_offsets_[static_cast<std::size_t>(k) + 1];
  return std::span<const GroupElement>(elements_).subspan(b, e - b);
}

std::size_t Ball::index_of(const GroupElement& s) const {
  if (!(s.model == model_)) throw ModelMismatch("element of " + s.model.name() + " looked up in a ball of " + model_.name());
  auto it = index_.find(s.word);
  return it == index_.end() ? npos : it->second;
}

GrowthReport growth_check(const GroupModel& model, int window) {
  if (window < 1) throw std::invalid_argument("growth window must be >= 1");
  GrowthReport report;
  for (int k = 1; k <= window; ++k) {
    double count = model.sphere_count(k);
    report.sphere_counts.push_back(count);
    if (count <= 0) continue;
    double c = std::pow(count, 1.0 / k);
    // counts are integers: snap exact k-th roots such as 12^(1/2) != integer, 4^(1/1) == 4
    double rounded = std::round(c);
    if (std::abs(c - rounded) < 1e-12 && std::pow(rounded, k) == count) c = rounded;
    if (c > report.constant) {
      report.constant = c;
      report.attained_at = k;
    }
  }
  return report;
}

}  // namespace icw
