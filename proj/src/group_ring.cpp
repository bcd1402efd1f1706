#include "icw/group_ring.hpp"

#include <cctype>
#include <sstream>

#include "icw/errors.hpp"

namespace icw {

cplx GroupRingElement::coefficient(const GroupElement& s) const {
  auto it = terms_.find(s);
  return it == terms_.end() ? cplx{} : it->second;
}

void GroupRingElement::add(const GroupElement& s, cplx alpha) {
  if (!(s.model == model_)) throw ModelMismatch("term of " + s.model.name() + " added to element of " + model_.name());
  auto [it, inserted] = terms_.try_emplace(s, alpha);
  if (!inserted) it->second += alpha;
  if (it->second == cplx{}) terms_.erase(it);
}

int GroupRingElement::support_radius() const {
  int r = 0;
  for (const auto& [s, a] : terms_) r = std::max(r, word_length(s));
  return r;
}

GroupRingElement GroupRingElement::adjoint() const {
  GroupRingElement out(model_);
  for (const auto& [s, a] : terms_) out.add(inverse(s), std::conj(a));
  return out;
}

GroupRingElement& GroupRingElement::operator+=(const GroupRingElement& other) {
  if (!(other.model_ == model_)) throw ModelMismatch("group ring elements over different models");
  for (const auto& [s, a] : other.terms_) add(s, a);
  return *this;
}

GroupRingElement& GroupRingElement::operator*=(cplx scalar) {
  if (scalar == cplx{}) {
    terms_.clear();
    return *this;
  }
  for (auto& [s, a] : terms_) a *= scalar;
  return *this;
}

GroupRingElement operator+(GroupRingElement a, const GroupRingElement& b) { return a += b; }

GroupRingElement operator-(GroupRingElement a, const GroupRingElement& b) {
  GroupRingElement neg = b;
  neg *= -1.0;
  return a += neg;
}

GroupRingElement operator*(cplx scalar, GroupRingElement x) { return x *= scalar; }

GroupRingElement operator*(const GroupRingElement& x, const GroupRingElement& y) {
  if (!(x.model() == y.model())) throw ModelMismatch("group ring elements over different models");
  GroupRingElement out(x.model());
  for (const auto& [s, a] : x.terms())
    for (const auto& [t, b] : y.terms()) out.add(compose(s, t), a * b);
  return out;
}

GroupRingElement delta(const GroupElement& s, cplx alpha) {
  GroupRingElement x(s.model);
  x.add(s, alpha);
  return x;
}

GroupRingElement gensum(const GroupModel& model) {
  GroupRingElement x(model);
  for (Letter l : model.generating_set()) x.add(from_letters(model, std::string(1, static_cast<char>(l))), 1.0);
  return x;
}

cplx coefficient_sum(const GroupRingElement& x) {
  cplx total{};
  for (const auto& [s, a] : x.terms()) total += a;
  return total;
}

GroupRingElement parse_group_ring(const GroupModel& model, std::string_view text) {
  GroupRingElement out(model);
  std::string src(text);
  std::size_t i = 0;
  auto skip = [&] {
    while (i < src.size() && std::isspace(static_cast<unsigned char>(src[i]))) ++i;
  };
  skip();
  if (i == src.size()) throw InputError("empty group ring element");
  bool first = true;
  while (i < src.size()) {
    double sign = 1.0;
    skip();
    if (src[i] == '+' || src[i] == '-') {
      sign = src[i] == '-' ? -1.0 : 1.0;
      ++i;
      skip();
    } else if (!first) {
      throw InputError("expected '+' or '-' in group ring element '" + src + "'");
    }
    first = false;
    std::size_t end = i;
    while (end < src.size() && src[end] != '+' && !(src[end] == '-' && end > i && src[end - 1] != '^')) ++end;
    std::string term = src.substr(i, end - i);
    while (!term.empty() && std::isspace(static_cast<unsigned char>(term.back()))) term.pop_back();
    i = end;
    if (term.empty()) throw InputError("empty term in group ring element '" + src + "'");
    double coeff = 1.0;
    std::string word = term;
    if (auto star = term.find('*'); star != std::string::npos) {
      try {
        coeff = std::stod(term.substr(0, star));
      } catch (const std::exception&) {
        throw InputError("bad coefficient in term '" + term + "'");
      }
      word = term.substr(star + 1);
    } else if (std::isdigit(static_cast<unsigned char>(term[0])) || term[0] == '.') {
      std::size_t used = 0;
      coeff = std::stod(term, &used);
      word = term.substr(used);
    }
    while (!word.empty() && std::isspace(static_cast<unsigned char>(word.front()))) word.erase(word.begin());
    if (word == "gensum") {
      GroupRingElement g = gensum(model);
      g *= sign * coeff;
      out += g;
      continue;
    }
    GroupElement s = word.empty() ? identity(model) : parse_element(model, word);
    out.add(s, sign * coeff);
  }
  return out;
}

std::string to_string(const GroupRingElement& x) {
  if (x.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [s, a] : x.terms()) {
    if (!first) os << " + ";
    first = false;
    if (a.imag() == 0)
      os << a.real();
    else
      os << "(" << a.real() << (a.imag() < 0 ? "" : "+") << a.imag() << "i)";
    os << "*" << to_string(s);
  }
  return os.str();
}

Homomorphism::Homomorphism(GroupModel source, GroupModel target, std::vector<GroupElement> images)
    : source_(source), target_(target), images_(std::move(images)) {
  if (static_cast<int>(images_.size()) != source_.generator_count())
    throw std::invalid_argument("homomorphism needs one image per source generator");
  for (const auto& im : images_) {
    if (!(im.model == target_)) throw ModelMismatch("generator image does not live in " + target_.name());
    inverse_images_.push_back(inverse(im));
  }
  for (const auto& rel : source_.relators()) {
    if (!image_of_word(rel).word.empty()) {
      std::string name;
      for (char c : rel) name += source_.letter_name(static_cast<Letter>(c));
      throw InvalidHomomorphism(name);
    }
  }
}

Homomorphism Homomorphism::identity(const GroupModel& model) {
  std::vector<GroupElement> im;
  for (int g = 0; g < model.generator_count(); ++g) im.push_back(generator(model, g));
  return {model, model, std::move(im)};
}

Homomorphism Homomorphism::abelianization(const GroupModel& source) {
  if (source.kind() != GroupKind::Free && source.kind() != GroupKind::FreeAbelian)
    throw Unsupported("abelianization is provided for free and free abelian models");
  GroupModel target = GroupModel::free_abelian(source.parameter());
  std::vector<GroupElement> im;
  for (int g = 0; g < source.generator_count(); ++g) im.push_back(generator(target, g));
  return {source, target, std::move(im)};
}

GroupElement Homomorphism::image_of_word(std::string_view letters) const {
  GroupElement out = icw::identity(target_);
  for (char c : letters) {
    int g = static_cast<unsigned char>(c) / 2;
    bool inv = (c & 1) != 0;
    out = compose(out, inv ? inverse_images_[static_cast<std::size_t>(g)] : images_[static_cast<std::size_t>(g)]);
  }
  return out;
}

GroupElement Homomorphism::operator()(const GroupElement& s) const {
  if (!(s.model == source_)) throw ModelMismatch("element of " + s.model.name() + " given to a map from " + source_.name());
  return image_of_word(s.word);
}

GroupRingElement hom_pushforward(const Homomorphism& phi, const GroupRingElement& x) {
  if (!(x.model() == phi.source())) throw ModelMismatch("pushforward source model mismatch");
  GroupRingElement out(phi.target());
  for (const auto& [s, a] : x.terms()) out.add(phi(s), a);
  return out;
}

}  // namespace icw
