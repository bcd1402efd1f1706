#pragma once

// Exact models of a few finitely generated groups. Elements carry a canonical
// normal form (a word over the symmetric generating set), so equality of
// elements is equality of strings and every window computation is exact.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace icw {

inline constexpr std::size_t kDefaultElementBudget = 2'000'000;

enum class GroupKind : std::uint8_t { Free, FreeAbelian, FiniteCyclic, InfiniteDihedral };

/// Letter code: 2 * generator + 1 for the inverse letter. Involutive
/// generators only ever use the even code.
using Letter = std::uint8_t;

class GroupModel {
 public:
  static GroupModel free(int rank);
  static GroupModel free_abelian(int rank);
  static GroupModel cyclic(int order);
  static GroupModel infinite_dihedral();

  /// Accepts "F2", "F3", "Z", "Z2", "ZmodN:5", "Dinf".
  static GroupModel parse(std::string_view name);

  GroupKind kind() const { return kind_; }
  int parameter() const { return param_; }
  std::string name() const;

  int generator_count() const;
  bool involutive(int generator) const;
  Letter inverse(Letter l) const;

  /// Symmetric generating set S in canonical letter order; excludes the identity.
  std::vector<Letter> generating_set() const;

  std::string generator_name(int generator) const;
  std::string letter_name(Letter l) const;
  std::optional<int> generator_index(std::string_view name) const;

  bool is_finite() const { return kind_ == GroupKind::FiniteCyclic; }
  /// Largest word length attained (finite groups only).
  std::optional<int> diameter() const;

  /// Defining relators as letter words (empty for free groups).
  std::vector<std::string> relators() const;

  /// Closed-form sphere size #{s : |s| = k}.
  double sphere_count(int k) const;
  /// Closed-form ball size, saturating at the double range.
  double ball_count(int radius) const;
  /// lim s_{k+1}/s_k: 2m-1 for free groups, 1 for polynomial growth, 0 for finite.
  double growth_rate() const;

  /// Reduces an arbitrary letter word to the canonical normal form.
  std::string normalize(std::string_view letters) const;

  friend bool operator==(const GroupModel&, const GroupModel&) = default;

 private:
  GroupModel(GroupKind kind, int param) : kind_(kind), param_(param) {}

  GroupKind kind_;
  int param_;
};

struct GroupElement {
  GroupModel model;
  std::string word;  // normal form, one char per letter code

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.model == b.model && a.word == b.word;
  }
};

/// (length, lex) order on normal forms; only meaningful within one model.
bool operator<(const GroupElement& a, const GroupElement& b);

GroupElement identity(const GroupModel& model);
GroupElement generator(const GroupModel& model, int index, bool inverse = false);
GroupElement from_letters(const GroupModel& model, std::string_view letters);

GroupElement compose(const GroupElement& a, const GroupElement& b);
GroupElement inverse(const GroupElement& a);
inline int word_length(const GroupElement& s) { return static_cast<int>(s.word.size()); }

inline GroupElement operator*(const GroupElement& a, const GroupElement& b) { return compose(a, b); }

/// "e", "a", "a^-1", "ab^-1a", "a^3b^-2".
GroupElement parse_element(const GroupModel& model, std::string_view text);
std::string to_string(const GroupElement& s);

struct GroupElementHash {
  std::size_t operator()(const GroupElement& s) const { return std::hash<std::string>{}(s.word); }
};

/// All elements of word length at most R, sorted by (length, lex).
class Ball {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Ball(const GroupModel& model, int radius, std::size_t budget = kDefaultElementBudget);

  const GroupModel& model() const { return model_; }
  int radius() const { return radius_; }
  std::size_t size() const { return elements_.size(); }
  const GroupElement& operator[](std::size_t i) const { return elements_[i]; }
  std::span<const GroupElement> elements() const { return elements_; }
  std::span<const GroupElement> sphere(int k) const;

  /// Position of s, or npos when |s| > radius.
  std::size_t index_of(const GroupElement& s) const;
  bool contains(const GroupElement& s) const { return index_of(s) != npos; }

 private:
  GroupModel model_;
  int radius_;
  std::vector<GroupElement> elements_;
  std::vector<std::size_t> sphere_offsets_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline Ball ball(const GroupModel& model, int radius, std::size_t budget = kDefaultElementBudget) {
  return Ball(model, radius, budget);
}

struct GrowthReport {
  double constant = 0;                 // smallest C with s_k <= C^k on the window
  int attained_at = 0;                 // k achieving the maximum of s_k^{1/k}
  std::vector<double> sphere_counts;   // s_1 .. s_K
};

GrowthReport growth_check(const GroupModel& model, int window);

}  // namespace icw
