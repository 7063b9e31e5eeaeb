#pragma once

// Core model of the equality-comparison majority problem: instances, the
// comparison oracle, accumulated knowledge and its feasibility semantics.

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace majority {

using PositionMask = std::uint64_t;

/// Largest number of array positions representable by a PositionMask.
inline constexpr int kMaxPositions = 64;

constexpr PositionMask bit(int p) { return PositionMask{1} << p; }

constexpr PositionMask low_bits(int count) {
  return count >= kMaxPositions ? ~PositionMask{0} : bit(count) - 1;
}

constexpr int popcount(PositionMask m) { return std::popcount(m); }

template <class F>
void for_each_position(PositionMask m, F&& f) {
  while (m != 0) {
    f(std::countr_zero(m));
    m &= m - 1;
  }
}

inline std::vector<int> positions_of(PositionMask m) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(popcount(m)));
  for_each_position(m, [&](int p) { out.push_back(p); });
  return out;
}

inline PositionMask mask_of(std::span<const int> positions) {
  PositionMask m = 0;
  for (int p : positions) {
    if (p < 0 || p >= kMaxPositions) throw std::out_of_range("position outside mask range");
    m |= bit(p);
  }
  return m;
}

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

enum class Answer { equal, not_equal };

constexpr std::string_view to_string(Answer a) { return a == Answer::equal ? "equal" : "not_equal"; }

inline Answer answer_from_string(std::string_view s) {
  if (s == "equal") return Answer::equal;
  if (s == "not_equal") return Answer::not_equal;
  throw std::invalid_argument("unknown answer: " + std::string(s));
}

/// Raised when an answer conflicts with what is already known.
class Contradiction : public std::runtime_error {
 public:
  Contradiction(int i, int j, const std::string& what) : std::runtime_error(what), i_(i), j_(j) {}
  int i() const { return i_; }
  int j() const { return j_; }

 private:
  int i_;
  int j_;
};

/// Raised when an exact search is asked to run beyond its size limit.
class LimitExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline void require_n(int n) {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  if (2 * n > kMaxPositions) throw LimitExceeded("n too large for position masks");
}

inline void require_pair(int size, int i, int j) {
  if (i < 0 || j < 0 || i >= size || j >= size) throw std::out_of_range("position out of range");
  if (i == j) throw std::invalid_argument("self-comparison is not a query");
}

/// Unordered pair of positions, stored with i < j.
struct PositionPair {
  int i = 0;
  int j = 0;

  static PositionPair of(int a, int b) { return a < b ? PositionPair{a, b} : PositionPair{b, a}; }
  auto operator<=>(const PositionPair&) const = default;
};

struct QueryRecord {
  int i = 0;
  int j = 0;
  Answer answer = Answer::not_equal;

  PositionPair pair() const { return PositionPair::of(i, j); }
  bool operator==(const QueryRecord&) const = default;
};

/// The n positions holding the majority value, kept sorted.
class MajoritySet {
 public:
  MajoritySet(int n, std::vector<int> positions) : n_(n), positions_(std::move(positions)) {
    require_n(n);
    std::sort(positions_.begin(), positions_.end());
    if (static_cast<int>(positions_.size()) != n) throw std::invalid_argument("majority set must have exactly n positions");
    if (std::adjacent_find(positions_.begin(), positions_.end()) != positions_.end())
      throw std::invalid_argument("majority set positions must be distinct");
    if (positions_.front() < 0 || positions_.back() >= 2 * n) throw std::out_of_range("majority set position out of range");
  }

  static MajoritySet from_mask(int n, PositionMask m) { return MajoritySet(n, positions_of(m)); }

  int n() const { return n_; }
  const std::vector<int>& positions() const { return positions_; }
  PositionMask mask() const { return mask_of(positions_); }
  bool contains(int p) const { return std::binary_search(positions_.begin(), positions_.end(), p); }

  friend bool operator==(const MajoritySet&, const MajoritySet&) = default;
  friend auto operator<=>(const MajoritySet& a, const MajoritySet& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    return a.positions_ <=> b.positions_;
  }

 private:
  int n_;
  std::vector<int> positions_;
};

/// A concrete array of 2n abstract value labels; one label occurs n times,
/// every other label exactly once.
class Instance {
 public:
  explicit Instance(std::vector<int> values) : values_(std::move(values)) {
    if (values_.size() % 2 != 0) throw std::invalid_argument("instance length must be even");
    n_ = static_cast<int>(values_.size() / 2);
    require_n(n_);
    std::map<int, int> counts;
    for (int v : values_) ++counts[v];
    const auto majority = std::find_if(counts.begin(), counts.end(), [&](const auto& kv) { return kv.second == n_; });
    if (majority == counts.end()) throw std::invalid_argument("no value occurs n times");
    majority_value_ = majority->first;
    for (auto [value, count] : counts)
      if (value != majority_value_ && count != 1)
        throw std::invalid_argument("every non-majority value must occur exactly once");
  }

  int n() const { return n_; }
  int size() const { return 2 * n_; }
  std::span<const int> values() const { return values_; }
  int value(int p) const { return values_.at(static_cast<std::size_t>(p)); }
  int majority_value() const { return majority_value_; }
  bool is_majority(int p) const { return value(p) == majority_value_; }

  MajoritySet majority_set() const {
    std::vector<int> ps;
    for (int p = 0; p < size(); ++p)
      if (is_majority(p)) ps.push_back(p);
    return MajoritySet(n_, std::move(ps));
  }

  bool operator==(const Instance& o) const { return values_ == o.values_; }

 private:
  int n_ = 0;
  int majority_value_ = 0;
  std::vector<int> values_;
};

/// Majority positions get label 0, the others 1..n in position order.
inline Instance canonical_instance(const MajoritySet& s) {
  std::vector<int> values(static_cast<std::size_t>(2 * s.n()));
  int next = 1;
  for (int p = 0; p < 2 * s.n(); ++p) values[static_cast<std::size_t>(p)] = s.contains(p) ? 0 : next++;
  return Instance(std::move(values));
}

inline Instance canonical_instance(const MajoritySet& s, int n) {
  if (s.n() != n) throw std::invalid_argument("majority set does not match n");
  return canonical_instance(s);
}

inline Answer oracle_answer(const Instance& inst, int i, int j) {
  require_pair(inst.size(), i, j);
  return inst.value(i) == inst.value(j) ? Answer::equal : Answer::not_equal;
}

/// Every MajoritySet for n, in lexicographic order.
inline std::vector<MajoritySet> all_majority_sets(int n) {
  require_n(n);
  std::vector<MajoritySet> out;
  std::vector<int> combo(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) combo[static_cast<std::size_t>(k)] = k;
  const int size = 2 * n;
  while (true) {
    out.emplace_back(n, combo);
    int k = n - 1;
    while (k >= 0 && combo[static_cast<std::size_t>(k)] == size - n + k) --k;
    if (k < 0) break;
    ++combo[static_cast<std::size_t>(k)];
    for (int m = k + 1; m < n; ++m) combo[static_cast<std::size_t>(m)] = combo[static_cast<std::size_t>(m - 1)] + 1;
  }
  return out;
}

/// What a player provably knows after a set of answers: a partition of the
/// positions into known-equal classes plus an inequality relation between
/// classes. Each class is named by its smallest member, so two states that
/// carry the same facts compare equal no matter the order they were learned.
class KnowledgeState {
 public:
  explicit KnowledgeState(int n) : n_(n) {
    require_n(n);
    for (int p = 0; p < size(); ++p) {
      rep_[static_cast<std::size_t>(p)] = static_cast<std::int8_t>(p);
      members_[static_cast<std::size_t>(p)] = bit(p);
    }
  }

  int n() const { return n_; }
  int size() const { return 2 * n_; }

  int representative(int p) const { return rep_[checked(p)]; }
  PositionMask class_members(int p) const { return members_[static_cast<std::size_t>(representative(p))]; }
  /// Positions in classes known to differ from p's class.
  PositionMask unequal_to(int p) const { return unequal_[static_cast<std::size_t>(representative(p))]; }

  bool known_equal(int i, int j) const { return representative(i) == representative(j); }
  bool known_unequal(int i, int j) const { return (unequal_to(i) & bit(j)) != 0; }
  bool is_known(int i, int j) const { return known_equal(i, j) || known_unequal(i, j); }

  /// Positions lying in known-equal classes of size at least two.
  PositionMask forced_majority() const {
    PositionMask m = 0;
    for (int p = 0; p < size(); ++p)
      if (rep_[static_cast<std::size_t>(p)] == p && popcount(members_[static_cast<std::size_t>(p)]) >= 2)
        m |= members_[static_cast<std::size_t>(p)];
    return m;
  }

  std::vector<int> representatives() const {
    std::vector<int> out;
    for (int p = 0; p < size(); ++p)
      if (rep_[static_cast<std::size_t>(p)] == p) out.push_back(p);
    return out;
  }

  std::vector<std::vector<int>> classes() const {
    std::vector<std::vector<int>> out;
    for (int r : representatives()) out.push_back(positions_of(members_[static_cast<std::size_t>(r)]));
    return out;
  }

  /// Related class pairs, as (smaller representative, larger representative).
  std::vector<PositionPair> class_inequalities() const {
    std::vector<PositionPair> out;
    for (int r : representatives())
      for_each_position(unequal_[static_cast<std::size_t>(r)], [&](int q) {
        if (rep_[static_cast<std::size_t>(q)] == q && q > r) out.push_back({r, q});
      });
    return out;
  }

  void merge(int i, int j) {
    require_pair(size(), i, j);
    int a = representative(i);
    int b = representative(j);
    if (a == b) return;
    if ((unequal_[static_cast<std::size_t>(a)] & bit(b)) != 0)
      throw Contradiction(i, j, "positions " + std::to_string(i) + " and " + std::to_string(j) + " are already known unequal");
    if (a > b) std::swap(a, b);
    const auto ua = static_cast<std::size_t>(a);
    const auto ub = static_cast<std::size_t>(b);
    const PositionMask merged = members_[ua] | members_[ub];
    for_each_position(members_[ub], [&](int p) { rep_[static_cast<std::size_t>(p)] = static_cast<std::int8_t>(a); });
    members_[ua] = merged;
    members_[ub] = 0;
    unequal_[ua] |= unequal_[ub];
    unequal_[ub] = 0;
    for_each_position(unequal_[ua], [&](int q) {
      if (rep_[static_cast<std::size_t>(q)] == q) unequal_[static_cast<std::size_t>(q)] |= merged;
    });
  }

  void separate(int i, int j) {
    require_pair(size(), i, j);
    const auto a = static_cast<std::size_t>(representative(i));
    const auto b = static_cast<std::size_t>(representative(j));
    if (a == b)
      throw Contradiction(i, j, "positions " + std::to_string(i) + " and " + std::to_string(j) + " are already known equal");
    unequal_[a] |= members_[b];
    unequal_[b] |= members_[a];
  }

  void apply(const QueryRecord& q) {
    if (q.answer == Answer::equal)
      merge(q.i, q.j);
    else
      separate(q.i, q.j);
  }

  bool operator==(const KnowledgeState&) const = default;

 private:
  std::size_t checked(int p) const {
    if (p < 0 || p >= size()) throw std::out_of_range("position out of range");
    return static_cast<std::size_t>(p);
  }

  int n_;
  std::array<std::int8_t, kMaxPositions> rep_{};
  std::array<PositionMask, kMaxPositions> members_{};
  std::array<PositionMask, kMaxPositions> unequal_{};
};

inline KnowledgeState apply_answer(KnowledgeState k, const QueryRecord& q) {
  k.apply(q);
  return k;
}

inline KnowledgeState knowledge_from(int n, std::span<const QueryRecord> records) {
  KnowledgeState k(n);
  for (const auto& r : records) k.apply(r);
  return k;
}

namespace detail {

template <class Visitor>
bool visit_feasible(const KnowledgeState& k, PositionMask forced, PositionMask excluded, int p, PositionMask chosen,
                    PositionMask blocked, int need, Visitor& visit) {
  if ((forced & (blocked | excluded)) != 0) return true;
  if (need == 0) return (forced & ~chosen) != 0 ? true : visit(chosen);
  const PositionMask open = low_bits(k.size()) & ~low_bits(p) & ~blocked & ~excluded;
  if (popcount(open) < need) return true;
  if ((open & bit(p)) != 0 &&
      !visit_feasible(k, forced, excluded, p + 1, chosen | bit(p), blocked | k.unequal_to(p), need - 1, visit))
    return false;
  if ((forced & bit(p)) == 0) return visit_feasible(k, forced, excluded, p + 1, chosen, blocked, need, visit);
  return true;
}

}  // namespace detail

/// Visits the masks of feasible majority sets avoiding `excluded`, in
/// lexicographic order, until the visitor returns false.
template <class Visitor>
void visit_feasible_masks(const KnowledgeState& k, PositionMask excluded, Visitor&& visit) {
  const PositionMask forced = k.forced_majority();
  if (popcount(forced) > k.n()) return;
  detail::visit_feasible(k, forced, excluded, 0, 0, 0, k.n(), visit);
}

/// Majority sets that contain every known-equal pair and no known-unequal pair.
inline std::vector<MajoritySet> feasible_majority_sets(const KnowledgeState& k) {
  std::vector<MajoritySet> out;
  visit_feasible_masks(k, 0, [&](PositionMask m) {
    out.push_back(MajoritySet::from_mask(k.n(), m));
    return true;
  });
  return out;
}

inline std::optional<MajoritySet> first_feasible_majority_set(const KnowledgeState& k, PositionMask excluded = 0) {
  std::optional<MajoritySet> out;
  visit_feasible_masks(k, excluded, [&](PositionMask m) {
    out = MajoritySet::from_mask(k.n(), m);
    return false;
  });
  return out;
}

inline std::size_t count_feasible(const KnowledgeState& k) {
  std::size_t count = 0;
  visit_feasible_masks(k, 0, [&](PositionMask) {
    ++count;
    return true;
  });
  return count;
}

inline bool is_realizable(const KnowledgeState& k) { return first_feasible_majority_set(k).has_value(); }

/// Positions contained in every feasible majority set. An unrealizable state
/// has no feasible sets and therefore no safe output.
inline std::vector<int> safe_outputs(const KnowledgeState& k) {
  PositionMask common = low_bits(k.size());
  bool any = false;
  visit_feasible_masks(k, 0, [&](PositionMask m) {
    any = true;
    common &= m;
    return common != 0;
  });
  return any ? positions_of(common) : std::vector<int>{};
}

/// True when p lies in every feasible set and at least one feasible set exists.
inline bool is_safe_output(const KnowledgeState& k, int p) {
  if (p < 0 || p >= k.size()) throw std::out_of_range("position out of range");
  return !first_feasible_majority_set(k, bit(p)).has_value() && is_realizable(k);
}

enum class Verdict { correct, wrong, unresolved };

constexpr std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::correct: return "correct";
    case Verdict::wrong: return "wrong";
    case Verdict::unresolved: return "unresolved";
  }
  return "unresolved";
}

inline Verdict verdict_from_string(std::string_view s) {
  if (s == "correct") return Verdict::correct;
  if (s == "wrong") return Verdict::wrong;
  if (s == "unresolved") return Verdict::unresolved;
  throw std::invalid_argument("unknown verdict: " + std::string(s));
}

struct ClaimedOutput {
  int position = 0;
  std::optional<int> value;
  bool operator==(const ClaimedOutput&) const = default;
};

/// Ordered query/answer log of one game with its final claim and verdict.
struct Transcript {
  int n = 0;
  std::string mode;
  std::vector<QueryRecord> queries;
  std::optional<ClaimedOutput> output;
  Verdict verdict = Verdict::unresolved;

  std::size_t comparisons() const { return queries.size(); }
  bool operator==(const Transcript&) const = default;
};

}  // namespace majority
