// Polynomial-time classification of EL-bottom TBoxes.
//
// Every complex member of sub(T) gets a fresh internal name X with X == C,
// after which all axioms are in one of the four normal forms
//   A [= B,   A1 AND A2 [= B,   A [= EXISTS r.B,   EXISTS r.A [= B
// over basic concepts (names, TOP, BOTTOM). Saturation then maintains, for
// every basic concept A, the set S(A) of its derived subsumers and, per role,
// the derived successor edges R(r).

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "trepan/error.hpp"
#include "trepan/ontology.hpp"

namespace trepan::onto {
namespace {

using Id = std::uint32_t;
constexpr Id kTop = 0;
constexpr Id kBottom = 1;

struct Normalized {
  std::vector<std::string> names;  // id -> display name
  std::vector<std::vector<Id>> told;                                   // A [= B
  std::vector<std::vector<std::pair<Id, Id>>> conj;                    // A AND A2 [= B, keyed by A
  std::vector<std::vector<std::pair<std::uint32_t, Id>>> exists_right;  // A [= EXISTS r.B
  // (r, A) -> B for EXISTS r.A [= B
  std::unordered_map<std::uint64_t, std::vector<Id>> exists_left;
  std::uint32_t role_count = 0;

  static std::uint64_t key(std::uint32_t role, Id filler) {
    return (static_cast<std::uint64_t>(role) << 32) | filler;
  }
};

class Normalizer {
 public:
  explicit Normalizer(Normalized& out) : out_(out) {
    add_name("TOP");
    add_name("BOTTOM");
  }

  std::uint32_t role(const std::string& r) {
    auto [it, inserted] = roles_.emplace(r, out_.role_count);
    if (inserted) ++out_.role_count;
    return it->second;
  }

  // Basic concept standing for `c`, introducing definitions on first sight.
  Id name_of(const ConceptExpr& c) {
    switch (c.kind()) {
      case ConceptExpr::Kind::Top: return kTop;
      case ConceptExpr::Kind::Bottom: return kBottom;
      default: break;
    }
    if (auto it = ids_.find(c); it != ids_.end()) return it->second;

    if (c.is_atom()) {
      Id id = add_name(c.name());
      ids_.emplace(c, id);
      return id;
    }

    Id x = add_name("_X" + std::to_string(fresh_.size()));
    fresh_.emplace(c, out_.names[x]);
    ids_.emplace(c, x);

    if (c.kind() == ConceptExpr::Kind::Existential) {
      std::uint32_t r = role(c.role());
      Id filler = name_of(c.filler());
      out_.exists_right[x].push_back({r, filler});
      out_.exists_left[Normalized::key(r, filler)].push_back(x);
    } else {
      std::vector<Id> ops;
      for (const auto& op : c.conjuncts()) ops.push_back(name_of(op));
      for (Id op : ops) out_.told[x].push_back(op);
      // Binary chain: ((o0 AND o1) AND o2) ... [= X through fresh intermediates.
      Id acc = ops[0];
      for (std::size_t i = 1; i < ops.size(); ++i) {
        Id target = (i + 1 == ops.size()) ? x : add_name("_Y" + std::to_string(helpers_++));
        add_conj(acc, ops[i], target);
        acc = target;
      }
    }
    return x;
  }

  void add_told(Id a, Id b) {
    if (a != b) out_.told[a].push_back(b);
  }

  void add_domain(std::uint32_t r, Id d) {
    out_.exists_left[Normalized::key(r, kTop)].push_back(d);
  }

  std::map<ConceptExpr, std::string> take_fresh() { return std::move(fresh_); }

 private:
  Id add_name(std::string n) {
    out_.names.push_back(std::move(n));
    out_.told.emplace_back();
    out_.conj.emplace_back();
    out_.exists_right.emplace_back();
    return static_cast<Id>(out_.names.size() - 1);
  }

  void add_conj(Id a, Id b, Id target) {
    out_.conj[a].push_back({b, target});
    if (a != b) out_.conj[b].push_back({a, target});
  }

  Normalized& out_;
  std::map<ConceptExpr, Id> ids_;
  std::map<std::string, std::uint32_t> roles_;
  std::map<ConceptExpr, std::string> fresh_;
  std::size_t helpers_ = 0;
};

class Saturation {
 public:
  explicit Saturation(const Normalized& tbox)
      : t_(tbox),
        n_(tbox.names.size()),
        subsumers_(n_ * n_, 0),
        subsumer_list_(n_),
        pred_(n_) {}

  void run() {
    for (Id a = 0; a < n_; ++a) {
      push_concept(a, a);
      push_concept(a, kTop);
    }
    while (!queue_.empty()) {
      Item item = queue_.front();
      queue_.pop_front();
      if (item.is_edge) {
        process_edge(item.a, item.role, item.b);
      } else {
        process_concept(item.a, item.b);
      }
    }
  }

  bool has(Id a, Id b) const { return subsumers_[a * n_ + b] != 0; }

  bool entails(Id sub, Id sup) const { return sup == kTop || has(sub, sup) || has(sub, kBottom); }

 private:
  struct Item {
    bool is_edge;
    Id a;
    std::uint32_t role;
    Id b;
  };

  void push_concept(Id a, Id b) { queue_.push_back({false, a, 0, b}); }
  void push_edge(Id a, std::uint32_t r, Id b) { queue_.push_back({true, a, r, b}); }

  // b has just become a subsumer of a.
  void process_concept(Id a, Id b) {
    auto& slot = subsumers_[a * n_ + b];
    if (slot) return;
    slot = 1;
    subsumer_list_[a].push_back(b);

    for (Id c : t_.told[b]) push_concept(a, c);
    for (auto [other, c] : t_.conj[b]) {
      if (has(a, other)) push_concept(a, c);
    }
    for (auto [r, c] : t_.exists_right[b]) push_edge(a, r, c);

    // Predecessors of a gain whatever EXISTS r.b entails.
    for (auto [pred, r] : pred_[a]) {
      if (b == kBottom) push_concept(pred, kBottom);
      if (auto it = t_.exists_left.find(Normalized::key(r, b)); it != t_.exists_left.end()) {
        for (Id c : it->second) push_concept(pred, c);
      }
    }
  }

  void process_edge(Id a, std::uint32_t r, Id b) {
    std::uint64_t k = (static_cast<std::uint64_t>(a) << 40) ^ (static_cast<std::uint64_t>(r) << 32) ^ b;
    if (!edges_.insert(k).second) return;
    pred_[b].push_back({a, r});
    for (Id s : subsumer_list_[b]) {
      if (s == kBottom) push_concept(a, kBottom);
      if (auto it = t_.exists_left.find(Normalized::key(r, s)); it != t_.exists_left.end()) {
        for (Id c : it->second) push_concept(a, c);
      }
    }
  }

  const Normalized& t_;
  std::size_t n_;
  std::vector<std::uint8_t> subsumers_;
  std::vector<std::vector<Id>> subsumer_list_;
  std::vector<std::vector<std::pair<Id, std::uint32_t>>> pred_;
  std::set<std::uint64_t> edges_;
  std::deque<Item> queue_;
};

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

SubsumptionIndex classify(const TBox& tbox) {
  SubsumptionIndex index;
  index.members_ = enumerate_sub(tbox);
  for (std::size_t i = 0; i < index.members_.size(); ++i) index.lookup_.emplace(index.members_[i], i);

  Normalized normalized;
  Normalizer normalizer(normalized);
  std::vector<Id> member_ids;
  member_ids.reserve(index.members_.size());
  for (const auto& m : index.members_) member_ids.push_back(normalizer.name_of(m));
  for (const auto& gci : tbox.gcis) {
    normalizer.add_told(normalizer.name_of(gci.lhs), normalizer.name_of(gci.rhs));
  }
  for (const auto& [role, domain] : tbox.domains) {
    std::uint32_t r = normalizer.role(role);
    normalizer.add_domain(r, normalizer.name_of(domain));
  }
  // Fresh names introduced for domain concepts are not members of sub(T).
  auto fresh = normalizer.take_fresh();
  for (auto& [expr, name] : fresh) {
    if (index.lookup_.count(expr)) index.fresh_names_.emplace(expr, std::move(name));
  }

  Saturation saturation(normalized);
  saturation.run();

  const std::size_t n = index.members_.size();
  index.closure_.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      index.closure_[i * n + j] = saturation.entails(member_ids[i], member_ids[j]) ? 1 : 0;
    }
  }
  index.inconsistent_ = saturation.entails(kTop, kBottom);
  return index;
}

std::optional<std::size_t> SubsumptionIndex::find(const ConceptExpr& c) const {
  if (auto it = lookup_.find(c); it != lookup_.end()) return it->second;
  return std::nullopt;
}

std::size_t SubsumptionIndex::require(const ConceptExpr& c) const {
  if (auto i = find(c)) return *i;
  std::string msg = "concept '" + c.to_string() + "' is not in sub(T)";
  if (c.is_atom()) {
    auto near = near_matches(c.name());
    if (!near.empty()) {
      msg += "; did you mean";
      for (std::size_t i = 0; i < near.size(); ++i) msg += (i ? ", '" : " '") + near[i] + "'";
      msg += "?";
    }
  }
  throw UnknownConcept(msg);
}

std::vector<std::string> SubsumptionIndex::near_matches(const std::string& name,
                                                        std::size_t max_results) const {
  std::vector<std::pair<std::size_t, std::string>> scored;
  for (const auto& m : members_) {
    if (!m.is_atom()) continue;
    std::size_t d = edit_distance(name, m.name());
    if (d <= std::max<std::size_t>(2, name.size() / 3)) scored.emplace_back(d, m.name());
  }
  std::sort(scored.begin(), scored.end());
  std::vector<std::string> out;
  for (std::size_t i = 0; i < scored.size() && i < max_results; ++i) out.push_back(scored[i].second);
  return out;
}

}  // namespace trepan::onto
