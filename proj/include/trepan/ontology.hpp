#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace trepan::onto {

/// An EL-bottom concept description.
///
/// Values are always canonical: conjunctions are flattened, deduplicated and
/// sorted, so structural equality coincides with syntactic identity modulo
/// associativity, commutativity and idempotence of AND. The enumerator order
/// of Kind is the canonical variant order.
class ConceptExpr {
 public:
  enum class Kind : std::uint8_t { Top, Bottom, Atom, Existential, Conjunction };

  static ConceptExpr top();
  static ConceptExpr bottom();
  static ConceptExpr atom(std::string name);
  static ConceptExpr exists(std::string role, ConceptExpr filler);
  /// Flattens nested conjunctions and removes duplicates. A single surviving
  /// operand is returned as-is; an empty list yields TOP.
  static ConceptExpr conjunction(std::vector<ConceptExpr> operands);

  Kind kind() const noexcept { return kind_; }
  bool is_top() const noexcept { return kind_ == Kind::Top; }
  bool is_bottom() const noexcept { return kind_ == Kind::Bottom; }
  bool is_atom() const noexcept { return kind_ == Kind::Atom; }
  bool is_complex() const noexcept {
    return kind_ == Kind::Existential || kind_ == Kind::Conjunction;
  }

  /// Concept name for atoms, role name for existentials.
  const std::string& name() const noexcept { return name_; }
  const std::string& role() const noexcept { return name_; }
  const ConceptExpr& filler() const { return args_.front(); }
  const std::vector<ConceptExpr>& conjuncts() const noexcept { return args_; }

  /// Renders in the ontology source syntax; the output parses back to an equal value.
  std::string to_string() const;

  friend std::strong_ordering operator<=>(const ConceptExpr& a, const ConceptExpr& b);
  friend bool operator==(const ConceptExpr& a, const ConceptExpr& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }

 private:
  ConceptExpr(Kind kind, std::string name, std::vector<ConceptExpr> args)
      : kind_(kind), name_(std::move(name)), args_(std::move(args)) {}

  Kind kind_ = Kind::Top;
  std::string name_;
  std::vector<ConceptExpr> args_;
};

struct Gci {
  ConceptExpr lhs;
  ConceptExpr rhs;
};

struct TBox {
  std::vector<Gci> gcis;
  std::set<std::string> concepts;
  std::set<std::string> roles;
  // Domain axioms take part in reasoning as EXISTS r.TOP SUBCLASSOF C.
  // Range axioms are kept as metadata only.
  std::map<std::string, ConceptExpr> domains;
  std::map<std::string, ConceptExpr> ranges;
  std::vector<std::string> warnings;
};

struct ParseOptions {
  /// When set, names used without a CONCEPT/ROLE declaration are errors
  /// instead of being auto-declared with a warning.
  bool require_declarations = false;
};

TBox parse_tbox(std::string_view text, const ParseOptions& options = {});
TBox load_tbox(const std::string& path, const ParseOptions& options = {});

/// Parses a single concept expression against the namespaces of `tbox`.
ConceptExpr parse_concept(std::string_view text, const TBox& tbox);

/// sub(T): all subconcepts of the GCIs plus TOP and BOTTOM, in canonical order.
std::vector<ConceptExpr> enumerate_sub(const TBox& tbox);

/// Classified sub(T) with the full subsumption closure precomputed.
/// Immutable once built; all queries are const and thread-safe.
class SubsumptionIndex {
 public:
  const std::vector<ConceptExpr>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  std::optional<std::size_t> find(const ConceptExpr& c) const;
  /// Index of `c`; throws UnknownConcept (with near-match suggestions) otherwise.
  std::size_t require(const ConceptExpr& c) const;

  /// closure(sub, sup): members_[sub] is subsumed by members_[sup] w.r.t. T.
  bool subsumes(std::size_t sub, std::size_t sup) const {
    return closure_[sub * members_.size() + sup] != 0;
  }
  bool equivalent(std::size_t a, std::size_t b) const { return subsumes(a, b) && subsumes(b, a); }
  bool strictly_below(std::size_t a, std::size_t b) const {
    return subsumes(a, b) && !subsumes(b, a);
  }

  /// True when TOP SUBCLASSOF BOTTOM is entailed.
  bool inconsistent() const noexcept { return inconsistent_; }

  /// Internal atom names assigned to complex members during classification.
  const std::map<ConceptExpr, std::string>& fresh_names() const noexcept { return fresh_names_; }

  /// Closest atom names to `name` by edit distance (for diagnostics).
  std::vector<std::string> near_matches(const std::string& name, std::size_t max_results = 3) const;

 private:
  friend SubsumptionIndex classify(const TBox& tbox);

  std::vector<ConceptExpr> members_;
  std::map<ConceptExpr, std::size_t> lookup_;
  std::vector<std::uint8_t> closure_;
  std::map<ConceptExpr, std::string> fresh_names_;
  bool inconsistent_ = false;
};

/// Normalizes T and saturates it with the EL completion rules.
SubsumptionIndex classify(const TBox& tbox);

// Refinement queries. Concepts must be members of sub(T) (UnknownConcept otherwise).
std::vector<std::size_t> downcov(const SubsumptionIndex& index, std::size_t c);
std::vector<ConceptExpr> downcov(const SubsumptionIndex& index, const ConceptExpr& c);
std::vector<std::size_t> subconcepts(const SubsumptionIndex& index, std::size_t c);
std::vector<ConceptExpr> subconcepts(const SubsumptionIndex& index, const ConceptExpr& c);

/// 1 - log|subConcepts(c)| / log|sub(T)| for members, 0 for anything else
/// (including an absent concept). Natural log; the ratio is base-invariant.
/// Throws InconsistentTBox when the index is flagged inconsistent.
double information_content(const SubsumptionIndex& index, const std::optional<ConceptExpr>& c);

/// Feature name -> concept, read from `<feature> -> <concept>` lines.
using ConceptMapping = std::map<std::string, ConceptExpr>;

ConceptMapping parse_mapping(std::string_view text, const TBox& tbox);
ConceptMapping load_mapping(const std::string& path, const TBox& tbox);

/// IC of every feature in `features`; unmapped features get 0.
std::vector<double> feature_information_content(const SubsumptionIndex& index,
                                                const ConceptMapping& mapping,
                                                const std::vector<std::string>& features);

}  // namespace trepan::onto
