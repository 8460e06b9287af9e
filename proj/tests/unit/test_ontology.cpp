#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "brute_el.hpp"
#include "fixtures.hpp"
#include "trepan/error.hpp"
#include "trepan/ontology.hpp"

using namespace trepan;
using namespace trepan::onto;
using trepan::testing::data_path;

namespace {

ConceptExpr A(const std::string& n) { return ConceptExpr::atom(n); }

const SubsumptionIndex& applicant() {
  static const TBox tbox = load_tbox(data_path("ontologies/applicant.onto"));
  static const SubsumptionIndex index = classify(tbox);
  return index;
}

bool subsumed(const SubsumptionIndex& idx, const ConceptExpr& a, const ConceptExpr& b) {
  return idx.subsumes(idx.require(a), idx.require(b));
}

std::set<ConceptExpr> as_set(const std::vector<ConceptExpr>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST(ConceptExpr, ConjunctionIsFlatSortedAndDeduplicated) {
  auto c1 = ConceptExpr::conjunction({A("B"), ConceptExpr::conjunction({A("A"), A("B")}), A("C")});
  auto c2 = ConceptExpr::conjunction({A("C"), A("A"), A("B")});
  EXPECT_EQ(c1, c2);
  ASSERT_EQ(c1.conjuncts().size(), 3u);
  EXPECT_EQ(c1.conjuncts()[0], A("A"));
  EXPECT_EQ(ConceptExpr::conjunction({A("X"), A("X")}), A("X"));
  EXPECT_EQ(ConceptExpr::conjunction({}), ConceptExpr::top());
}

TEST(ConceptExpr, VariantOrder) {
  EXPECT_LT(ConceptExpr::top(), ConceptExpr::bottom());
  EXPECT_LT(ConceptExpr::bottom(), A("A"));
  EXPECT_LT(A("Z"), ConceptExpr::exists("r", A("A")));
  EXPECT_LT(ConceptExpr::exists("r", A("A")), ConceptExpr::conjunction({A("A"), A("B")}));
  EXPECT_LT(A("Apple"), A("Banana"));
}

TEST(ConceptExpr, ToStringRoundTrips) {
  TBox empty;
  for (const auto& c : {ConceptExpr::conjunction({A("Person"), ConceptExpr::exists("hasApplied", A("Loan"))}),
                        ConceptExpr::exists("r", ConceptExpr::conjunction({A("A"), A("B")})),
                        ConceptExpr::exists("r", ConceptExpr::exists("s", ConceptExpr::top()))}) {
    EXPECT_EQ(parse_concept(c.to_string(), empty), c) << c.to_string();
  }
}

TEST(Parser, SingleInclusion) {
  auto t = parse_tbox("Male SUBCLASSOF Gender");
  ASSERT_EQ(t.gcis.size(), 1u);
  EXPECT_EQ(t.gcis[0].lhs, A("Male"));
  EXPECT_EQ(t.gcis[0].rhs, A("Gender"));
}

TEST(Parser, EmptyInputIsEmptyTBox) {
  auto t = parse_tbox("");
  EXPECT_TRUE(t.gcis.empty());
  EXPECT_TRUE(parse_tbox("# only a comment\n\n").gcis.empty());
}

TEST(Parser, ConjunctionWithExistential) {
  auto t = parse_tbox("LoanApplicant SUBCLASSOF Person AND EXISTS hasApplied.Loan");
  ASSERT_EQ(t.gcis.size(), 1u);
  EXPECT_EQ(t.gcis[0].rhs, ConceptExpr::conjunction({A("Person"), ConceptExpr::exists("hasApplied", A("Loan"))}));
  EXPECT_TRUE(t.roles.count("hasApplied"));
}

TEST(Parser, ParenthesesAndNestedExistentials) {
  auto t = parse_tbox("A SUBCLASSOF EXISTS r.(B AND EXISTS s.C)");
  EXPECT_EQ(t.gcis[0].rhs,
            ConceptExpr::exists("r", ConceptExpr::conjunction({A("B"), ConceptExpr::exists("s", A("C"))})));
}

TEST(Parser, DomainAndRange) {
  auto t = parse_tbox("DOMAIN hasApplied = Person\nRANGE hasApplied = Loan\n");
  EXPECT_EQ(t.domains.at("hasApplied"), A("Person"));
  EXPECT_EQ(t.ranges.at("hasApplied"), A("Loan"));
  EXPECT_TRUE(t.gcis.empty());
}

TEST(Parser, SyntaxErrorCarriesPosition) {
  try {
    parse_tbox("A SUBCLASSOF B\nA SUBCLASSOF AND\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_GT(e.column(), 1u);
  }
  EXPECT_THROW(parse_tbox("A SUBCLASSOF B C"), ParseError);
  EXPECT_THROW(parse_tbox("A SUBCLASSOF B $"), ParseError);
  EXPECT_THROW(parse_tbox("A B"), ParseError);
}

TEST(Parser, UndeclaredNamesWarnOrFail) {
  auto t = parse_tbox("A SUBCLASSOF B");
  EXPECT_EQ(t.warnings.size(), 2u);
  ParseOptions strict;
  strict.require_declarations = true;
  EXPECT_THROW(parse_tbox("A SUBCLASSOF B", strict), ParseError);
  EXPECT_NO_THROW(parse_tbox("CONCEPT A\nCONCEPT B\nA SUBCLASSOF B", strict));
}

TEST(Parser, DuplicateDeclarationsAndNamespaceClash) {
  EXPECT_THROW(parse_tbox("CONCEPT A\nCONCEPT A\n"), ParseError);
  EXPECT_THROW(parse_tbox("ROLE r\nROLE r\n"), ParseError);
  EXPECT_THROW(parse_tbox("ROLE r\nr SUBCLASSOF B\n"), ParseError);
  EXPECT_THROW(parse_tbox("DOMAIN r = A\nDOMAIN r = B\n"), ParseError);
}

TEST(Parser, MissingFileIsNotFound) {
  try {
    load_tbox("/nonexistent/x.onto");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotFound);
  }
}

TEST(EnumerateSub, SingleAtomicInclusion) {
  auto sub = enumerate_sub(parse_tbox("A SUBCLASSOF B"));
  EXPECT_EQ(as_set(sub), (std::set<ConceptExpr>{A("A"), A("B"), ConceptExpr::top(), ConceptExpr::bottom()}));
}

TEST(EnumerateSub, ExistentialFiller) {
  auto sub = enumerate_sub(parse_tbox("A SUBCLASSOF EXISTS r.B"));
  EXPECT_EQ(sub.size(), 5u);
  EXPECT_TRUE(as_set(sub).count(ConceptExpr::exists("r", A("B"))));
}

TEST(EnumerateSub, Applicant) {
  auto sub = as_set(applicant().members());
  const auto conj = ConceptExpr::conjunction({A("Person"), ConceptExpr::exists("hasApplied", A("Loan"))});
  for (const auto& c : {A("Entity"), A("LoanApplicant"), conj, ConceptExpr::exists("hasApplied", A("Loan")),
                        ConceptExpr::top(), ConceptExpr::bottom()}) {
    EXPECT_TRUE(sub.count(c)) << c.to_string();
  }
  // 11 atoms, the existential, the conjunction, TOP and BOTTOM; TOP is also
  // named by the first axiom, so 14 distinct members.
  EXPECT_EQ(sub.size(), 14u);
}

TEST(Classify, ApplicantChains) {
  const auto& idx = applicant();
  EXPECT_TRUE(subsumed(idx, A("Male"), A("Entity")));
  EXPECT_TRUE(subsumed(idx, A("LoanApplicant"), A("PhysicalObject")));
  EXPECT_FALSE(subsumed(idx, A("Entity"), A("Male")));
  EXPECT_FALSE(subsumed(idx, A("Male"), A("Female")));
  EXPECT_FALSE(idx.inconsistent());
}

TEST(Classify, DomainAxiomIsUsed) {
  const auto& idx = applicant();
  EXPECT_TRUE(subsumed(idx, ConceptExpr::exists("hasApplied", A("Loan")), A("Person")));
  EXPECT_TRUE(subsumed(idx, ConceptExpr::exists("hasApplied", A("Loan")), A("Entity")));
}

TEST(Classify, RangeAxiomIsIgnored) {
  auto idx = classify(parse_tbox("A SUBCLASSOF EXISTS r.B\nRANGE r = C\nC SUBCLASSOF D\n"));
  EXPECT_FALSE(idx.subsumes(idx.require(A("B")), idx.require(A("C"))));
}

TEST(Classify, ExtremesForEveryMember) {
  const auto& idx = applicant();
  const auto top = idx.require(ConceptExpr::top()), bot = idx.require(ConceptExpr::bottom());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    EXPECT_TRUE(idx.subsumes(bot, i));
    EXPECT_TRUE(idx.subsumes(i, top));
  }
}

TEST(Classify, PreorderLaws) {
  const auto& idx = applicant();
  const auto n = idx.size();
  for (std::size_t a = 0; a < n; ++a) {
    EXPECT_TRUE(idx.subsumes(a, a));
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (idx.subsumes(a, b) && idx.subsumes(b, c)) EXPECT_TRUE(idx.subsumes(a, c));
  }
}

TEST(Classify, ConjunctionOnTheLeft) {
  auto idx = classify(parse_tbox("X SUBCLASSOF A\nX SUBCLASSOF B\nA AND B SUBCLASSOF C\n"));
  EXPECT_TRUE(subsumed(idx, A("X"), A("C")));
  EXPECT_FALSE(subsumed(idx, A("A"), A("C")));
}

TEST(Classify, ExistentialPropagation) {
  auto idx = classify(parse_tbox("A SUBCLASSOF EXISTS r.B\nB SUBCLASSOF C\nEXISTS r.C SUBCLASSOF D\n"));
  EXPECT_TRUE(subsumed(idx, A("A"), A("D")));
}

TEST(Classify, BottomPropagatesThroughRoles) {
  auto idx = classify(parse_tbox("A SUBCLASSOF EXISTS r.B\nB SUBCLASSOF BOTTOM\nC SUBCLASSOF D\n"));
  EXPECT_TRUE(subsumed(idx, A("A"), ConceptExpr::bottom()));
  EXPECT_TRUE(subsumed(idx, A("A"), A("C")));
  EXPECT_FALSE(idx.inconsistent());
}

TEST(Classify, InconsistentTBoxIsFlagged) {
  auto idx = classify(parse_tbox("TOP SUBCLASSOF A\nA SUBCLASSOF BOTTOM\n"));
  EXPECT_TRUE(idx.inconsistent());
  EXPECT_THROW(information_content(idx, A("A")), InconsistentTBox);
}

TEST(Classify, EquivalentMembersAreKept) {
  auto idx = classify(parse_tbox("A SUBCLASSOF B\nB SUBCLASSOF A\nC SUBCLASSOF A\n"));
  EXPECT_TRUE(idx.equivalent(idx.require(A("A")), idx.require(A("B"))));
  EXPECT_EQ(idx.size(), 5u);
  // Neither blocks the other, and C is a direct specialization of both.
  EXPECT_EQ(as_set(downcov(idx, A("A"))), (std::set<ConceptExpr>{A("A"), A("B"), A("C")}));
}

TEST(Classify, UnknownConceptSuggestsNearMatches) {
  try {
    applicant().require(A("Lon"));
    FAIL();
  } catch (const UnknownConcept& e) {
    EXPECT_NE(std::string(e.what()).find("Loan"), std::string::npos);
  }
}

TEST(Classify, AgreesWithBruteForceOnRandomTBoxes) {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 60; ++trial) {
    const auto t = trepan::testing::random_normal_tbox(rng);
    const auto ref = trepan::testing::brute_force_closure(t);
    const auto idx = classify(parse_tbox(t.source()));
    for (std::size_t a = 0; a < t.concepts(); ++a) {
      auto ia = idx.find(a < 2 ? (a == 0 ? ConceptExpr::top() : ConceptExpr::bottom()) : A(t.name(a)));
      if (!ia) continue;
      for (std::size_t b = 0; b < t.concepts(); ++b) {
        auto ib = idx.find(b < 2 ? (b == 0 ? ConceptExpr::top() : ConceptExpr::bottom()) : A(t.name(b)));
        if (!ib) continue;
        ASSERT_EQ(idx.subsumes(*ia, *ib), ref[a][b])
            << "trial " << trial << ": " << t.name(a) << " vs " << t.name(b) << "\n" << t.source();
      }
    }
  }
}

TEST(Refinement, ApplicantDownCov) {
  const auto& idx = applicant();
  auto entity = as_set(downcov(idx, A("Entity")));
  for (const auto& c : {A("Entity"), A("AbstractObject"), A("PhysicalObject"), A("Quality")}) {
    EXPECT_TRUE(entity.count(c)) << c.to_string();
  }
  EXPECT_EQ(as_set(downcov(idx, A("LoanApplicant"))), (std::set<ConceptExpr>{A("LoanApplicant"), ConceptExpr::bottom()}));
  EXPECT_EQ(as_set(downcov(idx, ConceptExpr::bottom())), (std::set<ConceptExpr>{ConceptExpr::bottom()}));
}

TEST(Refinement, SubconceptsExamples) {
  const auto& idx = applicant();
  EXPECT_EQ(subconcepts(idx, A("LoanApplicant")).size(), 2u);
  EXPECT_EQ(subconcepts(idx, ConceptExpr::bottom()).size(), 1u);
  EXPECT_EQ(as_set(subconcepts(idx, A("Gender"))),
            (std::set<ConceptExpr>{A("Gender"), A("Male"), A("Female"), ConceptExpr::bottom()}));
  EXPECT_EQ(subconcepts(idx, A("Entity")).size(), 13u);
}

TEST(Refinement, UnknownConceptRejected) {
  EXPECT_THROW(downcov(applicant(), A("Nope")), UnknownConcept);
  EXPECT_THROW(subconcepts(applicant(), A("Nope")), UnknownConcept);
}

TEST(Refinement, DownCovSoundnessAndFixpoint) {
  const auto& idx = applicant();
  for (std::size_t c = 0; c < idx.size(); ++c) {
    for (std::size_t d : downcov(idx, c)) {
      EXPECT_TRUE(idx.subsumes(d, c));
      for (std::size_t m = 0; m < idx.size(); ++m) {
        EXPECT_FALSE(idx.strictly_below(d, m) && idx.strictly_below(m, c));
      }
    }
    // subconcepts equals brute-force reachability: everything below c.
    auto sc = subconcepts(idx, c);
    std::set<std::size_t> got(sc.begin(), sc.end()), want;
    for (std::size_t d = 0; d < idx.size(); ++d)
      if (idx.subsumes(d, c)) want.insert(d);
    EXPECT_EQ(got, want);
    for (std::size_t d : sc)
      for (std::size_t e : downcov(idx, d)) EXPECT_TRUE(got.count(e));
  }
}

TEST(InformationContent, ApplicantValues) {
  const auto& idx = applicant();
  EXPECT_NEAR(information_content(idx, A("LoanApplicant")), 1.0 - std::log(2.0) / std::log(14.0), 1e-12);
  EXPECT_NEAR(information_content(idx, A("LoanApplicant")), 0.73, 0.02);
  EXPECT_LE(information_content(idx, A("Entity")), 0.06);
  EXPECT_DOUBLE_EQ(information_content(idx, ConceptExpr::bottom()), 1.0);
  EXPECT_DOUBLE_EQ(information_content(idx, A("Unmapped")), 0.0);
  EXPECT_DOUBLE_EQ(information_content(idx, std::nullopt), 0.0);
  EXPECT_DOUBLE_EQ(information_content(idx, ConceptExpr::top()), 0.0);
}

TEST(InformationContent, MonotoneAndInRange) {
  const auto& idx = applicant();
  for (std::size_t a = 0; a < idx.size(); ++a) {
    const double ia = information_content(idx, idx.members()[a]);
    EXPECT_GE(ia, 0.0);
    EXPECT_LE(ia, 1.0);
    for (std::size_t b = 0; b < idx.size(); ++b) {
      if (idx.subsumes(a, b)) EXPECT_GE(ia, information_content(idx, idx.members()[b]));
    }
  }
}

TEST(Mapping, ParseAndFeatureTable) {
  const TBox tbox = load_tbox(data_path("ontologies/applicant.onto"));
  auto m = parse_mapping("gender -> Gender\n# comment\nlimit -> Loan\n", tbox);
  EXPECT_EQ(m.at("gender"), A("Gender"));
  auto ic = feature_information_content(applicant(), m, {"gender", "income", "limit"});
  ASSERT_EQ(ic.size(), 3u);
  EXPECT_NEAR(ic[0], 1.0 - std::log(4.0) / std::log(14.0), 1e-12);
  EXPECT_DOUBLE_EQ(ic[1], 0.0);
  EXPECT_THROW(parse_mapping("a -> A\na -> B\n", tbox), ParseError);
  EXPECT_THROW(parse_mapping("a A\n", tbox), ParseError);
}
