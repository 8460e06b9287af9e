#include <algorithm>

#include "trepan/ontology.hpp"

namespace trepan::onto {

ConceptExpr ConceptExpr::top() { return ConceptExpr(Kind::Top, {}, {}); }

ConceptExpr ConceptExpr::bottom() { return ConceptExpr(Kind::Bottom, {}, {}); }

ConceptExpr ConceptExpr::atom(std::string name) {
  return ConceptExpr(Kind::Atom, std::move(name), {});
}

ConceptExpr ConceptExpr::exists(std::string role, ConceptExpr filler) {
  std::vector<ConceptExpr> args;
  args.push_back(std::move(filler));
  return ConceptExpr(Kind::Existential, std::move(role), std::move(args));
}

ConceptExpr ConceptExpr::conjunction(std::vector<ConceptExpr> operands) {
  std::vector<ConceptExpr> flat;
  flat.reserve(operands.size());
  for (auto& op : operands) {
    if (op.kind_ == Kind::Conjunction) {
      for (auto& inner : op.args_) flat.push_back(std::move(inner));
    } else {
      flat.push_back(std::move(op));
    }
  }
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  if (flat.empty()) return top();
  if (flat.size() == 1) return std::move(flat.front());
  return ConceptExpr(Kind::Conjunction, {}, std::move(flat));
}

std::strong_ordering operator<=>(const ConceptExpr& a, const ConceptExpr& b) {
  if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
  switch (a.kind_) {
    case ConceptExpr::Kind::Top:
    case ConceptExpr::Kind::Bottom:
      return std::strong_ordering::equal;
    case ConceptExpr::Kind::Atom:
      return a.name_.compare(b.name_) <=> 0;
    case ConceptExpr::Kind::Existential:
      if (auto c = a.name_.compare(b.name_) <=> 0; c != 0) return c;
      return a.args_.front() <=> b.args_.front();
    case ConceptExpr::Kind::Conjunction:
      return std::lexicographical_compare_three_way(a.args_.begin(), a.args_.end(),
                                                    b.args_.begin(), b.args_.end());
  }
  return std::strong_ordering::equal;
}

std::string ConceptExpr::to_string() const {
  switch (kind_) {
    case Kind::Top:
      return "TOP";
    case Kind::Bottom:
      return "BOTTOM";
    case Kind::Atom:
      return name_;
    case Kind::Existential: {
      const auto& f = args_.front();
      if (f.kind_ == Kind::Conjunction) return "EXISTS " + name_ + ".(" + f.to_string() + ")";
      return "EXISTS " + name_ + "." + f.to_string();
    }
    case Kind::Conjunction: {
      std::string out;
      for (std::size_t i = 0; i < args_.size(); ++i) {
        if (i) out += " AND ";
        out += args_[i].to_string();
      }
      return out;
    }
  }
  return {};
}

namespace {

void collect_sub(const ConceptExpr& c, std::set<ConceptExpr>& out) {
  if (!out.insert(c).second) return;
  if (c.kind() == ConceptExpr::Kind::Existential) {
    collect_sub(c.filler(), out);
  } else if (c.kind() == ConceptExpr::Kind::Conjunction) {
    for (const auto& op : c.conjuncts()) collect_sub(op, out);
  }
}

}  // namespace

std::vector<ConceptExpr> enumerate_sub(const TBox& tbox) {
  std::set<ConceptExpr> all{ConceptExpr::top(), ConceptExpr::bottom()};
  for (const auto& gci : tbox.gcis) {
    collect_sub(gci.lhs, all);
    collect_sub(gci.rhs, all);
  }
  return {all.begin(), all.end()};
}

}  // namespace trepan::onto
