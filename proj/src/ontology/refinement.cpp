#include <cmath>

#include "trepan/error.hpp"
#include "trepan/ontology.hpp"

namespace trepan::onto {

std::vector<std::size_t> downcov(const SubsumptionIndex& index, std::size_t c) {
  const std::size_t n = index.size();
  std::vector<std::size_t> out;
  for (std::size_t d = 0; d < n; ++d) {
    if (!index.subsumes(d, c)) continue;
    bool covered = true;
    for (std::size_t mid = 0; mid < n && covered; ++mid) {
      if (index.strictly_below(d, mid) && index.strictly_below(mid, c)) covered = false;
    }
    if (covered) out.push_back(d);
  }
  return out;
}

std::vector<std::size_t> subconcepts(const SubsumptionIndex& index, std::size_t c) {
  std::vector<std::uint8_t> seen(index.size(), 0);
  std::vector<std::size_t> frontier{c};
  seen[c] = 1;
  while (!frontier.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t x : frontier) {
      for (std::size_t d : downcov(index, x)) {
        if (!seen[d]) {
          seen[d] = 1;
          next.push_back(d);
        }
      }
    }
    frontier = std::move(next);
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i]) out.push_back(i);
  }
  return out;
}

namespace {

std::vector<ConceptExpr> to_exprs(const SubsumptionIndex& index, const std::vector<std::size_t>& ids) {
  std::vector<ConceptExpr> out;
  out.reserve(ids.size());
  for (std::size_t i : ids) out.push_back(index.members()[i]);
  return out;
}

}  // namespace

std::vector<ConceptExpr> downcov(const SubsumptionIndex& index, const ConceptExpr& c) {
  return to_exprs(index, downcov(index, index.require(c)));
}

std::vector<ConceptExpr> subconcepts(const SubsumptionIndex& index, const ConceptExpr& c) {
  return to_exprs(index, subconcepts(index, index.require(c)));
}

double information_content(const SubsumptionIndex& index, const std::optional<ConceptExpr>& c) {
  if (index.inconsistent()) throw InconsistentTBox();
  if (!c) return 0.0;
  auto id = index.find(*c);
  if (!id) return 0.0;
  const double below = static_cast<double>(subconcepts(index, *id).size());
  return 1.0 - std::log(below) / std::log(static_cast<double>(index.size()));
}

std::vector<double> feature_information_content(const SubsumptionIndex& index,
                                                const ConceptMapping& mapping,
                                                const std::vector<std::string>& features) {
  std::vector<double> out;
  out.reserve(features.size());
  for (const auto& f : features) {
    auto it = mapping.find(f);
    out.push_back(information_content(
        index, it == mapping.end() ? std::nullopt : std::optional<ConceptExpr>(it->second)));
  }
  return out;
}

}  // namespace trepan::onto
