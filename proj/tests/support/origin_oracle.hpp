#pragma once

// Cross-checks a streamed decomposition against the sequence it claims to
// realize: each term's weight must equal the entry named by its origin, and
// every part must be consumed as a gap-free prefix (no entry twice).

#include <cmath>
#include <map>
#include <set>
#include <string>

#include "adm/carpenter.hpp"

namespace testkit {

struct OriginAudit {
  double max_weight_error = 0.0;
  bool prefixes = true;
  bool duplicates = false;
  std::map<adm::TermOrigin::Part, std::size_t> used;
};

inline OriginAudit audit_origins(const adm::SplitSeq& s, const adm::RankOneDecomp& d,
                                 const std::vector<adm::TermOrigin>& origins) {
  using Part = adm::TermOrigin::Part;
  OriginAudit a;
  std::map<Part, std::set<std::size_t>> seen;
  for (std::size_t i = 0; i < d.size() && i < origins.size(); ++i) {
    const auto& o = origins[i];
    double expect = 0.0;
    switch (o.part) {
      case Part::mu: expect = s.mu.at(o.index); break;
      case Part::lambda: expect = 1.0 - s.lambda.at(o.index); break;
      case Part::zero: expect = 0.0; break;
      case Part::one: expect = 1.0; break;
      case Part::xi: continue;
    }
    a.max_weight_error = std::max(a.max_weight_error, std::abs(d[i].weight - expect));
    if (!seen[o.part].insert(o.index).second) a.duplicates = true;
  }
  for (const auto& [part, idx] : seen) {
    a.used[part] = idx.size();
    if (!idx.empty() && *idx.rbegin() + 1 != idx.size()) a.prefixes = false;
  }
  return a;
}

}  // namespace testkit
