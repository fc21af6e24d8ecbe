#pragma once

#include <optional>

#include "probranch/model.hpp"

namespace probranch {

// One structural case assignment: V assigns accusative to its N complement,
// P assigns oblique to its N complement, finite I assigns nominative to its
// N specifier.
struct CaseAssignment {
  std::string assigner_word;
  Category assigner_category;
  int assigner_index;
  CaseValue value;
  Side receiver;

  bool operator==(const CaseAssignment&) const = default;
};

// Case assignment for a freshly licensed branch, given the schema and the
// two daughters. Nothing is assigned on adjunct branches.
std::optional<CaseAssignment> assign_case(int schema_id,
                                          const SyntacticNode& head,
                                          const SyntacticNode& nonhead,
                                          Side nonhead_side);

// Branch view of the same operation.
std::optional<CaseAssignment> assign_case(const ParseTree& branch);

// True iff every noun-headed maximal projection that bears a theta role in
// the marker received a case assignment. Contributes no probability; it only
// removes parses from the output set.
bool case_filter(const PhraseMarker& marker);

}  // namespace probranch
