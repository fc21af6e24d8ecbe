#include "probranch/case_theory.hpp"

namespace probranch {

std::optional<CaseAssignment> assign_case(int schema_id,
                                          const SyntacticNode& head,
                                          const SyntacticNode& nonhead,
                                          Side nonhead_side) {
  if (nonhead.category != Category::N) return std::nullopt;
  CaseValue value = CaseValue::None;
  if (schema_id == 2 || schema_id == 3) {
    if (head.category == Category::V) value = CaseValue::Accusative;
    if (head.category == Category::P) value = CaseValue::Oblique;
  } else if (schema_id == 1) {
    if (head.category == Category::I) value = CaseValue::Nominative;
  }
  if (value == CaseValue::None) return std::nullopt;
  return CaseAssignment{head.head_word, head.category, head.head_index, value,
                        nonhead_side};
}

std::optional<CaseAssignment> assign_case(const ParseTree& branch) {
  if (branch.is_leaf()) return std::nullopt;
  Side nonhead = other_side(head_side(branch.schema_id));
  return assign_case(branch.schema_id, branch.head_daughter().node,
                     branch.nonhead_daughter().node, nonhead);
}

bool case_filter(const PhraseMarker& marker) {
  // Theta marking and case assignment both happen at the attachment branch,
  // so one pass over the branches suffices.
  for (const ParseTree* branch : marker.branches()) {
    if (!branch->theta_event) continue;
    const ThetaEvent& ev = *branch->theta_event;
    const ParseTree& receiver =
        ev.receiver == Side::Left ? *branch->left : *branch->right;
    const SyntacticNode& n = receiver.node;
    if (n.category != Category::N || !n.is_maximal()) continue;
    if (!branch->case_event || branch->case_event->receiver != ev.receiver) {
      return false;
    }
  }
  return true;
}

}  // namespace probranch
