#pragma once

#include <string>
#include <vector>

#include "swiftdep/transition.hpp"
#include "swiftdep/treebank.hpp"

namespace swiftdep {

// aeS / aeR share arc-eager mechanics and differ only in whether the
// Shift-vs-Reduce ambiguity is resolved toward Shift or Reduce.
enum class OracleVariant { Asd, AeS, AeR, Ah, Asw };

const char* variant_name(OracleVariant v);
OracleVariant variant_from_name(const std::string& name);
SystemId variant_system(OracleVariant v);

// Next transition of the static oracle. `state` must be reachable by this
// oracle on the (projective) gold tree and non-terminal. The returned
// transition carries the gold label for arc-inducing kinds.
Transition oracle_next(const ParserState& state, const Sentence& gold, OracleVariant variant,
                       const LabelVocab& vocab);

// Full derivation; replaying it from initial_state reproduces the gold
// arcs exactly. Throws OracleError on non-projective input.
std::vector<Transition> oracle_sequence(const Sentence& gold, OracleVariant variant,
                                        const LabelVocab& vocab);

// LArc[k] -> (k-1) Reduce + LArc, RArc[k] -> (k-1) Reduce + RArc,
// Shift -> Shift. Throws ContractError on non-arc-swift input kinds.
std::vector<Transition> expand_swift_to_eager(const std::vector<Transition>& seq);

// Replays a transition sequence and returns the finalized arcs.
ArcSet replay(const std::vector<Transition>& seq, int n, SystemId system, const LabelVocab& vocab);

std::string format_transition_block(const std::vector<Transition>& seq, const LabelVocab& vocab);

}  // namespace swiftdep
