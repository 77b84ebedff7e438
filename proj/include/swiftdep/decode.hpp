#pragma once

#include <vector>

#include "swiftdep/scorer.hpp"

namespace swiftdep {

// Per-step accounting of how much work decoding did: one entry per
// scored state, counting unlabeled feasible transitions and labeled
// candidates actually evaluated.
struct StepTrace {
    std::vector<int> skeleton_counts;
    std::vector<int> labeled_counts;
    std::vector<Transition> transitions;

    long total_skeletons() const;
    long total_labeled() const;
};

struct ParseResult {
    ArcSet arcs;
    StepTrace trace;
    double logprob = 0.0;  // sum of chosen transition log-probabilities
};

// Argmax decoding with the canonical tie-break (Shift < Reduce < LArc <
// RArc, ascending k, ascending label index).
ParseResult greedy_parse(const Sentence& sentence, const ScorerModel& model, SystemId system);

enum class BeamNorm { None, Length };
BeamNorm beam_norm_from_name(const std::string& name);  // "none" | "length"

struct BeamResult {
    ArcSet arcs;
    std::vector<Transition> history;
    double winner_logprob = 0.0;  // accumulated log probability
    double winner_score = 0.0;    // after normalization
    // Work accounting: every beam item whose candidate distribution was
    // computed counts once, with its candidate totals.
    long scored_states = 0;
    long scored_skeletons = 0;
    long scored_labeled = 0;
};

// Step-synchronous beam search. Terminal items freeze and keep competing
// by accumulated log probability; every surviving live item proposes its
// top-beam_size labeled transitions, all proposals are scored on
// creation, and the pool is pruned back to beam_size. beam_size 1
// reproduces greedy_parse transition for transition.
BeamResult beam_parse(const Sentence& sentence, const ScorerModel& model, SystemId system,
                      int beam_size, BeamNorm norm = BeamNorm::Length);

}  // namespace swiftdep
