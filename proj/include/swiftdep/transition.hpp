#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swiftdep/errors.hpp"
#include "swiftdep/treebank.hpp"

namespace swiftdep {

enum class SystemId { ArcStandard, ArcEager, ArcHybrid, ArcSwift };

const char* system_name(SystemId system);
SystemId system_from_name(const std::string& name);  // "asd", "ae", "ah", "asw"

enum class TransitionKind : uint8_t {
    Shift,
    Reduce,
    LeftArc,    // stack-local / stack-buffer left arc of the traditional systems
    RightArc,
    LeftArcK,   // non-local left arc reaching stack depth k
    RightArcK,
};

struct Transition {
    TransitionKind kind = TransitionKind::Shift;
    int depth = 0;   // k; only meaningful for LeftArcK / RightArcK
    int label = -1;  // index into a LabelVocab; -1 for unlabeled skeletons

    bool induces_arc() const {
        return kind != TransitionKind::Shift && kind != TransitionKind::Reduce;
    }
    bool operator==(const Transition& o) const {
        return kind == o.kind && depth == o.depth && label == o.label;
    }
};

// Canonical order: Shift < Reduce < LeftArc < RightArc, then ascending k,
// then ascending label. Used for tie-breaking in decoding.
bool transition_less(const Transition& a, const Transition& b);

// SHIFT / REDUCE / LARC(label) / RARC(label) / LARC[k](label) / RARC[k](label)
std::string format_transition(const Transition& t, const LabelVocab& vocab);
Transition parse_transition(const std::string& text, const LabelVocab& vocab);

struct StateArc {
    int head = 0;
    int dep = 0;
    int label = -1;
};

// Immutable snapshot of (stack, buffer, arcs). apply() copies; states can
// be branched freely during beam search.
struct ParserState {
    std::vector<int> stack;         // bottom -> top; stack[0] is the root (index 0)
    int buffer_front = 1;           // leftmost unconsumed token; > n when empty
    int n = 0;                      // sentence length
    std::vector<StateArc> arcs;
    std::vector<uint8_t> attached;  // indexed by token id, [0..n]; attached[0] stays false

    bool buffer_empty() const { return buffer_front > n; }
    int stack_size() const { return static_cast<int>(stack.size()); }
    // 1-based from the top: stack_item(1) is the top.
    int stack_item(int k) const { return stack[stack.size() - static_cast<size_t>(k)]; }
    bool is_attached(int token) const { return attached[static_cast<size_t>(token)] != 0; }
};

ParserState initial_state(int n);

// Unlabeled transition skeletons whose preconditions hold, in canonical order.
std::vector<Transition> feasible(const ParserState& state, SystemId system);

// Returns the rewritten state; throws ContractError naming the failed
// precondition if t is not feasible. The input state is never mutated.
ParserState apply(const ParserState& state, const Transition& t, SystemId system);

bool is_terminal(const ParserState& state, SystemId system);

// Requires a terminal state. Any still-unattached token is given head 0
// with fallback_label (possible only under non-oracle decoding).
ArcSet finalize(const ParserState& state, const LabelVocab& vocab,
                const std::string& fallback_label = "root");

}  // namespace swiftdep
