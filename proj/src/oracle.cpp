#include "swiftdep/oracle.hpp"

#include <string>
#include <vector>

namespace swiftdep {

const char* variant_name(OracleVariant v) {
    switch (v) {
        case OracleVariant::Asd: return "asd";
        case OracleVariant::AeS: return "aeS";
        case OracleVariant::AeR: return "aeR";
        case OracleVariant::Ah: return "ah";
        case OracleVariant::Asw: return "asw";
    }
    return "?";
}

OracleVariant variant_from_name(const std::string& name) {
    if (name == "asd") return OracleVariant::Asd;
    if (name == "aeS" || name == "aes") return OracleVariant::AeS;
    if (name == "aeR" || name == "aer") return OracleVariant::AeR;
    if (name == "ah") return OracleVariant::Ah;
    if (name == "asw") return OracleVariant::Asw;
    throw ParseError("unknown oracle variant '" + name + "' (expected asd|aeS|aeR|ah|asw)");
}

SystemId variant_system(OracleVariant v) {
    switch (v) {
        case OracleVariant::Asd: return SystemId::ArcStandard;
        case OracleVariant::AeS:
        case OracleVariant::AeR: return SystemId::ArcEager;
        case OracleVariant::Ah: return SystemId::ArcHybrid;
        case OracleVariant::Asw: return SystemId::ArcSwift;
    }
    throw ContractError("unknown oracle variant");
}

namespace {

std::vector<int> gold_child_counts(const Sentence& gold) {
    std::vector<int> cnt(static_cast<size_t>(gold.size()) + 1, 0);
    for (const Token& t : gold.tokens) cnt[static_cast<size_t>(t.gold_head)]++;
    return cnt;
}

std::vector<int> attached_child_counts(const ParserState& s) {
    std::vector<int> cnt(static_cast<size_t>(s.n) + 1, 0);
    for (const StateArc& a : s.arcs) cnt[static_cast<size_t>(a.head)]++;
    return cnt;
}

int label_index(const LabelVocab& vocab, const std::string& label) {
    int idx = vocab.find(label);
    if (idx < 0) throw OracleError("gold label '" + label + "' is not in the vocabulary");
    return idx;
}

// All gold dependents of `token` already have their arc in the state.
bool children_complete(const ParserState& s, const Sentence& gold, int token) {
    return attached_child_counts(s)[static_cast<size_t>(token)] ==
           gold_child_counts(gold)[static_cast<size_t>(token)];
}

}  // namespace

Transition oracle_next(const ParserState& s, const Sentence& gold, OracleVariant variant,
                       const LabelVocab& vocab) {
    const SystemId system = variant_system(variant);
    if (is_terminal(s, system)) throw ContractError("oracle_next called on a terminal state");
    const int size = s.stack_size();
    const bool buf = !s.buffer_empty();
    const int b = s.buffer_front;
    auto head_of = [&](int tok) { return gold.token(tok).gold_head; };
    auto lab = [&](int tok) { return label_index(vocab, gold.token(tok).gold_label); };

    switch (variant) {
        case OracleVariant::Asd: {
            if (size >= 3 && head_of(s.stack_item(2)) == s.stack_item(1))
                return {TransitionKind::LeftArc, 0, lab(s.stack_item(2))};
            if (size >= 2) {
                int j = s.stack_item(1);
                // j must wait for all its dependents; popping early orphans them.
                if (head_of(j) == s.stack_item(2) && children_complete(s, gold, j))
                    return {TransitionKind::RightArc, 0, lab(j)};
            }
            if (buf) return {TransitionKind::Shift, 0, -1};
            break;
        }
        case OracleVariant::Ah: {
            if (buf && size >= 2 && head_of(s.stack_item(1)) == b)
                return {TransitionKind::LeftArc, 0, lab(s.stack_item(1))};
            if (size >= 2) {
                int j = s.stack_item(1);
                if (head_of(j) == s.stack_item(2) && children_complete(s, gold, j))
                    return {TransitionKind::RightArc, 0, lab(j)};
            }
            if (buf) return {TransitionKind::Shift, 0, -1};
            break;
        }
        case OracleVariant::AeS:
        case OracleVariant::AeR: {
            // Non-terminal arc-eager states always have a buffer.
            int top = s.stack_item(1);
            if (size >= 2 && !s.is_attached(top) && head_of(top) == b)
                return {TransitionKind::LeftArc, 0, lab(top)};
            if (head_of(b) == top) return {TransitionKind::RightArc, 0, lab(b)};
            if (size >= 2 && s.is_attached(top)) {
                bool reduce;
                if (variant == OracleVariant::AeR) {
                    // Earliest safe point: the top is attached and finished.
                    reduce = children_complete(s, gold, top);
                } else {
                    // Latest safe point: keep Shifting until the top blocks
                    // an arc between the buffer front and something below it.
                    reduce = false;
                    for (int d = 2; d <= size && !reduce; ++d) {
                        int x = s.stack_item(d);
                        if (head_of(b) == x || (x != 0 && head_of(x) == b)) reduce = true;
                    }
                }
                if (reduce) return {TransitionKind::Reduce, 0, -1};
            }
            return {TransitionKind::Shift, 0, -1};
        }
        case OracleVariant::Asw: {
            // Non-terminal arc-swift states always have a buffer. The root at
            // the stack bottom is never attached, so the scan always stops.
            int k_u = 0;
            for (int k = 1; k <= size; ++k) {
                if (!s.is_attached(s.stack_item(k))) {
                    k_u = k;
                    break;
                }
            }
            int x = s.stack_item(k_u);
            if (x != 0 && head_of(x) == b) return {TransitionKind::LeftArcK, k_u, lab(x)};
            for (int k = 1; k <= k_u; ++k)
                if (head_of(b) == s.stack_item(k)) return {TransitionKind::RightArcK, k, lab(b)};
            return {TransitionKind::Shift, 0, -1};
        }
    }
    throw OracleError("static oracle is stuck (stack " + std::to_string(size) + ", buffer at " +
                      std::to_string(b) + " of " + std::to_string(s.n) +
                      "); the gold tree is not derivable");
}

std::vector<Transition> oracle_sequence(const Sentence& gold, OracleVariant variant,
                                        const LabelVocab& vocab) {
    const SystemId system = variant_system(variant);
    const int n = gold.size();
    if (n < 1) throw ContractError("oracle_sequence requires a nonempty sentence");
    ParserState state = initial_state(n);
    std::vector<Transition> seq;
    // Every transition consumes a buffer token or pops the stack, so 2n+1
    // bounds any derivation; the slack only cushions contract bugs.
    const int max_steps = 4 * n + 8;
    while (!is_terminal(state, system)) {
        if (static_cast<int>(seq.size()) > max_steps)
            throw OracleError("oracle exceeded the step budget");
        Transition t = oracle_next(state, gold, variant, vocab);
        seq.push_back(t);
        state = apply(state, t, system);
    }
    ArcSet got = finalize(state, vocab);
    ArcSet want = gold_arcs(gold);
    for (int i = 0; i < n; ++i) {
        size_t idx = static_cast<size_t>(i);
        if (got.heads[idx] != want.heads[idx] || got.labels[idx] != want.labels[idx])
            throw OracleError(
                "oracle derivation does not reproduce the gold tree (non-projective input?)");
    }
    return seq;
}

std::vector<Transition> expand_swift_to_eager(const std::vector<Transition>& seq) {
    std::vector<Transition> out;
    for (const Transition& t : seq) {
        switch (t.kind) {
            case TransitionKind::Shift:
                out.push_back(t);
                break;
            case TransitionKind::LeftArcK:
            case TransitionKind::RightArcK: {
                for (int i = 1; i < t.depth; ++i) out.push_back({TransitionKind::Reduce, 0, -1});
                TransitionKind local = t.kind == TransitionKind::LeftArcK
                                           ? TransitionKind::LeftArc
                                           : TransitionKind::RightArc;
                out.push_back({local, 0, t.label});
                break;
            }
            default:
                throw ContractError("expand_swift_to_eager: input is not an arc-swift sequence");
        }
    }
    return out;
}

ArcSet replay(const std::vector<Transition>& seq, int n, SystemId system, const LabelVocab& vocab) {
    ParserState state = initial_state(n);
    for (const Transition& t : seq) state = apply(state, t, system);
    if (!is_terminal(state, system))
        throw ContractError("replayed sequence does not reach a terminal state");
    return finalize(state, vocab);
}

std::string format_transition_block(const std::vector<Transition>& seq, const LabelVocab& vocab) {
    std::string out;
    for (const Transition& t : seq) {
        out += format_transition(t, vocab);
        out += '\n';
    }
    return out;
}

}  // namespace swiftdep
