#include "swiftdep/transition.hpp"

#include <algorithm>
#include <sstream>

namespace swiftdep {

const char* system_name(SystemId system) {
    switch (system) {
        case SystemId::ArcStandard: return "asd";
        case SystemId::ArcEager: return "ae";
        case SystemId::ArcHybrid: return "ah";
        case SystemId::ArcSwift: return "asw";
    }
    return "?";
}

SystemId system_from_name(const std::string& name) {
    if (name == "asd") return SystemId::ArcStandard;
    if (name == "ae") return SystemId::ArcEager;
    if (name == "ah") return SystemId::ArcHybrid;
    if (name == "asw") return SystemId::ArcSwift;
    throw ParseError("unknown transition system '" + name + "' (expected asd|ae|ah|asw)");
}

namespace {

int kind_rank(TransitionKind k) {
    switch (k) {
        case TransitionKind::Shift: return 0;
        case TransitionKind::Reduce: return 1;
        case TransitionKind::LeftArc:
        case TransitionKind::LeftArcK: return 2;
        case TransitionKind::RightArc:
        case TransitionKind::RightArcK: return 3;
    }
    return 4;
}

}  // namespace

bool transition_less(const Transition& a, const Transition& b) {
    int ra = kind_rank(a.kind), rb = kind_rank(b.kind);
    if (ra != rb) return ra < rb;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.label < b.label;
}

std::string format_transition(const Transition& t, const LabelVocab& vocab) {
    auto label = [&]() { return t.label >= 0 ? vocab.name(t.label) : std::string("_"); };
    switch (t.kind) {
        case TransitionKind::Shift: return "SHIFT";
        case TransitionKind::Reduce: return "REDUCE";
        case TransitionKind::LeftArc: return "LARC(" + label() + ")";
        case TransitionKind::RightArc: return "RARC(" + label() + ")";
        case TransitionKind::LeftArcK:
            return "LARC[" + std::to_string(t.depth) + "](" + label() + ")";
        case TransitionKind::RightArcK:
            return "RARC[" + std::to_string(t.depth) + "](" + label() + ")";
    }
    throw ContractError("unknown transition kind");
}

Transition parse_transition(const std::string& text, const LabelVocab& vocab) {
    if (text == "SHIFT") return {TransitionKind::Shift, 0, -1};
    if (text == "REDUCE") return {TransitionKind::Reduce, 0, -1};
    auto fail = [&]() -> Transition { throw ParseError("malformed transition '" + text + "'"); };
    bool left = text.rfind("LARC", 0) == 0;
    bool right = text.rfind("RARC", 0) == 0;
    if (!left && !right) return fail();
    size_t pos = 4;
    int depth = 0;
    bool has_depth = pos < text.size() && text[pos] == '[';
    if (has_depth) {
        size_t close = text.find(']', pos);
        if (close == std::string::npos) return fail();
        depth = std::stoi(text.substr(pos + 1, close - pos - 1));
        pos = close + 1;
    }
    if (pos >= text.size() || text[pos] != '(' || text.back() != ')') return fail();
    std::string label = text.substr(pos + 1, text.size() - pos - 2);
    Transition t;
    t.kind = has_depth ? (left ? TransitionKind::LeftArcK : TransitionKind::RightArcK)
                       : (left ? TransitionKind::LeftArc : TransitionKind::RightArc);
    t.depth = depth;
    t.label = label == "_" ? -1 : [&]() {
        int idx = vocab.find(label);
        if (idx < 0) throw ParseError("unknown label '" + label + "'");
        return idx;
    }();
    return t;
}

ParserState initial_state(int n) {
    if (n < 1) throw ContractError("initial_state requires n >= 1");
    ParserState s;
    s.stack = {0};
    s.buffer_front = 1;
    s.n = n;
    s.attached.assign(static_cast<size_t>(n) + 1, 0);
    return s;
}

namespace {

void push_feasible_swift(const ParserState& s, std::vector<Transition>& out) {
    if (s.buffer_empty()) return;
    out.push_back({TransitionKind::Shift, 0, -1});
    // Scan from the top while items are attached; the first unattached item
    // is the only LArc candidate and the scan stops there.
    const int size = s.stack_size();
    int k = 1;
    std::vector<Transition> rarcs;
    for (; k <= size; ++k) {
        int item = s.stack_item(k);
        rarcs.push_back({TransitionKind::RightArcK, k, -1});
        if (!s.is_attached(item)) {
            if (item != 0) out.push_back({TransitionKind::LeftArcK, k, -1});
            break;
        }
    }
    out.insert(out.end(), rarcs.begin(), rarcs.end());
}

}  // namespace

std::vector<Transition> feasible(const ParserState& s, SystemId system) {
    std::vector<Transition> out;
    const bool buf = !s.buffer_empty();
    const int size = s.stack_size();
    switch (system) {
        case SystemId::ArcStandard:
            if (buf) out.push_back({TransitionKind::Shift, 0, -1});
            if (size >= 3) out.push_back({TransitionKind::LeftArc, 0, -1});  // popped second item must not be root
            if (size >= 2) out.push_back({TransitionKind::RightArc, 0, -1});
            break;
        case SystemId::ArcHybrid:
            if (buf) out.push_back({TransitionKind::Shift, 0, -1});
            if (buf && size >= 2) out.push_back({TransitionKind::LeftArc, 0, -1});
            if (size >= 2) out.push_back({TransitionKind::RightArc, 0, -1});
            break;
        case SystemId::ArcEager:
            if (buf) out.push_back({TransitionKind::Shift, 0, -1});
            if (size >= 2 && s.is_attached(s.stack_item(1)))
                out.push_back({TransitionKind::Reduce, 0, -1});
            if (buf && size >= 2 && !s.is_attached(s.stack_item(1)))
                out.push_back({TransitionKind::LeftArc, 0, -1});
            if (buf) out.push_back({TransitionKind::RightArc, 0, -1});
            break;
        case SystemId::ArcSwift:
            push_feasible_swift(s, out);
            break;
    }
    std::sort(out.begin(), out.end(), transition_less);
    return out;
}

namespace {

[[noreturn]] void contract_fail(const char* system, const char* what) {
    throw ContractError(std::string(system) + ": " + what);
}

void add_arc(ParserState& s, int head, int dep, int label, const char* system) {
    if (dep == 0) contract_fail(system, "root can never receive a head");
    if (s.is_attached(dep)) contract_fail(system, "token already has a head");
    s.arcs.push_back({head, dep, label});
    s.attached[static_cast<size_t>(dep)] = 1;
}

}  // namespace

ParserState apply(const ParserState& state, const Transition& t, SystemId system) {
    ParserState s = state;  // copy-on-apply; callers may branch freely
    const int size = s.stack_size();
    const bool buf = !s.buffer_empty();

    switch (system) {
        case SystemId::ArcStandard: {
            const char* name = "arc-standard";
            switch (t.kind) {
                case TransitionKind::Shift:
                    if (!buf) contract_fail(name, "Shift requires a nonempty buffer");
                    s.stack.push_back(s.buffer_front++);
                    return s;
                case TransitionKind::LeftArc: {
                    if (size < 3) contract_fail(name, "LArc would pop the root");
                    int j = s.stack_item(1), i = s.stack_item(2);
                    add_arc(s, j, i, t.label, name);
                    s.stack.erase(s.stack.end() - 2);
                    return s;
                }
                case TransitionKind::RightArc: {
                    if (size < 2) contract_fail(name, "RArc requires two stack items");
                    int j = s.stack_item(1), i = s.stack_item(2);
                    add_arc(s, i, j, t.label, name);
                    s.stack.pop_back();
                    return s;
                }
                default: contract_fail(name, "transition kind not in this system");
            }
        }
        case SystemId::ArcHybrid: {
            const char* name = "arc-hybrid";
            switch (t.kind) {
                case TransitionKind::Shift:
                    if (!buf) contract_fail(name, "Shift requires a nonempty buffer");
                    s.stack.push_back(s.buffer_front++);
                    return s;
                case TransitionKind::LeftArc: {
                    if (size < 2) contract_fail(name, "LArc would pop the root");
                    if (!buf) contract_fail(name, "LArc requires a nonempty buffer");
                    int i = s.stack_item(1);
                    add_arc(s, s.buffer_front, i, t.label, name);
                    s.stack.pop_back();
                    return s;
                }
                case TransitionKind::RightArc: {
                    if (size < 2) contract_fail(name, "RArc requires two stack items");
                    int j = s.stack_item(1), i = s.stack_item(2);
                    add_arc(s, i, j, t.label, name);
                    s.stack.pop_back();
                    return s;
                }
                default: contract_fail(name, "transition kind not in this system");
            }
        }
        case SystemId::ArcEager: {
            const char* name = "arc-eager";
            switch (t.kind) {
                case TransitionKind::Shift:
                    if (!buf) contract_fail(name, "Shift requires a nonempty buffer");
                    s.stack.push_back(s.buffer_front++);
                    return s;
                case TransitionKind::LeftArc: {
                    if (size < 2) contract_fail(name, "LArc would pop the root");
                    if (!buf) contract_fail(name, "LArc requires a nonempty buffer");
                    int i = s.stack_item(1);
                    if (s.is_attached(i)) contract_fail(name, "LArc requires an unattached stack top");
                    add_arc(s, s.buffer_front, i, t.label, name);
                    s.stack.pop_back();
                    return s;
                }
                case TransitionKind::RightArc: {
                    if (!buf) contract_fail(name, "RArc requires a nonempty buffer");
                    int i = s.stack_item(1);
                    add_arc(s, i, s.buffer_front, t.label, name);
                    s.stack.push_back(s.buffer_front++);
                    return s;
                }
                case TransitionKind::Reduce: {
                    if (size < 2) contract_fail(name, "Reduce would pop the root");
                    if (!s.is_attached(s.stack_item(1)))
                        contract_fail(name, "Reduce requires an attached stack top");
                    s.stack.pop_back();
                    return s;
                }
                default: contract_fail(name, "transition kind not in this system");
            }
        }
        case SystemId::ArcSwift: {
            const char* name = "arc-swift";
            const int k = t.depth;
            if (t.kind != TransitionKind::LeftArcK && t.kind != TransitionKind::RightArcK) {
                if (t.kind == TransitionKind::Shift) {
                    if (!buf) contract_fail(name, "Shift requires a nonempty buffer");
                    s.stack.push_back(s.buffer_front++);
                    return s;
                }
                contract_fail(name, "transition kind not in this system");
            }
            if (!buf) contract_fail(name, "arc transitions require a nonempty buffer");
            if (k < 1 || k > size) contract_fail(name, "k exceeds the stack");
            for (int d = 1; d < k; ++d)
                if (!s.is_attached(s.stack_item(d)))
                    contract_fail(name, "items above the k-th must already be attached");
            int target = s.stack_item(k);
            if (t.kind == TransitionKind::LeftArcK) {
                if (target == 0) contract_fail(name, "LArc[k] cannot target the root");
                if (s.is_attached(target)) contract_fail(name, "LArc[k] requires an unattached target");
                add_arc(s, s.buffer_front, target, t.label, name);
                s.stack.resize(s.stack.size() - static_cast<size_t>(k));
            } else {
                add_arc(s, target, s.buffer_front, t.label, name);
                s.stack.resize(s.stack.size() - static_cast<size_t>(k - 1));
                s.stack.push_back(s.buffer_front++);
            }
            return s;
        }
    }
    throw ContractError("unknown system");
}

bool is_terminal(const ParserState& state, SystemId system) {
    switch (system) {
        case SystemId::ArcStandard:
        case SystemId::ArcHybrid:
            return state.buffer_empty() && state.stack_size() == 1;
        case SystemId::ArcEager:
        case SystemId::ArcSwift:
            return state.buffer_empty();
    }
    return false;
}

ArcSet finalize(const ParserState& state, const LabelVocab& vocab,
                const std::string& fallback_label) {
    if (!state.buffer_empty())
        throw ContractError("finalize: input still pending, the derivation is not finished");
    ArcSet out;
    out.heads.assign(static_cast<size_t>(state.n), -1);
    out.labels.assign(static_cast<size_t>(state.n), fallback_label);
    for (const StateArc& arc : state.arcs) {
        out.heads[static_cast<size_t>(arc.dep) - 1] = arc.head;
        out.labels[static_cast<size_t>(arc.dep) - 1] =
            arc.label >= 0 ? vocab.name(arc.label) : fallback_label;
    }
    for (int id = 1; id <= state.n; ++id)
        if (out.heads[static_cast<size_t>(id) - 1] < 0) out.heads[static_cast<size_t>(id) - 1] = 0;
    return out;
}

}  // namespace swiftdep
