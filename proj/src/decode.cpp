#include "swiftdep/decode.hpp"

#include <algorithm>
#include <numeric>

namespace swiftdep {

long StepTrace::total_skeletons() const {
    return std::accumulate(skeleton_counts.begin(), skeleton_counts.end(), 0L);
}

long StepTrace::total_labeled() const {
    return std::accumulate(labeled_counts.begin(), labeled_counts.end(), 0L);
}

ParseResult greedy_parse(const Sentence& sentence, const ScorerModel& model, SystemId system) {
    if (system != model.system)
        throw ContractError("greedy_parse: model was trained for a different system");
    const int n = sentence.size();
    if (n < 1) throw ContractError("greedy_parse: empty sentence");
    EncodedSentence enc = encode(sentence, model);
    ParserState state = initial_state(n);
    ParseResult out;
    const int max_steps = 4 * n + 8;
    while (!is_terminal(state, system)) {
        if (static_cast<int>(out.trace.transitions.size()) > max_steps)
            throw ContractError("greedy_parse exceeded the step budget");
        ScoredCandidates sc = score_transitions(state, enc, model);
        int best = sc.argmax();
        out.trace.skeleton_counts.push_back(sc.skeleton_count);
        out.trace.labeled_counts.push_back(static_cast<int>(sc.cands.size()));
        out.trace.transitions.push_back(sc.cands[static_cast<size_t>(best)]);
        out.logprob += sc.logp[best];
        state = apply(state, sc.cands[static_cast<size_t>(best)], system);
    }
    out.arcs = finalize(state, model.labels);
    return out;
}

BeamNorm beam_norm_from_name(const std::string& name) {
    if (name == "none") return BeamNorm::None;
    if (name == "length") return BeamNorm::Length;
    throw ParseError("unknown beam normalization '" + name + "' (expected none|length)");
}

namespace {

struct BeamItem {
    ParserState state;
    double logprob = 0.0;
    std::vector<Transition> history;
    bool terminal = false;
    ScoredCandidates sc;  // only filled for live items
};

double normalized(const BeamItem& it, BeamNorm norm) {
    if (norm == BeamNorm::None || it.history.empty()) return it.logprob;
    return it.logprob / static_cast<double>(it.history.size());
}

}  // namespace

BeamResult beam_parse(const Sentence& sentence, const ScorerModel& model, SystemId system,
                      int beam_size, BeamNorm norm) {
    if (system != model.system)
        throw ContractError("beam_parse: model was trained for a different system");
    if (beam_size < 1) throw ContractError("beam_parse: beam size must be at least 1");
    const int n = sentence.size();
    if (n < 1) throw ContractError("beam_parse: empty sentence");
    EncodedSentence enc = encode(sentence, model);
    BeamResult res;

    auto make_item = [&](ParserState st, double lp, std::vector<Transition> hist) {
        BeamItem it;
        it.state = std::move(st);
        it.logprob = lp;
        it.history = std::move(hist);
        it.terminal = is_terminal(it.state, system);
        if (!it.terminal) {
            it.sc = score_transitions(it.state, enc, model);
            res.scored_states += 1;
            res.scored_skeletons += it.sc.skeleton_count;
            res.scored_labeled += static_cast<long>(it.sc.cands.size());
        }
        return it;
    };

    std::vector<BeamItem> beam;
    beam.push_back(make_item(initial_state(n), 0.0, {}));

    const int max_rounds = 4 * n + 8;
    int rounds = 0;
    while (std::any_of(beam.begin(), beam.end(), [](const BeamItem& b) { return !b.terminal; })) {
        if (++rounds > max_rounds) throw ContractError("beam_parse exceeded the step budget");
        std::vector<BeamItem> pool;
        for (BeamItem& item : beam) {
            if (item.terminal) {
                pool.push_back(std::move(item));
                continue;
            }
            const int nc = static_cast<int>(item.sc.cands.size());
            const int k = std::min(beam_size, nc);
            std::vector<int> idx(static_cast<size_t>(nc));
            std::iota(idx.begin(), idx.end(), 0);
            std::partial_sort(idx.begin(), idx.begin() + k, idx.end(), [&](int a, int b) {
                if (item.sc.logp[a] != item.sc.logp[b]) return item.sc.logp[a] > item.sc.logp[b];
                return a < b;  // canonical transition order breaks ties
            });
            for (int j = 0; j < k; ++j) {
                const Transition& t = item.sc.cands[static_cast<size_t>(idx[static_cast<size_t>(j)])];
                std::vector<Transition> hist = item.history;
                hist.push_back(t);
                pool.push_back(make_item(apply(item.state, t, system),
                                         item.logprob + item.sc.logp[idx[static_cast<size_t>(j)]],
                                         std::move(hist)));
            }
        }
        std::stable_sort(pool.begin(), pool.end(),
                         [](const BeamItem& a, const BeamItem& b) { return a.logprob > b.logprob; });
        if (static_cast<int>(pool.size()) > beam_size) pool.resize(static_cast<size_t>(beam_size));
        beam = std::move(pool);
    }

    size_t best = 0;
    for (size_t i = 1; i < beam.size(); ++i)
        if (normalized(beam[i], norm) > normalized(beam[best], norm)) best = i;
    res.arcs = finalize(beam[best].state, model.labels);
    res.winner_logprob = beam[best].logprob;
    res.winner_score = normalized(beam[best], norm);
    res.history = std::move(beam[best].history);
    return res;
}

}  // namespace swiftdep
