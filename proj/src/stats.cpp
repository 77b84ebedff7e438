#include "swiftdep/stats.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace swiftdep {

namespace {

int variant_index(const std::vector<OracleVariant>& variants, OracleVariant v) {
    for (size_t i = 0; i < variants.size(); ++i)
        if (variants[i] == v) return static_cast<int>(i);
    throw ContractError("report does not cover oracle variant " + std::string(variant_name(v)));
}

}  // namespace

double SequenceLengthReport::mean_of(OracleVariant v) const {
    return mean_length[static_cast<size_t>(variant_index(variants, v))];
}

double SequenceLengthReport::ratio(OracleVariant a, OracleVariant b) const {
    double denom = mean_of(b);
    if (denom == 0.0) throw ContractError("length ratio: zero denominator");
    return mean_of(a) / denom;
}

SequenceLengthReport sequence_length_report(const std::vector<Sentence>& corpus,
                                            const std::vector<OracleVariant>& variants,
                                            const LabelVocab& vocab) {
    if (corpus.empty()) throw ContractError("sequence_length_report: empty corpus");
    SequenceLengthReport rep;
    rep.variants = variants;
    rep.lengths.assign(variants.size(), {});
    rep.mean_length.assign(variants.size(), 0.0);
    for (size_t vi = 0; vi < variants.size(); ++vi) {
        long total = 0;
        rep.lengths[vi].reserve(corpus.size());
        for (const Sentence& s : corpus) {
            int len = static_cast<int>(oracle_sequence(s, variants[vi], vocab).size());
            rep.lengths[vi].push_back(len);
            total += len;
        }
        rep.mean_length[vi] = static_cast<double>(total) / static_cast<double>(corpus.size());
    }
    return rep;
}

double CandidateCountReport::per_step_mean(OracleVariant v) const {
    size_t i = static_cast<size_t>(variant_index(variants, v));
    return total_steps[i] == 0 ? 0.0
                               : static_cast<double>(total_skeletons[i]) /
                                     static_cast<double>(total_steps[i]);
}

double CandidateCountReport::per_step_labeled_mean(OracleVariant v) const {
    size_t i = static_cast<size_t>(variant_index(variants, v));
    return total_steps[i] == 0
               ? 0.0
               : static_cast<double>(total_labeled[i]) / static_cast<double>(total_steps[i]);
}

double CandidateCountReport::per_sentence_mean(OracleVariant v) const {
    size_t i = static_cast<size_t>(variant_index(variants, v));
    return sentences == 0
               ? 0.0
               : static_cast<double>(total_skeletons[i]) / static_cast<double>(sentences);
}

double CandidateCountReport::per_step_ratio(OracleVariant a, OracleVariant b) const {
    double denom = per_step_mean(b);
    if (denom == 0.0) throw ContractError("candidate ratio: zero denominator");
    return per_step_mean(a) / denom;
}

double CandidateCountReport::per_step_labeled_ratio(OracleVariant a, OracleVariant b) const {
    double denom = per_step_labeled_mean(b);
    if (denom == 0.0) throw ContractError("candidate ratio: zero denominator");
    return per_step_labeled_mean(a) / denom;
}

namespace {

// Walks the oracle trajectory, accumulating feasible-transition counts
// at every visited (non-terminal) state.
void accumulate_trajectory(const Sentence& s, OracleVariant variant, const LabelVocab& vocab,
                           long& steps, long& skeletons, long& labeled, int& max_step) {
    const SystemId system = variant_system(variant);
    std::vector<Transition> seq = oracle_sequence(s, variant, vocab);
    ParserState state = initial_state(s.size());
    const int L = std::max(1, vocab.size());
    for (const Transition& t : seq) {
        std::vector<Transition> feas = feasible(state, system);
        int skel = static_cast<int>(feas.size());
        int lab = 0;
        for (const Transition& f : feas) lab += f.induces_arc() ? L : 1;
        steps += 1;
        skeletons += skel;
        labeled += lab;
        max_step = std::max(max_step, skel);
        state = apply(state, t, system);
    }
}

}  // namespace

CandidateCountReport candidate_count_report(const std::vector<Sentence>& corpus,
                                            const std::vector<OracleVariant>& variants,
                                            const LabelVocab& vocab) {
    if (corpus.empty()) throw ContractError("candidate_count_report: empty corpus");
    CandidateCountReport rep;
    rep.variants = variants;
    rep.total_steps.assign(variants.size(), 0);
    rep.total_skeletons.assign(variants.size(), 0);
    rep.total_labeled.assign(variants.size(), 0);
    rep.max_step_skeletons.assign(variants.size(), 0);
    rep.sentences = static_cast<long>(corpus.size());
    for (size_t vi = 0; vi < variants.size(); ++vi) {
        for (const Sentence& s : corpus) {
            accumulate_trajectory(s, variants[vi], vocab, rep.total_steps[vi],
                                  rep.total_skeletons[vi], rep.total_labeled[vi],
                                  rep.max_step_skeletons[vi]);
        }
    }
    return rep;
}

ScalingReport runtime_scaling_report(const std::vector<Sentence>& corpus,
                                     const LabelVocab& vocab) {
    if (corpus.empty()) throw ContractError("runtime_scaling_report: empty corpus");
    ScalingReport rep;
    std::set<int> distinct;
    for (const Sentence& s : corpus) {
        long steps = 0, skeletons = 0, labeled = 0;
        int max_step = 0;
        accumulate_trajectory(s, OracleVariant::Asw, vocab, steps, skeletons, labeled, max_step);
        rep.points.push_back({s.size(), skeletons});
        distinct.insert(s.size());
    }
    rep.distinct_n = static_cast<int>(distinct.size());
    if (rep.distinct_n < 10)
        throw ContractError("runtime_scaling_report: refusing to fit a power law to fewer than "
                            "10 distinct sentence lengths (got " +
                            std::to_string(rep.distinct_n) + ")");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double N = static_cast<double>(rep.points.size());
    for (const ScalingPoint& p : rep.points) {
        double x = std::log(static_cast<double>(p.n));
        double y = std::log(static_cast<double>(std::max(1L, p.total)));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double denom = sxx - sx * sx / N;
    if (denom <= 0.0) throw ContractError("runtime_scaling_report: degenerate length spread");
    rep.exponent = (sxy - sx * sy / N) / denom;
    rep.log_a = (sy - rep.exponent * sx) / N;
    return rep;
}

}  // namespace swiftdep
