#pragma once

#include <vector>

#include "swiftdep/oracle.hpp"

namespace swiftdep {

struct SequenceLengthReport {
    std::vector<OracleVariant> variants;
    std::vector<std::vector<int>> lengths;  // [variant][sentence]
    std::vector<double> mean_length;        // per variant

    double mean_of(OracleVariant v) const;
    // mean(a) / mean(b)
    double ratio(OracleVariant a, OracleVariant b) const;
};

// Derives oracle sequences for every sentence and variant. The corpus
// must already be projective-filtered.
SequenceLengthReport sequence_length_report(const std::vector<Sentence>& corpus,
                                            const std::vector<OracleVariant>& variants,
                                            const LabelVocab& vocab);

struct CandidateCountReport {
    std::vector<OracleVariant> variants;
    std::vector<long> total_steps;      // per variant
    std::vector<long> total_skeletons;  // unlabeled feasible transitions
    std::vector<long> total_labeled;    // label-expanded candidates
    std::vector<int> max_step_skeletons;
    long sentences = 0;

    double per_step_mean(OracleVariant v) const;
    double per_step_labeled_mean(OracleVariant v) const;
    double per_sentence_mean(OracleVariant v) const;
    double per_step_ratio(OracleVariant a, OracleVariant b) const;
    double per_step_labeled_ratio(OracleVariant a, OracleVariant b) const;
};

// Replays each variant's oracle trajectory, accumulating the feasible
// counts at every visited state.
CandidateCountReport candidate_count_report(const std::vector<Sentence>& corpus,
                                            const std::vector<OracleVariant>& variants,
                                            const LabelVocab& vocab);

struct ScalingPoint {
    int n = 0;
    long total = 0;  // feasible-transition evaluations over the derivation
};

struct ScalingReport {
    std::vector<ScalingPoint> points;
    double log_a = 0.0;
    double exponent = 0.0;  // b in total ~ a * n^b
    int distinct_n = 0;
};

// Arc-swift oracle replay per sentence, then a least-squares line on the
// log-log points. Refuses to fit (ContractError) when the corpus has
// fewer than 10 distinct sentence lengths.
ScalingReport runtime_scaling_report(const std::vector<Sentence>& corpus, const LabelVocab& vocab);

}  // namespace swiftdep
