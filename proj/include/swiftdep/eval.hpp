#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "swiftdep/treebank.hpp"

namespace swiftdep {

inline constexpr int kNumLengthBins = 7;
extern const char* const kLengthBinNames[kNumLengthBins];  // 1, 2, 3-5, ..., >20

// Bin index for a gold dependency length |head - dependent| >= 1.
int length_bin(int distance);

struct BinStat {
    long total = 0;
    long errors = 0;

    double error_rate() const { return total == 0 ? 0.0 : 100.0 * errors / total; }
};

struct EvalReport {
    long correct_head = 0;
    long correct_labeled = 0;
    long total = 0;  // non-punctuation tokens
    long sentences = 0;
    long multi_root_predictions = 0;  // predicted trees with several root children
    std::array<BinStat, kNumLengthBins> bins{};

    double uas() const { return total == 0 ? 0.0 : 100.0 * correct_head / total; }
    double las() const { return total == 0 ? 0.0 : 100.0 * correct_labeled / total; }

    // One sentence's contribution (micro counts). Throws ContractError on
    // token count mismatch.
    void add(const Sentence& gold, const ArcSet& pred, PunctPolicy policy);
    void merge(const EvalReport& other);
};

EvalReport evaluate_corpus(const std::vector<Sentence>& gold, const std::vector<ArcSet>& preds,
                           PunctPolicy policy);

// Head-error rate per gold-dependency-length bin for one sentence.
std::array<BinStat, kNumLengthBins> bin_errors_by_length(const Sentence& gold, const ArcSet& pred,
                                                         const std::vector<bool>& mask);

struct BootstrapResult {
    double p_uas = 1.0;
    double p_las = 1.0;
    int samples = 0;
};

// One-sided paired bootstrap over sentence resamples, testing "A better
// than B": p = (#samples with metric_A <= metric_B + 1) / (n_samples + 1).
BootstrapResult paired_bootstrap(const std::vector<ArcSet>& predsA,
                                 const std::vector<ArcSet>& predsB,
                                 const std::vector<Sentence>& gold, int n_samples, uint64_t seed,
                                 PunctPolicy policy);

// Step-down Holm adjustment; output in the input's order, clipped at 1,
// monotone over the sorted sequence. Throws ContractError for p outside
// [0, 1].
std::vector<double> holm_adjust(const std::vector<double>& pvalues);

}  // namespace swiftdep
