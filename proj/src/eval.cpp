#include "swiftdep/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "swiftdep/errors.hpp"

namespace swiftdep {

const char* const kLengthBinNames[kNumLengthBins] = {"1", "2", "3-5", "6-10", "11-15", "16-20",
                                                     ">20"};

int length_bin(int distance) {
    if (distance <= 1) return 0;
    if (distance == 2) return 1;
    if (distance <= 5) return 2;
    if (distance <= 10) return 3;
    if (distance <= 15) return 4;
    if (distance <= 20) return 5;
    return 6;
}

void EvalReport::add(const Sentence& gold, const ArcSet& pred, PunctPolicy policy) {
    const int n = gold.size();
    if (pred.size() != n) throw ContractError("evaluate: token count mismatch");
    std::vector<bool> mask = punctuation_mask(gold, policy);
    int root_children = 0;
    for (int i = 0; i < n; ++i)
        if (pred.heads[static_cast<size_t>(i)] == 0) ++root_children;
    if (root_children > 1) ++multi_root_predictions;
    ++sentences;
    for (int i = 0; i < n; ++i) {
        if (mask[static_cast<size_t>(i)]) continue;
        const Token& tok = gold.tokens[static_cast<size_t>(i)];
        const bool head_ok = pred.heads[static_cast<size_t>(i)] == tok.gold_head;
        ++total;
        if (head_ok) {
            ++correct_head;
            if (pred.labels[static_cast<size_t>(i)] == tok.gold_label) ++correct_labeled;
        }
        BinStat& bin = bins[static_cast<size_t>(length_bin(std::abs(tok.gold_head - tok.id)))];
        ++bin.total;
        if (!head_ok) ++bin.errors;
    }
}

void EvalReport::merge(const EvalReport& other) {
    correct_head += other.correct_head;
    correct_labeled += other.correct_labeled;
    total += other.total;
    sentences += other.sentences;
    multi_root_predictions += other.multi_root_predictions;
    for (int b = 0; b < kNumLengthBins; ++b) {
        bins[static_cast<size_t>(b)].total += other.bins[static_cast<size_t>(b)].total;
        bins[static_cast<size_t>(b)].errors += other.bins[static_cast<size_t>(b)].errors;
    }
}

EvalReport evaluate_corpus(const std::vector<Sentence>& gold, const std::vector<ArcSet>& preds,
                           PunctPolicy policy) {
    if (gold.size() != preds.size()) throw ContractError("evaluate_corpus: corpus size mismatch");
    EvalReport report;
    for (size_t i = 0; i < gold.size(); ++i) report.add(gold[i], preds[i], policy);
    return report;
}

std::array<BinStat, kNumLengthBins> bin_errors_by_length(const Sentence& gold, const ArcSet& pred,
                                                         const std::vector<bool>& mask) {
    const int n = gold.size();
    if (pred.size() != n || static_cast<int>(mask.size()) != n)
        throw ContractError("bin_errors_by_length: size mismatch");
    std::array<BinStat, kNumLengthBins> bins{};
    for (int i = 0; i < n; ++i) {
        if (mask[static_cast<size_t>(i)]) continue;
        const Token& tok = gold.tokens[static_cast<size_t>(i)];
        BinStat& bin = bins[static_cast<size_t>(length_bin(std::abs(tok.gold_head - tok.id)))];
        ++bin.total;
        if (pred.heads[static_cast<size_t>(i)] != tok.gold_head) ++bin.errors;
    }
    return bins;
}

BootstrapResult paired_bootstrap(const std::vector<ArcSet>& predsA,
                                 const std::vector<ArcSet>& predsB,
                                 const std::vector<Sentence>& gold, int n_samples, uint64_t seed,
                                 PunctPolicy policy) {
    const size_t S = gold.size();
    if (predsA.size() != S || predsB.size() != S)
        throw ContractError("paired_bootstrap: prediction sets must cover the same sentences");
    if (S == 0) throw ContractError("paired_bootstrap: empty corpus");
    if (n_samples < 1) throw ContractError("paired_bootstrap: need at least one sample");

    // Per-sentence micro counts; resamples share the denominator, so
    // comparing correct counts is comparing the metrics.
    std::vector<long> ah(S), al(S), bh(S), bl(S);
    for (size_t i = 0; i < S; ++i) {
        const Sentence& g = gold[i];
        if (predsA[i].size() != g.size() || predsB[i].size() != g.size())
            throw ContractError("paired_bootstrap: token count mismatch");
        std::vector<bool> mask = punctuation_mask(g, policy);
        long cah = 0, cal = 0, cbh = 0, cbl = 0;
        for (int t = 0; t < g.size(); ++t) {
            if (mask[static_cast<size_t>(t)]) continue;
            const Token& tok = g.tokens[static_cast<size_t>(t)];
            if (predsA[i].heads[static_cast<size_t>(t)] == tok.gold_head) {
                ++cah;
                if (predsA[i].labels[static_cast<size_t>(t)] == tok.gold_label) ++cal;
            }
            if (predsB[i].heads[static_cast<size_t>(t)] == tok.gold_head) {
                ++cbh;
                if (predsB[i].labels[static_cast<size_t>(t)] == tok.gold_label) ++cbl;
            }
        }
        ah[i] = cah;
        al[i] = cal;
        bh[i] = cbh;
        bl[i] = cbl;
    }

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<size_t> pick(0, S - 1);
    long worse_uas = 0, worse_las = 0;
    for (int s = 0; s < n_samples; ++s) {
        long sum_ah = 0, sum_al = 0, sum_bh = 0, sum_bl = 0;
        for (size_t d = 0; d < S; ++d) {
            size_t i = pick(rng);
            sum_ah += ah[i];
            sum_al += al[i];
            sum_bh += bh[i];
            sum_bl += bl[i];
        }
        if (sum_ah <= sum_bh) ++worse_uas;
        if (sum_al <= sum_bl) ++worse_las;
    }
    BootstrapResult res;
    res.samples = n_samples;
    res.p_uas = static_cast<double>(worse_uas + 1) / (n_samples + 1);
    res.p_las = static_cast<double>(worse_las + 1) / (n_samples + 1);
    return res;
}

std::vector<double> holm_adjust(const std::vector<double>& pvalues) {
    const size_t m = pvalues.size();
    if (m == 0) throw ContractError("holm_adjust: empty input");
    for (double p : pvalues)
        if (!(p >= 0.0 && p <= 1.0)) throw ContractError("holm_adjust: p-value outside [0, 1]");
    std::vector<size_t> order(m);
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return pvalues[a] < pvalues[b]; });
    std::vector<double> adjusted(m);
    double running = 0.0;
    for (size_t rank = 0; rank < m; ++rank) {
        double scaled = static_cast<double>(m - rank) * pvalues[order[rank]];
        running = std::max(running, scaled);
        adjusted[order[rank]] = std::min(1.0, running);
    }
    return adjusted;
}

}  // namespace swiftdep
