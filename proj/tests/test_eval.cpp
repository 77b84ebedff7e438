#include "doctest.h"

#include <random>
#include <string>
#include <vector>

#include "support/corpora.hpp"
#include "swiftdep/eval.hpp"

using namespace swiftdep;

namespace {

Token mk(int id, int head, const std::string& label, const std::string& xpos = "NN") {
    Token t;
    t.id = id;
    t.form = "w" + std::to_string(id);
    t.upos = xpos == "." ? "PUNCT" : "X";
    t.xpos = xpos;
    t.gold_head = head;
    t.gold_label = label;
    return t;
}

// det(2) nsubj(3) root obj(3) punct(3): four content tokens, one period.
Sentence five_tokens() {
    Sentence s;
    s.tokens = {mk(1, 2, "det"), mk(2, 3, "nsubj"), mk(3, 0, "root"), mk(4, 3, "obj"),
                mk(5, 3, "punct", ".")};
    return s;
}

ArcSet gold_pred(const Sentence& s) {
    ArcSet p;
    for (const Token& t : s.tokens) {
        p.heads.push_back(t.gold_head);
        p.labels.push_back(t.gold_label);
    }
    return p;
}

} // namespace

TEST_CASE("perfect predictions score 100/100") {
    Sentence s = five_tokens();
    EvalReport r;
    r.add(s, gold_pred(s), PunctPolicy::Label);
    CHECK(r.total == 4);
    CHECK(r.uas() == doctest::Approx(100.0));
    CHECK(r.las() == doctest::Approx(100.0));
    CHECK(r.sentences == 1);
    CHECK(r.multi_root_predictions == 0);
}

TEST_CASE("three of four heads and two labels give 75 and 50") {
    Sentence s = five_tokens();
    ArcSet p = gold_pred(s);
    p.labels[1] = "dep"; // right head, wrong label
    p.heads[3] = 1;      // wrong head
    EvalReport r;
    r.add(s, p, PunctPolicy::Label);
    CHECK(r.total == 4);
    CHECK(r.correct_head == 3);
    CHECK(r.correct_labeled == 2);
    CHECK(r.uas() == doctest::Approx(75.0));
    CHECK(r.las() == doctest::Approx(50.0));
}

TEST_CASE("punctuation never counts, under either policy") {
    Sentence s = five_tokens();
    ArcSet p = gold_pred(s);
    p.heads[4] = 1; // butcher the period's head
    p.labels[4] = "det";
    EvalReport by_label;
    by_label.add(s, p, PunctPolicy::Label);
    CHECK(by_label.uas() == doctest::Approx(100.0));
    CHECK(by_label.las() == doctest::Approx(100.0));

    // Relabeled period: only the tag-based policy still masks it.
    s.tokens[4].gold_label = "dep";
    p.labels[4] = "dep";
    p.heads[4] = 1;
    EvalReport label_policy, xpos_policy;
    label_policy.add(s, p, PunctPolicy::Label);
    xpos_policy.add(s, p, PunctPolicy::Xpos);
    CHECK(label_policy.total == 5);
    CHECK(label_policy.uas() == doctest::Approx(80.0));
    CHECK(xpos_policy.total == 4);
    CHECK(xpos_policy.uas() == doctest::Approx(100.0));
}

TEST_CASE("token count mismatch is rejected") {
    Sentence s = five_tokens();
    ArcSet p = gold_pred(s);
    p.heads.pop_back();
    p.labels.pop_back();
    EvalReport r;
    CHECK_THROWS_AS(r.add(s, p, PunctPolicy::Label), ContractError);
}

TEST_CASE("multiple predicted root children are flagged") {
    Sentence s = five_tokens();
    ArcSet p = gold_pred(s);
    p.heads[3] = 0; // second root child
    EvalReport r;
    r.add(s, p, PunctPolicy::Label);
    CHECK(r.multi_root_predictions == 1);
    r.add(s, gold_pred(s), PunctPolicy::Label);
    CHECK(r.multi_root_predictions == 1);
    CHECK(r.sentences == 2);
}

TEST_CASE("dependency lengths fall into the documented bins") {
    CHECK(std::string(kLengthBinNames[length_bin(1)]) == "1");
    CHECK(std::string(kLengthBinNames[length_bin(2)]) == "2");
    CHECK(std::string(kLengthBinNames[length_bin(3)]) == "3-5");
    CHECK(std::string(kLengthBinNames[length_bin(5)]) == "3-5");
    CHECK(std::string(kLengthBinNames[length_bin(6)]) == "6-10");
    CHECK(std::string(kLengthBinNames[length_bin(10)]) == "6-10");
    CHECK(std::string(kLengthBinNames[length_bin(11)]) == "11-15");
    CHECK(std::string(kLengthBinNames[length_bin(16)]) == "16-20");
    CHECK(std::string(kLengthBinNames[length_bin(20)]) == "16-20");
    CHECK(std::string(kLengthBinNames[length_bin(21)]) == ">20");
    CHECK(std::string(kLengthBinNames[length_bin(99)]) == ">20");

    // arc 5 -> 6 is a distance-1 arc; arc 2 -> 14 lands in 11-15
    CHECK(length_bin(std::abs(5 - 6)) == 0);
    CHECK(length_bin(std::abs(2 - 14)) == 4);
}

TEST_CASE("bin errors add up to the unlabeled error count") {
    auto corpus = testsup::toy_corpus(30, 17);
    std::mt19937_64 rng(4);
    EvalReport r;
    for (const Sentence& s : corpus) {
        ArcSet p = gold_pred(s);
        for (int i = 0; i < s.size(); ++i) {
            if (rng() % 3 == 0) p.heads[i] = static_cast<int>(rng() % (s.size() + 1));
            if (p.heads[i] == i + 1) p.heads[i] = 0;
        }
        r.add(s, p, PunctPolicy::Label);
    }
    long bin_total = 0, bin_errors = 0;
    for (const BinStat& b : r.bins) {
        bin_total += b.total;
        bin_errors += b.errors;
    }
    CHECK(bin_total == r.total);
    CHECK(bin_errors == r.total - r.correct_head);
    CHECK(r.las() <= r.uas());
}

TEST_CASE("per-sentence bins agree with the aggregate report") {
    Sentence s = five_tokens();
    ArcSet p = gold_pred(s);
    p.heads[0] = 3; // miss the distance-1 det arc
    auto mask = punctuation_mask(s, PunctPolicy::Label);
    auto bins = bin_errors_by_length(s, p, mask);
    CHECK(bins[0].total == 3);  // det, nsubj, obj are all distance-1 arcs
    CHECK(bins[0].errors == 1);
    CHECK(bins[1].total == 0);
    CHECK(bins[2].total == 1);  // the root arc, distance 3
    CHECK(bins[2].errors == 0);
}

TEST_CASE("merging reports equals scoring the union") {
    auto corpus = testsup::toy_corpus(12, 23);
    std::vector<ArcSet> preds;
    std::mt19937_64 rng(8);
    for (const Sentence& s : corpus) {
        ArcSet p = gold_pred(s);
        if (rng() % 2) p.heads[0] = 0;
        preds.push_back(p);
    }
    EvalReport whole = evaluate_corpus(corpus, preds, PunctPolicy::Label);
    EvalReport first, second;
    for (size_t i = 0; i < corpus.size(); ++i)
        (i < 6 ? first : second).add(corpus[i], preds[i], PunctPolicy::Label);
    first.merge(second);
    CHECK(first.total == whole.total);
    CHECK(first.correct_head == whole.correct_head);
    CHECK(first.correct_labeled == whole.correct_labeled);
    CHECK(first.sentences == whole.sentences);
    for (int b = 0; b < kNumLengthBins; ++b) {
        CHECK(first.bins[b].total == whole.bins[b].total);
        CHECK(first.bins[b].errors == whole.bins[b].errors);
    }
}

TEST_CASE("bootstrap ties give p of one") {
    auto corpus = testsup::toy_corpus(30, 31);
    std::vector<ArcSet> preds;
    for (const Sentence& s : corpus) preds.push_back(gold_pred(s));
    BootstrapResult r = paired_bootstrap(preds, preds, corpus, 500, 7, PunctPolicy::Label);
    CHECK(r.p_uas == doctest::Approx(1.0));
    CHECK(r.p_las == doctest::Approx(1.0));
    CHECK(r.samples == 500);
}

TEST_CASE("bootstrap separates a perfect system from a broken one") {
    auto corpus = testsup::toy_corpus(100, 37);
    std::vector<ArcSet> good, bad;
    for (const Sentence& s : corpus) {
        ArcSet g = gold_pred(s);
        ArcSet b = g;
        for (int i = 0; i < s.size(); ++i) {
            b.heads[i] = (g.heads[i] == 0) ? 1 : 0; // every head wrong
            if (b.heads[i] == i + 1) b.heads[i] = (i + 1 == s.size()) ? 0 : s.size();
        }
        good.push_back(g);
        bad.push_back(b);
    }
    BootstrapResult ab = paired_bootstrap(good, bad, corpus, 10000, 13, PunctPolicy::Label);
    CHECK(ab.p_uas <= 0.001);
    CHECK(ab.p_las <= 0.001);
    CHECK(ab.p_uas == doctest::Approx(1.0 / 10001.0));

    BootstrapResult ba = paired_bootstrap(bad, good, corpus, 10000, 13, PunctPolicy::Label);
    CHECK(ba.p_uas == doctest::Approx(1.0));

    // same seed, same resamples
    BootstrapResult again = paired_bootstrap(good, bad, corpus, 10000, 13, PunctPolicy::Label);
    CHECK(again.p_uas == ab.p_uas);
    CHECK(again.p_las == ab.p_las);
}

TEST_CASE("bootstrap direction probabilities overlap only through ties") {
    auto corpus = testsup::toy_corpus(40, 41);
    std::vector<ArcSet> a, b;
    std::mt19937_64 rng(5);
    for (const Sentence& s : corpus) {
        ArcSet pa = gold_pred(s), pb = gold_pred(s);
        if (rng() % 3 == 0) pa.heads[s.size() / 2] = 0;
        if (rng() % 3 == 0) pb.heads[s.size() / 2] = 0;
        if (rng() % 4 == 0) pb.heads[0] = 0;
        a.push_back(pa);
        b.push_back(pb);
    }
    BootstrapResult ab = paired_bootstrap(a, b, corpus, 2000, 3, PunctPolicy::Label);
    BootstrapResult ba = paired_bootstrap(b, a, corpus, 2000, 3, PunctPolicy::Label);
    CHECK(ab.p_uas + ba.p_uas >= 1.0);
    CHECK(ab.p_uas > 0.0);
    CHECK(ba.p_uas > 0.0);
}

TEST_CASE("bootstrap rejects malformed input") {
    auto corpus = testsup::toy_corpus(4, 43);
    std::vector<ArcSet> preds;
    for (const Sentence& s : corpus) preds.push_back(gold_pred(s));
    auto short_preds = preds;
    short_preds.pop_back();
    CHECK_THROWS_AS(paired_bootstrap(short_preds, preds, corpus, 10, 1, PunctPolicy::Label),
                    ContractError);
    CHECK_THROWS_AS(paired_bootstrap(preds, preds, corpus, 0, 1, PunctPolicy::Label),
                    ContractError);
    CHECK_THROWS_AS(paired_bootstrap({}, {}, {}, 10, 1, PunctPolicy::Label), ContractError);
}

TEST_CASE("holm adjustment on a single test changes nothing") {
    auto out = holm_adjust({0.03});
    REQUIRE(out.size() == 1);
    CHECK(out[0] == doctest::Approx(0.03));
}

TEST_CASE("holm adjustment scales the smallest p by the family size") {
    std::vector<double> ten(10, 0.004);
    for (double p : holm_adjust(ten)) CHECK(p == doctest::Approx(0.04));

    auto pair = holm_adjust({0.01, 0.04});
    CHECK(pair[0] == doctest::Approx(0.02));
    CHECK(pair[1] == doctest::Approx(0.04));

    // order of the input is preserved
    auto swapped = holm_adjust({0.04, 0.01});
    CHECK(swapped[0] == doctest::Approx(0.04));
    CHECK(swapped[1] == doctest::Approx(0.02));
}

TEST_CASE("holm adjustment clips at one and stays monotone") {
    auto out = holm_adjust({0.5, 0.9, 0.001});
    CHECK(out[0] == doctest::Approx(1.0));
    CHECK(out[1] == doctest::Approx(1.0));
    CHECK(out[2] == doctest::Approx(0.003));

    // running max: a later, larger rank cannot undercut an earlier one
    auto mono = holm_adjust({0.01, 0.011, 0.012, 0.4});
    CHECK(mono[0] <= mono[1]);
    CHECK(mono[1] <= mono[2]);
    CHECK(mono[2] <= mono[3]);
}

TEST_CASE("holm adjustment validates its input") {
    CHECK_THROWS_AS(holm_adjust({}), ContractError);
    CHECK_THROWS_AS(holm_adjust({0.5, 1.5}), ContractError);
    CHECK_THROWS_AS(holm_adjust({-0.1}), ContractError);
}
