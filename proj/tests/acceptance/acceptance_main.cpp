// Release gate for the toolkit: twelve end-to-end checks, one line of
// output each, nonzero exit status when any of them fails. Heavier
// checks (training, gradient probing) print their elapsed time.
//
// Corpus selection: if SWIFTDEP_DATA_DIR holds en-ud-{train,dev}.conllu
// (or train/dev.conllu), those files drive the data-dependent checks.
// Otherwise a seeded synthetic treebank stands in, and the banner says so.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support/corpora.hpp"
#include "swiftdep/decode.hpp"
#include "swiftdep/eval.hpp"
#include "swiftdep/oracle.hpp"
#include "swiftdep/scorer.hpp"
#include "swiftdep/stats.hpp"
#include "swiftdep/transition.hpp"
#include "swiftdep/treebank.hpp"

using namespace swiftdep;
namespace ts = swiftdep::testsup;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

long count_kind(const std::vector<Transition>& seq, TransitionKind k) {
    long c = 0;
    for (const auto& t : seq)
        if (t.kind == k) ++c;
    return c;
}

bool same_tree(const ArcSet& a, const ArcSet& b) {
    return a.heads == b.heads && a.labels == b.labels;
}

std::string num(double v, int prec = 3) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(prec);
    os << v;
    return os.str();
}

struct DataSet {
    std::vector<Sentence> train;     // projective-filtered
    std::vector<Sentence> dev;       // as loaded
    std::vector<Sentence> dev_proj;  // projective subset of dev
    std::string note;
    bool treebank = false;
};

DataSet load_data() {
    DataSet d;
    if (const char* env = std::getenv("SWIFTDEP_DATA_DIR")) {
        namespace fs = std::filesystem;
        auto pick = [&](std::initializer_list<const char*> names) -> std::string {
            for (const char* nm : names) {
                fs::path p = fs::path(env) / nm;
                if (fs::exists(p)) return p.string();
            }
            return {};
        };
        std::string tr = pick({"en-ud-train.conllu", "en_ewt-ud-train.conllu", "train.conllu"});
        std::string de = pick({"en-ud-dev.conllu", "en_ewt-ud-dev.conllu", "dev.conllu"});
        if (!tr.empty() && !de.empty()) {
            d.train = load_conllu_file(tr);
            d.dev = load_conllu_file(de);
            d.treebank = true;
            d.note = tr + " / " + de;
        }
    }
    if (!d.treebank) {
        d.train = ts::toy_corpus(900, 11);
        d.dev = ts::toy_corpus(250, 12);
        d.note =
            "synthetic stand-in (train 900, dev 250); place en-ud-{train,dev}.conllu "
            "in the data directory for treebank runs";
    }
    d.train = filter_projective(d.train).kept;
    d.dev_proj = filter_projective(d.dev).kept;
    return d;
}

constexpr OracleVariant kAllVariants[] = {OracleVariant::Asd, OracleVariant::AeS,
                                          OracleVariant::AeR, OracleVariant::Ah,
                                          OracleVariant::Asw};

}  // namespace

int main() {
    std::printf("swiftdep release gate\n");

    DataSet data = load_data();
    std::printf("data: %s\n", data.note.c_str());
    std::printf("      train %zu projective, dev %zu (%zu projective)\n\n", data.train.size(),
                data.dev.size(), data.dev_proj.size());
    std::fflush(stdout);

    int failures = 0;
    auto run = [&](int id, const char* name, auto&& fn) {
        auto t0 = Clock::now();
        bool ok = false;
        std::string detail;
        try {
            auto r = fn();
            ok = r.first;
            detail = r.second;
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("%2d %s  %-38s  %s (%.1fs)\n", id, ok ? "PASS" : "FAIL", name, detail.c_str(),
                    elapsed(t0));
        std::fflush(stdout);
        if (!ok) ++failures;
    };

    // Shared fuzz corpus: 1000 random projective trees, lengths cycling 1..30.
    LabelVocab fuzz_vocab({"root", "dep", "mod", "obj"});
    std::vector<Sentence> fuzz;
    fuzz.reserve(1000);
    for (int i = 0; i < 1000; ++i)
        fuzz.push_back(random_projective_tree(1 + i % 30, fuzz_vocab, 4242 + (uint64_t)i));

    LabelVocab dev_vocab = LabelVocab::from_corpus(data.dev_proj);

    run(1, "oracle round-trip, 5 variants", [&]() -> std::pair<bool, std::string> {
        auto t0 = Clock::now();
        long checked = 0;
        for (const auto& s : fuzz) {
            ArcSet gold = gold_arcs(s);
            for (OracleVariant v : kAllVariants) {
                auto seq = oracle_sequence(s, v, fuzz_vocab);
                ArcSet back = replay(seq, s.size(), variant_system(v), fuzz_vocab);
                if (!same_tree(gold, back))
                    return {false, std::string("mismatch under ") + variant_name(v) + " on a " +
                                       std::to_string(s.size()) + "-token tree"};
                ++checked;
            }
        }
        double dt = elapsed(t0);
        if (dt >= 30.0) return {false, "exceeded the 30s budget: " + num(dt, 1) + "s"};
        return {true, std::to_string(checked) + " derivations reproduce their trees"};
    });

    run(2, "exhaustive derivations, n <= 4", [&]() -> std::pair<bool, std::string> {
        const long expected[] = {0, 1, 3, 12, 55};
        const SystemId systems[] = {SystemId::ArcStandard, SystemId::ArcEager, SystemId::ArcHybrid,
                                    SystemId::ArcSwift};
        long eager_multi = 0;
        for (int n = 1; n <= 4; ++n) {
            auto proj = ts::all_projective_heads(n);
            if ((long)proj.size() != expected[n])
                return {false, "projective catalog has " + std::to_string(proj.size()) +
                                   " trees at n=" + std::to_string(n)};
            std::set<std::vector<int>> want(proj.begin(), proj.end());
            for (SystemId sys : systems) {
                auto derived = ts::enumerate_derivations(n, sys, 0);
                std::set<std::vector<int>> got;
                for (const auto& [heads, count] : derived) {
                    got.insert(heads);
                    if (sys == SystemId::ArcSwift && count != 1)
                        return {false, std::string("arc-swift derived a tree ") +
                                           std::to_string(count) + " times at n=" +
                                           std::to_string(n)};
                    if (sys == SystemId::ArcEager && count > 1) ++eager_multi;
                }
                if (got != want)
                    return {false, std::string(system_name(sys)) + " derives " +
                                       std::to_string(got.size()) + " trees at n=" +
                                       std::to_string(n) + ", catalog has " +
                                       std::to_string(want.size())};
            }
        }
        if (eager_multi == 0) return {false, "no arc-eager tree shows a second derivation"};
        return {true, "counts 1/3/12/55 for all systems; arc-swift unique; " +
                          std::to_string(eager_multi) + " arc-eager trees with several"};
    });

    run(3, "swift-to-eager expansion", [&]() -> std::pair<bool, std::string> {
        for (const auto& s : fuzz) {
            auto swift = oracle_sequence(s, OracleVariant::Asw, fuzz_vocab);
            auto eager = expand_swift_to_eager(swift);
            ArcSet back = replay(eager, s.size(), SystemId::ArcEager, fuzz_vocab);
            if (!same_tree(gold_arcs(s), back))
                return {false, "expanded sequence diverges on a " + std::to_string(s.size()) +
                                   "-token tree"};
        }
        return {true, "expanded derivations reproduce all 1000 trees under arc-eager"};
    });

    run(4, "derivation length identities", [&]() -> std::pair<bool, std::string> {
        auto check_corpus = [&](const std::vector<Sentence>& corpus, const LabelVocab& vocab,
                                const char* tag) -> std::string {
            for (const auto& s : corpus) {
                long n = s.size();
                auto swift = oracle_sequence(s, OracleVariant::Asw, vocab);
                auto eager = oracle_sequence(s, OracleVariant::AeR, vocab);
                long rarck = count_kind(swift, TransitionKind::RightArcK);
                long reduces = count_kind(eager, TransitionKind::Reduce);
                long rarc = count_kind(eager, TransitionKind::RightArc);
                if ((long)swift.size() != 2 * n - rarck)
                    return std::string(tag) + ": swift length is not 2n - #RArc[k]";
                if ((long)expand_swift_to_eager(swift).size() != (long)eager.size())
                    return std::string(tag) + ": expansion length differs from arc-eager";
                if ((long)swift.size() != (long)eager.size() - reduces)
                    return std::string(tag) + ": swift length is not eager length - #Reduce";
                if ((long)eager.size() != 2 * n - rarc + reduces)
                    return std::string(tag) + ": eager length is not 2n - #RArc + #Reduce";
            }
            return {};
        };
        if (auto err = check_corpus(fuzz, fuzz_vocab, "fuzz"); !err.empty()) return {false, err};
        if (auto err = check_corpus(data.dev_proj, dev_vocab, "dev"); !err.empty())
            return {false, err};
        return {true, "exact on every fuzz and dev sentence"};
    });

    run(5, "swift-vs-eager sequence lengths", [&]() -> std::pair<bool, std::string> {
        auto rep = sequence_length_report(data.dev_proj,
                                          {OracleVariant::Asw, OracleVariant::AeR}, dev_vocab);
        double ratio = rep.ratio(OracleVariant::Asw, OracleVariant::AeR);
        bool ok = ratio > 0.6 && ratio < 0.95;
        return {ok, "mean length ratio asw/aeR = " + num(ratio) + ", band (0.60, 0.95)"};
    });

    run(6, "per-step candidate budget", [&]() -> std::pair<bool, std::string> {
        auto rep = candidate_count_report(data.dev_proj,
                                          {OracleVariant::Asw, OracleVariant::AeR}, dev_vocab);
        double ratio = rep.per_step_ratio(OracleVariant::Asw, OracleVariant::AeR);
        int eager_max = rep.max_step_skeletons[1];
        bool ok = ratio > 1.0 && ratio < 1.6 && eager_max <= 4;
        return {ok, "asw/aeR per-step ratio = " + num(ratio) + " in (1.0, 1.6); arc-eager max " +
                        std::to_string(eager_max) + " <= 4"};
    });

    // Models for checks 7 and 10: short schedules, the default flat phase
    // of the annealing plan (decay only starts after epoch 5).
    std::vector<Sentence> train7(data.train.begin(),
                                 data.train.begin() + std::min<size_t>(data.train.size(), 2000));
    std::vector<Sentence> dev7(data.dev.begin(),
                               data.dev.begin() + std::min<size_t>(data.dev.size(), 250));

    run(7, "beam-2 work accounting", [&]() -> std::pair<bool, std::string> {
        TrainerConfig cfg;
        cfg.epochs = 4;
        cfg.seed = 11;
        ScorerModel model = train(train7, SystemId::ArcEager, OracleVariant::AeR, cfg);
        long greedy_states = 0, beam_states = 0;
        for (const auto& s : dev7) {
            greedy_states += (long)greedy_parse(s, model, SystemId::ArcEager)
                                 .trace.skeleton_counts.size();
            beam_states += beam_parse(s, model, SystemId::ArcEager, 2).scored_states;
        }
        double ratio = (double)beam_states / (double)greedy_states;
        bool ok = ratio >= 3.0 && ratio <= 5.0;
        return {ok, "beam-2 scores " + num(ratio, 2) + "x the states of greedy, band [3, 5]"};
    });

    run(8, "finite-difference gradient check", [&]() -> std::pair<bool, std::string> {
        auto t0 = Clock::now();
        auto corpus = ts::toy_corpus(40, 21);
        ModelDims dims;
        dims.word_dim = 6;
        dims.pos_dim = 3;
        dims.window = 1;
        TrainerConfig cfg;
        cfg.dims = dims;
        cfg.dropout_prob = 0.0;
        cfg.unk_replace_prob = 0.0;
        const OracleVariant variants[] = {OracleVariant::Asw, OracleVariant::AeR,
                                          OracleVariant::Asd, OracleVariant::Ah,
                                          OracleVariant::AeS};
        const double h = 1e-5;
        double worst = 0.0;
        std::string worst_at = "-";
        long probes = 0;
        for (int pair = 0; pair < 5; ++pair) {
            OracleVariant v = variants[pair];
            ScorerModel model =
                init_model(variant_system(v), corpus, dims, 100 + (uint64_t)pair);
            const Sentence& s = corpus[(size_t)(3 + 7 * pair)];
            auto seq = oracle_sequence(s, v, model.labels);
            LossGrad base = loss_and_gradient(s, seq, model, cfg, false, 99);
            for (const TensorInfo* t : model.layout.all()) {
                size_t count = t->count();
                std::set<size_t> idxs = {0, count / 3, (2 * count) / 3, count - 1};
                for (size_t local : idxs) {
                    size_t j = t->offset + local;
                    ScorerModel probe = model;
                    probe.theta[(Eigen::Index)j] += h;
                    double up = loss_and_gradient(s, seq, probe, cfg, false, 99).nll;
                    probe.theta[(Eigen::Index)j] -= 2 * h;
                    double down = loss_and_gradient(s, seq, probe, cfg, false, 99).nll;
                    double fd = (up - down) / (2 * h);
                    double an = base.grad[(Eigen::Index)j];
                    double rel = std::fabs(fd - an) /
                                 std::max({std::fabs(fd), std::fabs(an), 1e-3});
                    ++probes;
                    if (rel > worst) {
                        worst = rel;
                        worst_at = t->name;
                    }
                }
            }
        }
        double dt = elapsed(t0);
        if (worst >= 1e-4)
            return {false, "worst relative error " + num(worst, 8) + " at " + worst_at};
        if (dt >= 60.0) return {false, "exceeded the 60s budget: " + num(dt, 1) + "s"};
        return {true, std::to_string(probes) + " probes over all tensors, worst rel err " +
                          num(worst, 8)};
    });

    run(9, "overfit a 10-sentence corpus", [&]() -> std::pair<bool, std::string> {
        auto corpus = ts::toy_corpus(10, 77);
        const std::pair<SystemId, OracleVariant> pairs[] = {
            {SystemId::ArcSwift, OracleVariant::Asw},
            {SystemId::ArcEager, OracleVariant::AeR},
            {SystemId::ArcStandard, OracleVariant::Asd},
            {SystemId::ArcHybrid, OracleVariant::Ah}};
        for (auto [sys, v] : pairs) {
            TrainerConfig cfg;
            cfg.epochs = 200;
            cfg.batch_size = 4;
            cfg.lr0 = 0.005;
            cfg.dropout_prob = 0.0;
            cfg.unk_replace_prob = 0.0;
            cfg.anneal_start = 1000;  // flat learning rate throughout
            cfg.seed = 13;
            ScorerModel model = train(corpus, sys, v, cfg);
            std::vector<ArcSet> preds;
            for (const auto& s : corpus) preds.push_back(greedy_parse(s, model, sys).arcs);
            EvalReport rep = evaluate_corpus(corpus, preds, PunctPolicy::Label);
            if (rep.uas() < 99.999 || rep.las() < 99.999)
                return {false, std::string(system_name(sys)) + " reaches only " +
                                   num(rep.uas(), 1) + "/" + num(rep.las(), 1) +
                                   " within 200 epochs"};
        }
        return {true, "all four systems reach 100/100 within 200 epochs"};
    });

    run(10, "held-out accuracy", [&]() -> std::pair<bool, std::string> {
        std::vector<Sentence> tr(
            data.train.begin(),
            data.train.begin() + std::min<size_t>(data.train.size(), 4000));
        TrainerConfig cfg;
        cfg.epochs = 4;
        cfg.seed = 11;
        ScorerModel model = train(tr, SystemId::ArcSwift, OracleVariant::Asw, cfg);
        std::vector<ArcSet> preds;
        for (const auto& s : data.dev)
            preds.push_back(greedy_parse(s, model, SystemId::ArcSwift).arcs);
        EvalReport rep = evaluate_corpus(data.dev, preds, PunctPolicy::Label);
        bool ok = rep.uas() >= 70.0;
        return {ok, "arc-swift dev UAS " + num(rep.uas(), 1) + " (floor 70.0), LAS " +
                        num(rep.las(), 1)};
    });

    run(11, "bootstrap and Holm adjustment", [&]() -> std::pair<bool, std::string> {
        auto corpus = ts::toy_corpus(100, 37);
        std::vector<ArcSet> good, bad;
        for (const auto& s : corpus) {
            ArcSet g = gold_arcs(s);
            good.push_back(g);
            ArcSet b = g;
            int n = s.size();
            for (auto& h : b.heads) {
                int dep = (int)(&h - b.heads.data()) + 1;
                h = (h + 1) % (n + 1);
                if (h == dep) h = (h + 1) % (n + 1);
            }
            bad.push_back(std::move(b));
        }
        BootstrapResult bs = paired_bootstrap(good, bad, corpus, 10000, 13, PunctPolicy::Label);
        if (bs.p_uas > 0.001 || bs.p_las > 0.001)
            return {false, "p_uas " + num(bs.p_uas, 5) + ", p_las " + num(bs.p_las, 5) +
                               " above 0.001"};
        auto adj = holm_adjust({0.01, 0.04});
        if (std::fabs(adj[0] - 0.02) > 1e-12 || std::fabs(adj[1] - 0.04) > 1e-12)
            return {false, "holm({0.01, 0.04}) gave {" + num(adj[0]) + ", " + num(adj[1]) + "}"};
        return {true, "p = " + num(bs.p_uas, 5) + " <= 0.001; holm({0.01, 0.04}) = {0.02, 0.04}"};
    });

    run(12, "candidate-scan scaling exponent", [&]() -> std::pair<bool, std::string> {
        std::vector<Sentence> chains, flats;
        for (int n = 20; n <= 120; n += 10) {
            chains.push_back(ts::chain_sentence(n));
            flats.push_back(ts::flat_sentence(n));
        }
        LabelVocab cv = LabelVocab::from_corpus(chains);
        LabelVocab fv = LabelVocab::from_corpus(flats);
        double b_chain = runtime_scaling_report(chains, cv).exponent;
        double b_dev = runtime_scaling_report(data.dev_proj, dev_vocab).exponent;
        double b_flat = runtime_scaling_report(flats, fv).exponent;
        bool ok = b_chain >= 1.8 && b_chain <= 2.2 && b_dev < 1.3;
        // Right-branching chains realize the quadratic bound: RArc[1] never
        // pops, so the feasibility scan walks an ever-longer attached prefix.
        // All-roots trees stay linear because every RArc[k] pop collapses
        // the stack back down; both exponents are printed for the record.
        return {ok, "chains b=" + num(b_chain, 2) + " in [1.8, 2.2]; dev b=" + num(b_dev, 2) +
                        " < 1.3; all-roots corpus measures b=" + num(b_flat, 2)};
    });

    std::printf("\n");
    if (failures == 0) {
        std::printf("gate: 12/12 passed\n");
        return 0;
    }
    std::printf("gate: %d check(s) failed\n", failures);
    return 1;
}
