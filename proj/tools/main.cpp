// swiftdep: transition-based dependency parsing toolkit.
//
// Subcommands: oracle, train, parse, eval, stats, fuzz. Every subcommand
// is deterministic for a fixed --seed; --jobs changes wall time, never
// output.

#include <atomic>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "swiftdep/config.hpp"
#include "swiftdep/decode.hpp"
#include "swiftdep/eval.hpp"
#include "swiftdep/oracle.hpp"
#include "swiftdep/stats.hpp"

using json = nlohmann::json;
using namespace swiftdep;

namespace {

// Shared flag values. One instance per process; each subcommand binds
// only the fields it reads, so its --help lists exactly those.
struct RunConfig {
    std::string system = "asw";
    std::string oracle_variant;  // static-s | static-r, arc-eager only
    std::string input;
    std::string output;
    std::string model_path;
    std::string config_path;
    int beam_size = 1;
    std::string beam_norm = "length";
    uint64_t seed = 1;
    int jobs = 1;
    std::string punct = "label";
};

OracleVariant resolve_variant(const std::string& system, const std::string& oracle_flag) {
    SystemId sys = system_from_name(system);
    if (sys != SystemId::ArcEager) {
        if (!oracle_flag.empty())
            throw ContractError("--oracle selects between the arc-eager oracles; --system " +
                                system + " has a single static oracle");
        switch (sys) {
            case SystemId::ArcStandard: return OracleVariant::Asd;
            case SystemId::ArcHybrid: return OracleVariant::Ah;
            default: return OracleVariant::Asw;
        }
    }
    if (oracle_flag.empty() || oracle_flag == "static-r") return OracleVariant::AeR;
    if (oracle_flag == "static-s") return OracleVariant::AeS;
    throw ContractError("unknown --oracle '" + oracle_flag + "' (expected static-s or static-r)");
}

PunctPolicy punct_from_name(const std::string& name) {
    if (name == "label") return PunctPolicy::Label;
    if (name == "xpos") return PunctPolicy::Xpos;
    throw ContractError("unknown --punct '" + name + "' (expected label or xpos)");
}

// Runs fn(i) for i in [0, count) across `jobs` threads. Results are
// written into pre-sized slots, so emission order never depends on the
// thread count. The first exception wins and is rethrown.
template <typename Fn>
void parallel_for(int count, int jobs, Fn&& fn) {
    jobs = std::max(1, std::min(jobs, count));
    if (jobs == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ContractError("cannot open output file: " + path);
    return os;
}

// ---------------------------------------------------------------- oracle

int cmd_oracle(const RunConfig& rc) {
    OracleVariant variant = resolve_variant(rc.system, rc.oracle_variant);
    auto corpus = load_conllu_file(rc.input);
    LabelVocab vocab = LabelVocab::from_corpus(corpus);

    struct Row {
        bool skipped = false;
        std::string block;
        int seq_len = 0;
        int shifts = 0, reduces = 0, larcs = 0, rarcs = 0;
    };
    std::vector<Row> rows(corpus.size());
    parallel_for(static_cast<int>(corpus.size()), rc.jobs, [&](int i) {
        const Sentence& s = corpus[static_cast<size_t>(i)];
        Row& row = rows[static_cast<size_t>(i)];
        if (!is_projective(s)) {
            row.skipped = true;
            return;
        }
        auto seq = oracle_sequence(s, variant, vocab);
        row.block = format_transition_block(seq, vocab);
        row.seq_len = static_cast<int>(seq.size());
        for (const Transition& t : seq) switch (t.kind) {
                case TransitionKind::Shift: ++row.shifts; break;
                case TransitionKind::Reduce: ++row.reduces; break;
                case TransitionKind::LeftArc:
                case TransitionKind::LeftArcK: ++row.larcs; break;
                default: ++row.rarcs; break;
            }
    });

    std::ofstream file;
    if (!rc.output.empty()) file = open_out(rc.output);
    std::ostream& blocks = rc.output.empty() ? std::cout : file;
    bool first = true;
    for (const Row& row : rows) {
        if (row.skipped) continue;
        if (!first) blocks << "\n";
        blocks << row.block;
        first = false;
    }

    std::ostream& summary = rc.output.empty() ? std::cerr : std::cout;
    summary << "sentence\tlength\tsequence_length\tshift\treduce\tlarc\trarc\n";
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].skipped) continue;
        summary << (i + 1) << "\t" << corpus[i].size() << "\t" << rows[i].seq_len << "\t"
                << rows[i].shifts << "\t" << rows[i].reduces << "\t" << rows[i].larcs << "\t"
                << rows[i].rarcs << "\n";
    }
    long skipped = 0;
    for (size_t i = 0; i < rows.size(); ++i)
        if (rows[i].skipped) {
            std::cerr << "skipped\t" << (i + 1) << "\tnon-projective\n";
            ++skipped;
        }
    std::cerr << "# " << (rows.size() - static_cast<size_t>(skipped)) << " sentences converted, "
              << skipped << " skipped\n";
    return 0;
}

// ----------------------------------------------------------------- train

int cmd_train(const RunConfig& rc, TrainerConfig cfg,
              const std::map<std::string, std::string>& overrides) {
    if (!rc.config_path.empty()) {
        auto kv = parse_config_file(rc.config_path);
        for (const auto& [k, v] : overrides) kv[k] = v;  // flags beat the file
        apply_trainer_config(kv, cfg);
    } else if (!overrides.empty()) {
        apply_trainer_config(overrides, cfg);
    }
    cfg.seed = rc.seed;

    SystemId sys = system_from_name(rc.system);
    OracleVariant variant = resolve_variant(rc.system, rc.oracle_variant);
    auto raw = load_conllu_file(rc.input);
    ProjectiveFilter split = filter_projective(raw);
    if (!split.skipped_indices.empty())
        std::cerr << "# dropped " << split.skipped_indices.size()
                  << " non-projective sentences before training\n";
    if (split.kept.empty()) throw ContractError("train: no projective sentences in " + rc.input);

    TrainLog log;
    ScorerModel model = train(split.kept, sys, variant, cfg, &log);
    for (size_t e = 0; e < log.epoch_nll.size(); ++e)
        std::cerr << "# epoch " << (e + 1) << "\tlr " << log.epoch_lr[e] << "\tnll "
                  << log.epoch_nll[e] << "\n";
    if (rc.model_path.empty()) throw ContractError("train: --model output path is required");
    save_model(model, rc.model_path);
    std::cout << "{\"sentences\": " << split.kept.size() << ", \"epochs\": " << cfg.epochs
              << ", \"final_nll\": " << (log.epoch_nll.empty() ? 0.0 : log.epoch_nll.back())
              << ", \"model\": \"" << rc.model_path << "\"}\n";
    return 0;
}

// ----------------------------------------------------------------- parse

int cmd_parse(const RunConfig& rc) {
    ScorerModel model = load_model(rc.model_path);
    auto corpus = load_conllu_file(rc.input);
    BeamNorm norm = beam_norm_from_name(rc.beam_norm);
    std::vector<ArcSet> preds(corpus.size());
    parallel_for(static_cast<int>(corpus.size()), rc.jobs, [&](int i) {
        const Sentence& s = corpus[static_cast<size_t>(i)];
        if (rc.beam_size <= 1)
            preds[static_cast<size_t>(i)] = greedy_parse(s, model, model.system).arcs;
        else
            preds[static_cast<size_t>(i)] =
                beam_parse(s, model, model.system, rc.beam_size, norm).arcs;
    });
    if (rc.output.empty())
        std::cout << write_conllu(corpus, &preds);
    else
        save_conllu_file(rc.output, corpus, &preds);
    std::cerr << "# parsed " << corpus.size() << " sentences with " << system_name(model.system)
              << (rc.beam_size <= 1 ? " greedy" : " beam " + std::to_string(rc.beam_size)) << "\n";
    return 0;
}

// ------------------------------------------------------------------ eval

json report_to_json(const EvalReport& r) {
    json bins = json::array();
    for (int b = 0; b < kNumLengthBins; ++b)
        bins.push_back({{"bin", kLengthBinNames[b]},
                        {"total", r.bins[static_cast<size_t>(b)].total},
                        {"errors", r.bins[static_cast<size_t>(b)].errors},
                        {"error_rate", r.bins[static_cast<size_t>(b)].error_rate()}});
    return json{{"uas", r.uas()},
                {"las", r.las()},
                {"tokens", r.total},
                {"sentences", r.sentences},
                {"multi_root_predictions", r.multi_root_predictions},
                {"length_bins", bins}};
}

int cmd_eval(const RunConfig& rc, const std::vector<std::string>& compare, int bootstrap) {
    PunctPolicy policy = punct_from_name(rc.punct);
    auto gold = load_conllu_file(rc.input);

    auto arcs_of = [&](const std::string& path) {
        auto parsed = load_conllu_file(path);
        if (parsed.size() != gold.size())
            throw ContractError("eval: " + path + " has " + std::to_string(parsed.size()) +
                                " sentences, gold has " + std::to_string(gold.size()));
        std::vector<ArcSet> arcs;
        arcs.reserve(parsed.size());
        for (const Sentence& s : parsed) arcs.push_back(gold_arcs(s));
        return arcs;
    };

    json out;
    if (compare.empty()) throw ContractError("eval: give at least one predicted file");
    if (compare.size() == 1) {
        out = report_to_json(evaluate_corpus(gold, arcs_of(compare[0]), policy));
        out["file"] = compare[0];
    } else {
        std::vector<std::vector<ArcSet>> systems;
        json reports = json::array();
        for (const std::string& path : compare) {
            systems.push_back(arcs_of(path));
            json r = report_to_json(evaluate_corpus(gold, systems.back(), policy));
            r["file"] = path;
            reports.push_back(std::move(r));
        }
        json pairs = json::array();
        std::vector<double> raw_uas, raw_las;
        for (size_t a = 0; a < systems.size(); ++a)
            for (size_t b = a + 1; b < systems.size(); ++b) {
                BootstrapResult br = paired_bootstrap(systems[a], systems[b], gold, bootstrap,
                                                      rc.seed, policy);
                pairs.push_back({{"a", compare[a]},
                                 {"b", compare[b]},
                                 {"p_uas", br.p_uas},
                                 {"p_las", br.p_las}});
                raw_uas.push_back(br.p_uas);
                raw_las.push_back(br.p_las);
            }
        auto adj_uas = holm_adjust(raw_uas);
        auto adj_las = holm_adjust(raw_las);
        for (size_t i = 0; i < pairs.size(); ++i) {
            pairs[i]["p_uas_holm"] = adj_uas[i];
            pairs[i]["p_las_holm"] = adj_las[i];
        }
        out["systems"] = std::move(reports);
        out["bootstrap"] = {{"samples", bootstrap}, {"seed", rc.seed}, {"pairs", std::move(pairs)}};
    }

    std::string text = out.dump(2) + "\n";
    if (rc.output.empty())
        std::cout << text;
    else
        open_out(rc.output) << text;
    return 0;
}

// ----------------------------------------------------------------- stats

int cmd_stats(const RunConfig& rc) {
    auto raw = load_conllu_file(rc.input);
    ProjectiveFilter split = filter_projective(raw);
    if (split.kept.empty()) throw ContractError("stats: no projective sentences in " + rc.input);
    LabelVocab vocab = LabelVocab::from_corpus(split.kept);
    const std::vector<OracleVariant> variants = {OracleVariant::Asd, OracleVariant::AeS,
                                                 OracleVariant::AeR, OracleVariant::Ah,
                                                 OracleVariant::Asw};

    auto lengths = sequence_length_report(split.kept, variants, vocab);
    auto cands = candidate_count_report(split.kept, variants, vocab);

    std::ofstream file;
    if (!rc.output.empty()) file = open_out(rc.output);
    std::ostream& tsv = rc.output.empty() ? std::cerr : file;
    tsv << "sentence\tlength";
    for (OracleVariant v : variants) tsv << "\t" << variant_name(v);
    tsv << "\n";
    for (size_t i = 0; i < split.kept.size(); ++i) {
        tsv << (i + 1) << "\t" << split.kept[i].size();
        for (size_t v = 0; v < variants.size(); ++v) tsv << "\t" << lengths.lengths[v][i];
        tsv << "\n";
    }

    json out;
    out["sentences"] = split.kept.size();
    out["skipped_non_projective"] = split.skipped_indices.size();
    json mean = json::object(), steps = json::object(), labeled = json::object();
    for (size_t v = 0; v < variants.size(); ++v) {
        const char* name = variant_name(variants[v]);
        mean[name] = lengths.mean_length[v];
        steps[name] = cands.per_step_mean(variants[v]);
        labeled[name] = cands.per_step_labeled_mean(variants[v]);
    }
    out["mean_sequence_length"] = mean;
    out["per_step_candidates"] = steps;
    out["per_step_labeled_candidates"] = labeled;
    out["length_ratio_asw_aeR"] = lengths.ratio(OracleVariant::Asw, OracleVariant::AeR);
    out["candidate_ratio_asw_aeR"] =
        cands.per_step_ratio(OracleVariant::Asw, OracleVariant::AeR);
    out["max_step_candidates_aeR"] =
        cands.max_step_skeletons[2];  // variants[2] is the arc-eager oracle

    try {
        auto scaling = runtime_scaling_report(split.kept, vocab);
        out["scaling"] = {{"exponent", scaling.exponent},
                          {"log_a", scaling.log_a},
                          {"distinct_lengths", scaling.distinct_n}};
    } catch (const ContractError& e) {
        out["scaling"] = {{"unavailable", e.what()}};
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

// ------------------------------------------------------------------ fuzz

// Enumerates every complete derivation of every projective tree with n
// tokens and checks the derived tree multiset against a direct
// enumeration of projective head vectors.
bool exhaustive_check(int n, SystemId system, std::string& complaint) {
    LabelVocab vocab(std::vector<std::string>{"x"});

    std::vector<std::vector<int>> projective;
    std::vector<int> heads(static_cast<size_t>(n), 0);
    while (true) {
        Sentence s;
        for (int i = 1; i <= n; ++i) {
            Token t;
            t.id = i;
            t.form = "w" + std::to_string(i);
            t.gold_head = heads[static_cast<size_t>(i - 1)];
            t.gold_label = "x";
            s.tokens.push_back(t);
        }
        bool tree = true;
        for (int i = 1; i <= n && tree; ++i) {
            int hops = 0, at = i;
            while (at != 0 && hops <= n) at = heads[static_cast<size_t>(at - 1)], ++hops;
            tree = at == 0;
        }
        if (tree && is_projective(s)) projective.push_back(heads);
        int pos = 0;
        while (pos < n && heads[static_cast<size_t>(pos)] == n) heads[static_cast<size_t>(pos++)] = 0;
        if (pos == n) break;
        ++heads[static_cast<size_t>(pos)];
    }

    std::map<std::vector<int>, long> derived;
    struct Walker {
        SystemId system;
        std::map<std::vector<int>, long>* out;
        void walk(const ParserState& st) {
            if (is_terminal(st, system)) {
                for (int id = 1; id <= st.n; ++id)
                    if (!st.is_attached(id)) return;  // incomplete: fallback would invent arcs
                std::vector<int> h(static_cast<size_t>(st.n), 0);
                for (const StateArc& a : st.arcs) h[static_cast<size_t>(a.dep - 1)] = a.head;
                (*out)[h] += 1;
                return;
            }
            for (const Transition& t : feasible(st, system)) {
                Transition labeled = t;
                if (labeled.induces_arc()) labeled.label = 0;
                walk(apply(st, labeled, system));
            }
        }
    };
    Walker w{system, &derived};
    w.walk(initial_state(n));

    if (derived.size() != projective.size()) {
        complaint = "n=" + std::to_string(n) + " " + system_name(system) + ": derives " +
                    std::to_string(derived.size()) + " trees, expected " +
                    std::to_string(projective.size());
        return false;
    }
    for (const auto& h : projective) {
        auto it = derived.find(h);
        if (it == derived.end()) {
            complaint = "n=" + std::to_string(n) + " " + system_name(system) +
                        ": a projective tree is not derivable";
            return false;
        }
        if (system == SystemId::ArcSwift && it->second != 1) {
            complaint = "n=" + std::to_string(n) + " asw: a tree has " +
                        std::to_string(it->second) + " derivations, expected exactly 1";
            return false;
        }
    }
    return true;
}

bool tree_properties(const Sentence& s, const LabelVocab& vocab, std::string& complaint) {
    const int n = s.size();
    ArcSet want = gold_arcs(s);
    std::vector<Transition> seqs[5];
    const OracleVariant variants[5] = {OracleVariant::Asd, OracleVariant::AeS, OracleVariant::AeR,
                                       OracleVariant::Ah, OracleVariant::Asw};
    for (int v = 0; v < 5; ++v) {
        seqs[v] = oracle_sequence(s, variants[v], vocab);
        ArcSet got = replay(seqs[v], n, variant_system(variants[v]), vocab);
        if (got.heads != want.heads || got.labels != want.labels) {
            complaint = std::string("round-trip mismatch under ") + variant_name(variants[v]);
            return false;
        }
    }
    const auto& asw = seqs[4];
    const auto& aer = seqs[2];
    long rarck = 0, larck = 0;
    for (const Transition& t : asw) {
        if (t.kind == TransitionKind::RightArcK) ++rarck;
        if (t.kind == TransitionKind::LeftArcK) ++larck;
    }
    if (static_cast<long>(asw.size()) != 2L * n - rarck) {
        complaint = "arc-swift length differs from 2n - #RArc[k]";
        return false;
    }
    auto expanded = expand_swift_to_eager(asw);
    if (expanded.size() != aer.size()) {
        complaint = "expanded arc-swift length differs from the arc-eager sequence";
        return false;
    }
    ArcSet via_eager = replay(expanded, n, SystemId::ArcEager, vocab);
    if (via_eager.heads != want.heads || via_eager.labels != want.labels) {
        complaint = "expanded arc-swift sequence derives a different tree under arc-eager";
        return false;
    }
    long reduces = 0;
    for (const Transition& t : aer)
        if (t.kind == TransitionKind::Reduce) ++reduces;
    if (static_cast<long>(asw.size()) != static_cast<long>(aer.size()) - reduces) {
        complaint = "arc-swift length differs from arc-eager length minus its reduces";
        return false;
    }
    return true;
}

int cmd_fuzz(const RunConfig& rc, int trees, int max_n) {
    if (trees < 1 || max_n < 1) throw ContractError("fuzz: --trees and --max-n must be positive");
    std::string complaint;
    for (int n = 1; n <= std::min(4, max_n); ++n)
        for (SystemId sys : {SystemId::ArcStandard, SystemId::ArcEager, SystemId::ArcHybrid,
                             SystemId::ArcSwift})
            if (!exhaustive_check(n, sys, complaint)) {
                std::cerr << "fuzz: " << complaint << "\n";
                return 1;
            }

    LabelVocab vocab(std::vector<std::string>{"root", "dep", "mod", "obj"});
    // ascending n: the first failure is already a smallest reproduction
    for (int n = 1; n <= max_n; ++n) {
        int per_length = std::max(1, trees / max_n);
        for (int t = 0; t < per_length; ++t) {
            uint64_t seed = rc.seed + 1000003ULL * static_cast<uint64_t>(n) +
                            static_cast<uint64_t>(t);
            Sentence s = random_projective_tree(n, vocab, seed);
            if (!tree_properties(s, vocab, complaint)) {
                std::cerr << "fuzz: " << complaint << "\nminimal failing sentence (" << n
                          << " tokens, seed " << seed << "):\n"
                          << write_conllu({s});
                return 1;
            }
        }
    }
    std::cout << "fuzz: all properties hold (" << trees << " trees, n <= " << max_n << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"transition-based dependency parsing toolkit"};
    app.require_subcommand(1);

    RunConfig rc;
    TrainerConfig trainer_defaults;
    std::map<std::string, std::string> overrides;
    std::vector<std::string> compare;
    int bootstrap = 10000;
    int fuzz_trees = 1000, fuzz_max_n = 30;

    auto add_system = [&](CLI::App* cmd) {
        cmd->add_option("--system", rc.system, "transition system: asd, ae, ah, asw")
            ->check(CLI::IsMember({"asd", "ae", "ah", "asw"}));
        cmd->add_option("--oracle", rc.oracle_variant,
                        "arc-eager oracle: static-s (shift-preferring) or static-r "
                        "(reduce-preferring)")
            ->check(CLI::IsMember({"static-s", "static-r"}));
    };
    auto add_jobs = [&](CLI::App* cmd) {
        cmd->add_option("--jobs", rc.jobs, "worker threads; output is identical for any value")
            ->check(CLI::PositiveNumber);
    };

    CLI::App* oracle = app.add_subcommand(
        "oracle", "derive gold transition sequences (blocks to --output, TSV summary and "
                  "skip report alongside)");
    oracle->add_option("--input", rc.input, "CoNLL-U treebank")->required();
    oracle->add_option("--output", rc.output, "transition block file (default: stdout)");
    add_system(oracle);
    add_jobs(oracle);

    CLI::App* train_cmd = app.add_subcommand(
        "train", "fit a scorer on a treebank; config file keys lr0, beta1, beta2, epsilon, "
                 "batch_size, epochs, anneal_factor, anneal_start, anneal_every, dropout_prob, "
                 "unk_replace_prob, seed, word_dim, pos_dim, window");
    train_cmd->add_option("--input", rc.input, "training treebank (CoNLL-U)")->required();
    train_cmd->add_option("--model", rc.model_path, "model output path")->required();
    train_cmd->add_option("--config", rc.config_path, "key=value config file");
    train_cmd->add_option("--seed", rc.seed, "training seed");
    add_system(train_cmd);
    for (const char* key : {"lr0", "beta1", "beta2", "epsilon", "batch_size", "epochs",
                            "anneal_factor", "anneal_start", "anneal_every", "dropout_prob",
                            "unk_replace_prob", "word_dim", "pos_dim", "window"})
        train_cmd->add_option_function<std::string>(
            std::string("--") + key,
            [&overrides, key](const std::string& v) { overrides[key] = v; },
            std::string("override config key ") + key);

    CLI::App* parse_cmd = app.add_subcommand("parse", "parse a treebank with a trained model");
    parse_cmd->add_option("--input", rc.input, "input CoNLL-U file")->required();
    parse_cmd->add_option("--model", rc.model_path, "trained model file")->required();
    parse_cmd->add_option("--output", rc.output, "predicted CoNLL-U (default: stdout)");
    parse_cmd->add_option("--beam", rc.beam_size, "beam size; 1 decodes greedily")
        ->check(CLI::PositiveNumber);
    parse_cmd->add_option("--beam-norm", rc.beam_norm, "winner selection: none or length")
        ->check(CLI::IsMember({"none", "length"}));
    add_jobs(parse_cmd);

    CLI::App* eval_cmd = app.add_subcommand(
        "eval", "score predictions against gold; two or more --compare files add paired "
                "bootstrap tests with Holm-adjusted p-values");
    eval_cmd->add_option("--input", rc.input, "gold CoNLL-U file")->required();
    eval_cmd->add_option("--compare", compare, "predicted CoNLL-U file(s)")
        ->required()
        ->expected(1, 16);
    eval_cmd->add_option("--bootstrap", bootstrap, "bootstrap sample count")
        ->check(CLI::PositiveNumber);
    eval_cmd->add_option("--seed", rc.seed, "bootstrap resampling seed");
    eval_cmd->add_option("--punct", rc.punct, "punctuation exclusion: label or xpos")
        ->check(CLI::IsMember({"label", "xpos"}));
    eval_cmd->add_option("--output", rc.output, "JSON report path (default: stdout)");

    CLI::App* stats_cmd = app.add_subcommand(
        "stats", "sequence length, candidate count and scaling reports over all oracles");
    stats_cmd->add_option("--input", rc.input, "CoNLL-U treebank")->required();
    stats_cmd->add_option("--output", rc.output, "per-sentence TSV path (default: stderr)");
    add_jobs(stats_cmd);

    CLI::App* fuzz_cmd = app.add_subcommand(
        "fuzz", "property suite: exhaustive small-n enumeration, oracle round-trips, "
                "expansion equivalence, length identities");
    fuzz_cmd->add_option("--trees", fuzz_trees, "random trees to test")
        ->check(CLI::PositiveNumber);
    fuzz_cmd->add_option("--max-n", fuzz_max_n, "largest sentence length")
        ->check(CLI::PositiveNumber);
    fuzz_cmd->add_option("--seed", rc.seed, "tree generator seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(oracle)) return cmd_oracle(rc);
        if (app.got_subcommand(train_cmd)) return cmd_train(rc, trainer_defaults, overrides);
        if (app.got_subcommand(parse_cmd)) return cmd_parse(rc);
        if (app.got_subcommand(eval_cmd)) return cmd_eval(rc, compare, bootstrap);
        if (app.got_subcommand(stats_cmd)) return cmd_stats(rc);
        if (app.got_subcommand(fuzz_cmd)) return cmd_fuzz(rc, fuzz_trees, fuzz_max_n);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
