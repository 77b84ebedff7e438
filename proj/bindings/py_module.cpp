#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <vector>

#include "swiftdep/config.hpp"
#include "swiftdep/decode.hpp"
#include "swiftdep/eval.hpp"
#include "swiftdep/oracle.hpp"
#include "swiftdep/stats.hpp"

namespace py = pybind11;
using namespace swiftdep;

namespace {

OracleVariant variant_for(const std::string& system, const std::string& oracle) {
    if (system == "ae") {
        if (oracle.empty() || oracle == "static-r") return OracleVariant::AeR;
        if (oracle == "static-s") return OracleVariant::AeS;
        throw ContractError("unknown arc-eager oracle '" + oracle + "'");
    }
    if (!oracle.empty())
        throw ContractError("oracle choices exist for the arc-eager system only");
    if (system == "asd") return OracleVariant::Asd;
    if (system == "ah") return OracleVariant::Ah;
    if (system == "asw") return OracleVariant::Asw;
    throw ContractError("unknown system '" + system + "'");
}

std::string oracle_blocks(const std::string& conllu, const std::string& system,
                          const std::string& oracle) {
    OracleVariant variant = variant_for(system, oracle);
    auto corpus = parse_conllu(conllu);
    LabelVocab vocab = LabelVocab::from_corpus(corpus);
    std::string out;
    bool first = true;
    for (const Sentence& s : corpus) {
        if (!is_projective(s)) continue;
        if (!first) out += "\n";
        out += format_transition_block(oracle_sequence(s, variant, vocab), vocab);
        first = false;
    }
    return out;
}

ScorerModel train_on(const std::string& conllu, const std::string& system,
                     const std::string& oracle,
                     const std::map<std::string, std::string>& options, uint64_t seed) {
    OracleVariant variant = variant_for(system, oracle);
    TrainerConfig cfg;
    apply_trainer_config(options, cfg);
    cfg.seed = seed;
    auto split = filter_projective(parse_conllu(conllu));
    if (split.kept.empty()) throw ContractError("train: no projective sentences");
    return train(split.kept, variant_system(variant), variant, cfg);
}

std::string parse_with(const ScorerModel& model, const std::string& conllu, int beam,
                       const std::string& norm_name) {
    auto corpus = parse_conllu(conllu);
    BeamNorm norm = beam_norm_from_name(norm_name);
    std::vector<ArcSet> preds;
    preds.reserve(corpus.size());
    for (const Sentence& s : corpus)
        preds.push_back(beam <= 1 ? greedy_parse(s, model, model.system).arcs
                                  : beam_parse(s, model, model.system, beam, norm).arcs);
    return write_conllu(corpus, &preds);
}

py::dict evaluate_texts(const std::string& gold_text, const std::string& pred_text,
                        const std::string& punct) {
    PunctPolicy policy = punct == "xpos" ? PunctPolicy::Xpos : PunctPolicy::Label;
    auto gold = parse_conllu(gold_text);
    auto pred = parse_conllu(pred_text);
    std::vector<ArcSet> arcs;
    arcs.reserve(pred.size());
    for (const Sentence& s : pred) arcs.push_back(gold_arcs(s));
    EvalReport r = evaluate_corpus(gold, arcs, policy);
    py::dict out;
    out["uas"] = r.uas();
    out["las"] = r.las();
    out["tokens"] = r.total;
    out["sentences"] = r.sentences;
    out["multi_root_predictions"] = r.multi_root_predictions;
    return out;
}

py::dict length_stats(const std::string& conllu) {
    auto split = filter_projective(parse_conllu(conllu));
    if (split.kept.empty()) throw ContractError("stats: no projective sentences");
    LabelVocab vocab = LabelVocab::from_corpus(split.kept);
    const std::vector<OracleVariant> variants = {OracleVariant::Asd, OracleVariant::AeS,
                                                 OracleVariant::AeR, OracleVariant::Ah,
                                                 OracleVariant::Asw};
    auto rep = sequence_length_report(split.kept, variants, vocab);
    py::dict means;
    for (size_t v = 0; v < variants.size(); ++v)
        means[variant_name(variants[v])] = rep.mean_length[v];
    py::dict out;
    out["mean_sequence_length"] = means;
    out["length_ratio_asw_aeR"] = rep.ratio(OracleVariant::Asw, OracleVariant::AeR);
    out["sentences"] = split.kept.size();
    out["skipped_non_projective"] = split.skipped_indices.size();
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "transition-based dependency parsing toolkit";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
    py::register_exception<OracleError>(m, "OracleError", PyExc_ValueError);

    py::class_<ScorerModel>(m, "Model")
        .def_property_readonly("system",
                               [](const ScorerModel& mod) { return system_name(mod.system); })
        .def_property_readonly("labels",
                               [](const ScorerModel& mod) { return mod.labels.labels(); })
        .def_property_readonly("parameters",
                               [](const ScorerModel& mod) { return mod.theta.size(); })
        .def("save", [](const ScorerModel& mod, const std::string& path) {
            save_model(mod, path);
        });

    m.def("oracle", &oracle_blocks, py::arg("conllu"), py::arg("system") = "asw",
          py::arg("oracle") = "",
          "Gold transition blocks for every projective sentence of a CoNLL-U text.");
    m.def("train", &train_on, py::arg("conllu"), py::arg("system") = "asw",
          py::arg("oracle") = "", py::arg("options") = std::map<std::string, std::string>{},
          py::arg("seed") = 1,
          "Fit a scorer; options take the same key=value pairs as the config file.");
    m.def("load", &load_model, py::arg("path"), "Load a model saved by Model.save or the CLI.");
    m.def("parse", &parse_with, py::arg("model"), py::arg("conllu"), py::arg("beam") = 1,
          py::arg("beam_norm") = "length",
          "Parse every sentence; returns CoNLL-U with predicted heads and labels.");
    m.def("evaluate", &evaluate_texts, py::arg("gold"), py::arg("predicted"),
          py::arg("punct") = "label", "UAS/LAS of predicted against gold, as a dict.");
    m.def("stats", &length_stats, py::arg("conllu"),
          "Mean oracle sequence lengths per transition system.");
    m.def("is_projective_tree", [](const std::vector<int>& heads) {
        Sentence s;
        for (size_t i = 0; i < heads.size(); ++i) {
            Token t;
            t.id = static_cast<int>(i) + 1;
            t.form = "w";
            t.gold_head = heads[i];
            t.gold_label = "dep";
            s.tokens.push_back(t);
        }
        return is_projective(s);
    }, py::arg("heads"), "Projectivity of a head vector (heads[i] owns token i+1; 0 is root).");
}
