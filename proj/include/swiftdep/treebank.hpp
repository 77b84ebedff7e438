#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "swiftdep/errors.hpp"

namespace swiftdep {

// One syntactic word of a sentence. Ids are 1-based; head 0 means the
// artificial root at position 0.
struct Token {
    int id = 0;
    std::string form;
    std::string lemma = "_";
    std::string upos = "_";
    std::string xpos = "_";
    int gold_head = 0;
    std::string gold_label;
};

struct Sentence {
    std::vector<Token> tokens;

    int size() const { return static_cast<int>(tokens.size()); }
    const Token& token(int id) const { return tokens[static_cast<size_t>(id) - 1]; }
    Token& token(int id) { return tokens[static_cast<size_t>(id) - 1]; }
};

// Ordered label set with a bijective index<->string mapping.
class LabelVocab {
public:
    LabelVocab() = default;
    explicit LabelVocab(const std::vector<std::string>& labels);

    // Returns the existing index or inserts at the end.
    int add(const std::string& label);
    // -1 if unknown.
    int find(const std::string& label) const;
    const std::string& name(int index) const;
    int size() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }

    static LabelVocab from_corpus(const std::vector<Sentence>& corpus);

private:
    std::vector<std::string> labels_;
};

// A predicted (or gold) attachment for every token: heads[i] and labels[i]
// belong to token i+1.
struct ArcSet {
    std::vector<int> heads;
    std::vector<std::string> labels;

    int size() const { return static_cast<int>(heads.size()); }
};

enum class PunctPolicy {
    Label,  // exclude tokens whose gold relation is "punct" (UD)
    Xpos,   // exclude tokens whose XPOS is a PTB punctuation tag
};

struct TreebankWarnings {
    // sentence index -> message, e.g. multiple root attachments
    std::vector<std::pair<int, std::string>> entries;
};

std::vector<Sentence> parse_conllu(const std::string& text, TreebankWarnings* warnings = nullptr);
std::vector<Sentence> load_conllu_file(const std::string& path, TreebankWarnings* warnings = nullptr);

std::string write_conllu(const std::vector<Sentence>& sentences,
                         const std::vector<ArcSet>* predicted = nullptr);
void save_conllu_file(const std::string& path, const std::vector<Sentence>& sentences,
                      const std::vector<ArcSet>* predicted = nullptr);

// True iff no two gold arcs cross. Arcs cross when their spans strictly
// interleave (lo1 < lo2 < hi1 < hi2); arcs sharing an endpoint nest. The
// root arc endpoint at position 0 participates like any other.
bool is_projective(const Sentence& sentence);

// Split a corpus into projective sentences and the indices of excluded
// non-projective ones.
struct ProjectiveFilter {
    std::vector<Sentence> kept;
    std::vector<int> skipped_indices;
};
ProjectiveFilter filter_projective(const std::vector<Sentence>& corpus);

// Synthetic projective single-root tree with uniformly sampled labels.
// Deterministic for a fixed seed. Throws ContractError for n == 0.
Sentence random_projective_tree(int n, const LabelVocab& vocab, uint64_t seed);

// mask[i] is true when token i+1 is excluded from evaluation.
std::vector<bool> punctuation_mask(const Sentence& sentence, PunctPolicy policy = PunctPolicy::Label);

ArcSet gold_arcs(const Sentence& sentence);

}  // namespace swiftdep
