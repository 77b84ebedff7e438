#include "swiftdep/treebank.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>

namespace swiftdep {

LabelVocab::LabelVocab(const std::vector<std::string>& labels) {
    for (const auto& l : labels) add(l);
}

int LabelVocab::add(const std::string& label) {
    int idx = find(label);
    if (idx >= 0) return idx;
    labels_.push_back(label);
    return static_cast<int>(labels_.size()) - 1;
}

int LabelVocab::find(const std::string& label) const {
    for (size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == label) return static_cast<int>(i);
    return -1;
}

const std::string& LabelVocab::name(int index) const {
    if (index < 0 || index >= size()) throw ContractError("label index out of range");
    return labels_[static_cast<size_t>(index)];
}

LabelVocab LabelVocab::from_corpus(const std::vector<Sentence>& corpus) {
    LabelVocab vocab;
    for (const auto& s : corpus)
        for (const auto& t : s.tokens) vocab.add(t.gold_label);
    return vocab;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
        size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

bool is_plain_integer(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

// Tree-shape validation: every token reachable from the root, no cycles.
// Multiple root attachments only warn; UD treebanks promise a single root
// but predicted output may not.
void validate_sentence(const Sentence& sent, int sentence_start_line, int sentence_index,
                       TreebankWarnings* warnings) {
    const int n = sent.size();
    int roots = 0;
    for (const auto& tok : sent.tokens) {
        if (tok.gold_head < 0 || tok.gold_head > n)
            throw ParseError("HEAD out of range for token " + std::to_string(tok.id),
                             sentence_start_line);
        if (tok.gold_head == tok.id)
            throw ParseError("token " + std::to_string(tok.id) + " is its own head",
                             sentence_start_line);
        if (tok.gold_head == 0) ++roots;
    }
    // Cycle check: walk up from every token; a chain longer than n loops.
    for (int id = 1; id <= n; ++id) {
        int cur = id;
        int hops = 0;
        while (cur != 0) {
            cur = sent.token(cur).gold_head;
            if (++hops > n)
                throw ParseError("gold arcs contain a cycle through token " + std::to_string(id),
                                 sentence_start_line);
        }
    }
    if (roots != 1 && warnings != nullptr)
        warnings->entries.emplace_back(
            sentence_index, "expected exactly one root attachment, found " + std::to_string(roots));
}

}  // namespace

std::vector<Sentence> parse_conllu(const std::string& text, TreebankWarnings* warnings) {
    std::vector<Sentence> sentences;
    Sentence current;
    int line_no = 0;
    int sentence_start_line = 1;

    std::istringstream in(text);
    std::string line;
    auto flush_sentence = [&]() {
        if (current.tokens.empty()) return;
        for (size_t i = 0; i < current.tokens.size(); ++i) {
            if (current.tokens[i].id != static_cast<int>(i) + 1)
                throw ParseError("token ids not contiguous after skipping ranges/empty nodes",
                                 sentence_start_line);
        }
        validate_sentence(current, sentence_start_line, static_cast<int>(sentences.size()),
                          warnings);
        sentences.push_back(std::move(current));
        current = Sentence{};
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            flush_sentence();
            sentence_start_line = line_no + 1;
            continue;
        }
        if (line[0] == '#') continue;

        std::vector<std::string> fields = split_tabs(line);
        if (fields.size() != 10)
            throw ParseError("expected 10 tab-separated columns, got " +
                                 std::to_string(fields.size()),
                             line_no);

        const std::string& id_field = fields[0];
        // Multiword-token ranges ("3-4") and empty nodes ("5.1") carry no
        // syntactic word of their own.
        if (id_field.find('-') != std::string::npos || id_field.find('.') != std::string::npos)
            continue;
        if (!is_plain_integer(id_field)) throw ParseError("malformed token id '" + id_field + "'", line_no);
        if (!is_plain_integer(fields[6]))
            throw ParseError("non-integer HEAD '" + fields[6] + "'", line_no);

        Token tok;
        tok.id = std::stoi(id_field);
        tok.form = fields[1];
        tok.lemma = fields[2];
        tok.upos = fields[3];
        tok.xpos = fields[4];
        tok.gold_head = std::stoi(fields[6]);
        tok.gold_label = fields[7];
        current.tokens.push_back(std::move(tok));
    }
    flush_sentence();
    return sentences;
}

std::vector<Sentence> load_conllu_file(const std::string& path, TreebankWarnings* warnings) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_conllu(buf.str(), warnings);
}

std::string write_conllu(const std::vector<Sentence>& sentences,
                         const std::vector<ArcSet>* predicted) {
    if (predicted != nullptr && predicted->size() != sentences.size())
        throw ContractError("predicted arc sets do not match sentence count");
    std::ostringstream out;
    for (size_t si = 0; si < sentences.size(); ++si) {
        const Sentence& sent = sentences[si];
        const ArcSet* arcs = predicted != nullptr ? &(*predicted)[si] : nullptr;
        if (arcs != nullptr && arcs->size() != sent.size())
            throw ContractError("predicted arcs missing a head for sentence " + std::to_string(si));
        for (const Token& tok : sent.tokens) {
            int head = arcs != nullptr ? arcs->heads[static_cast<size_t>(tok.id) - 1] : tok.gold_head;
            const std::string& label =
                arcs != nullptr ? arcs->labels[static_cast<size_t>(tok.id) - 1] : tok.gold_label;
            out << tok.id << '\t' << tok.form << '\t' << tok.lemma << '\t' << tok.upos << '\t'
                << tok.xpos << '\t' << "_" << '\t' << head << '\t' << label << '\t' << "_" << '\t'
                << "_" << '\n';
        }
        out << '\n';
    }
    return out.str();
}

void save_conllu_file(const std::string& path, const std::vector<Sentence>& sentences,
                      const std::vector<ArcSet>* predicted) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << write_conllu(sentences, predicted);
}

bool is_projective(const Sentence& sentence) {
    const int n = sentence.size();
    // Pairwise crossing check over all gold arcs, root endpoint included.
    // Arcs sharing an endpoint nest; only strict interleaving crosses.
    for (int d1 = 1; d1 <= n; ++d1) {
        int h1 = sentence.token(d1).gold_head;
        int lo1 = std::min(h1, d1), hi1 = std::max(h1, d1);
        for (int d2 = d1 + 1; d2 <= n; ++d2) {
            int h2 = sentence.token(d2).gold_head;
            int lo2 = std::min(h2, d2), hi2 = std::max(h2, d2);
            if ((lo1 < lo2 && lo2 < hi1 && hi1 < hi2) ||
                (lo2 < lo1 && lo1 < hi2 && hi2 < hi1))
                return false;
        }
    }
    return true;
}

ProjectiveFilter filter_projective(const std::vector<Sentence>& corpus) {
    ProjectiveFilter out;
    for (size_t i = 0; i < corpus.size(); ++i) {
        if (is_projective(corpus[i]))
            out.kept.push_back(corpus[i]);
        else
            out.skipped_indices.push_back(static_cast<int>(i));
    }
    return out;
}

namespace {

// Attach every token of [lo, hi] below `head`: the span is cut into
// consecutive blocks, each block's chosen token becomes a child of `head`
// and recursively owns the rest of its block. Reaches every projective
// tree shape; not uniform over them.
void fill_span(int lo, int hi, int head, std::mt19937_64& rng, std::vector<int>& heads) {
    int pos = lo;
    while (pos <= hi) {
        std::uniform_int_distribution<int> len_dist(1, hi - pos + 1);
        int len = len_dist(rng);
        int block_lo = pos, block_hi = pos + len - 1;
        std::uniform_int_distribution<int> pick(block_lo, block_hi);
        int child = pick(rng);
        heads[static_cast<size_t>(child)] = head;
        fill_span(block_lo, child - 1, child, rng, heads);
        fill_span(child + 1, block_hi, child, rng, heads);
        pos = block_hi + 1;
    }
}

}  // namespace

Sentence random_projective_tree(int n, const LabelVocab& vocab, uint64_t seed) {
    if (n < 1) throw ContractError("random_projective_tree requires n >= 1");
    std::mt19937_64 rng(seed);
    std::vector<int> heads(static_cast<size_t>(n) + 1, -1);
    std::uniform_int_distribution<int> root_dist(1, n);
    int root = root_dist(rng);
    heads[static_cast<size_t>(root)] = 0;
    fill_span(1, root - 1, root, rng, heads);
    fill_span(root + 1, n, root, rng, heads);

    Sentence sent;
    std::uniform_int_distribution<int> label_dist(0, std::max(0, vocab.size() - 1));
    auto sample_label = [&](bool is_root) -> std::string {
        if (is_root && vocab.find("root") >= 0) return "root";
        if (vocab.size() == 0) return is_root ? "root" : "dep";
        return vocab.name(label_dist(rng));
    };
    for (int id = 1; id <= n; ++id) {
        Token tok;
        tok.id = id;
        tok.form = "w" + std::to_string(id);
        tok.lemma = "_";
        tok.upos = "X";
        tok.xpos = "X";
        tok.gold_head = heads[static_cast<size_t>(id)];
        tok.gold_label = sample_label(id == root);
        sent.tokens.push_back(std::move(tok));
    }
    return sent;
}

std::vector<bool> punctuation_mask(const Sentence& sentence, PunctPolicy policy) {
    static const std::array<const char*, 6> kPtbPunct = {"``", "''", ":", ",", ".", "-NONE-"};
    std::vector<bool> mask(static_cast<size_t>(sentence.size()), false);
    for (int id = 1; id <= sentence.size(); ++id) {
        const Token& tok = sentence.token(id);
        bool excluded = false;
        if (policy == PunctPolicy::Label) {
            excluded = tok.gold_label == "punct";
        } else {
            for (const char* tag : kPtbPunct)
                if (tok.xpos == tag) excluded = true;
        }
        mask[static_cast<size_t>(id) - 1] = excluded;
    }
    return mask;
}

ArcSet gold_arcs(const Sentence& sentence) {
    ArcSet arcs;
    for (const Token& tok : sentence.tokens) {
        arcs.heads.push_back(tok.gold_head);
        arcs.labels.push_back(tok.gold_label);
    }
    return arcs;
}

}  // namespace swiftdep
