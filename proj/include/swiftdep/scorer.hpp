#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "swiftdep/oracle.hpp"
#include "swiftdep/transition.hpp"
#include "swiftdep/treebank.hpp"

namespace swiftdep {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<RowMat>;
using CMapMat = Eigen::Map<const RowMat>;
using MapVec = Eigen::Map<Eigen::VectorXd>;
using CMapVec = Eigen::Map<const Eigen::VectorXd>;

// Width of the per-token head/dependent representations and of the
// combined feature vector. Fixed across the toolkit.
inline constexpr int kRepr = 32;
inline constexpr int kFeat = 32;

struct ModelDims {
    int word_dim = 50;
    int pos_dim = 16;
    int window = 2;

    int input() const { return (2 * window + 1) * (word_dim + pos_dim); }
};

// Closed word/POS inventory with reserved rows for unknown words, the
// artificial root, and out-of-sentence window padding.
class StringVocab {
public:
    static constexpr int kUnk = 0;
    static constexpr int kRoot = 1;
    static constexpr int kPad = 2;

    StringVocab();

    int add(const std::string& item);          // existing index or new one
    int find(const std::string& item) const;   // -1 if absent
    int find_or_unk(const std::string& item) const;
    const std::string& name(int index) const { return items_[static_cast<size_t>(index)]; }
    int size() const { return static_cast<int>(items_.size()); }
    const std::vector<std::string>& items() const { return items_; }

private:
    std::vector<std::string> items_;
    std::unordered_map<std::string, int> index_;
};

struct TensorInfo {
    const char* name = "";
    size_t offset = 0;
    int rows = 0;
    int cols = 0;

    size_t count() const { return static_cast<size_t>(rows) * static_cast<size_t>(cols); }
};

// All parameters live in one flat vector; each tensor is a named
// row-major window into it. Keeps Adam, gradient accumulation, the
// finite-difference check, and serialization uniform.
struct ParamLayout {
    TensorInfo word_emb;    // n_words x word_dim
    TensorInfo pos_emb;     // n_pos x pos_dim
    TensorInfo w_head;      // repr x input
    TensorInfo b_head;      // repr x 1
    TensorInfo w_dep;       // repr x input
    TensorInfo b_dep;       // repr x 1
    TensorInfo bi_w;        // feat x (repr*repr); row i is W_i flattened row-major
    TensorInfo bi_b;        // feat x repr; row i is b_i
    TensorInfo bi_c;        // feat x repr; row i is c_i
    TensorInfo bi_d;        // feat x 1
    TensorInfo lab_left;    // n_labels x feat
    TensorInfo lab_left_b;  // n_labels x 1
    TensorInfo lab_right;   // n_labels x feat
    TensorInfo lab_right_b; // n_labels x 1
    TensorInfo shift_w;     // feat x 1
    TensorInfo shift_b;     // 1 x 1
    TensorInfo null_feat;   // feat x 1; stands in for absent feature slots
    TensorInfo cls_w;       // (2 + 2*n_labels) x (4*feat)
    TensorInfo cls_b;       // (2 + 2*n_labels) x 1
    size_t total = 0;

    static ParamLayout make(int n_words, int n_pos, int n_labels, const ModelDims& dims);
    std::vector<const TensorInfo*> all() const;
};

class ScorerModel {
public:
    SystemId system = SystemId::ArcSwift;
    ModelDims dims;
    StringVocab words;
    StringVocab pos;
    LabelVocab labels;
    ParamLayout layout;
    Eigen::VectorXd theta;

    MapMat view(const TensorInfo& t) { return MapMat(theta.data() + t.offset, t.rows, t.cols); }
    CMapMat view(const TensorInfo& t) const {
        return CMapMat(theta.data() + t.offset, t.rows, t.cols);
    }
    MapVec vec(const TensorInfo& t) {
        return MapVec(theta.data() + t.offset, static_cast<Eigen::Index>(t.count()));
    }
    CMapVec vec(const TensorInfo& t) const {
        return CMapVec(theta.data() + t.offset, static_cast<Eigen::Index>(t.count()));
    }
};

// Builds vocabularies from the corpus and randomly initializes all
// parameters (deterministic for a fixed seed).
ScorerModel init_model(SystemId system, const std::vector<Sentence>& corpus, const ModelDims& dims,
                       uint64_t seed);

struct TokenRepr {
    Eigen::VectorXd head;  // dim kRepr
    Eigen::VectorXd dep;   // dim kRepr
};

// Windowed embedding concatenation followed by the two projections.
// index 0 is the artificial root; positions outside [0, n] use padding
// rows. Throws ContractError for index outside [0, n].
TokenRepr token_repr(const Sentence& sentence, int index, const ScorerModel& model);

// feat_i = ReLU(vh' W_i vd + b_i' vh + c_i' vd + d_i), exactly.
Eigen::VectorXd biaffine_combine(const Eigen::VectorXd& v_head, const Eigen::VectorXd& v_dep,
                                 const ScorerModel& model);

// Shared per-sentence forward state for decoding: all token reprs plus
// the caches that make one arc score a single repr-sized matvec.
struct EncodedSentence {
    int n = 0;
    Eigen::MatrixXd h;          // (n+1) x repr, row t = head repr of token t
    Eigen::MatrixXd d;          // (n+1) x repr
    Eigen::MatrixXd bh;         // (n+1) x feat, row t = [b_i' h_t]_i
    Eigen::MatrixXd cd;         // (n+1) x feat, row t = [c_i' d_t]_i
    std::vector<RowMat> P;      // per token D: feat x repr, row i = (W_i d_D)'
    Eigen::MatrixXd token_feat; // (n+1) x feat, row t = biaffine(h_t, d_t)
};

EncodedSentence encode(const Sentence& sentence, const ScorerModel& model);

// Class index layout for the stack-feature route:
// 0 = Shift, 1 = Reduce, 2+l = LArc(l), 2+n_labels+l = RArc(l).
int trad_class_index(const Transition& t, int n_labels);

struct ScoredCandidates {
    std::vector<Transition> cands;  // labeled, canonical transition order
    Eigen::VectorXd logp;           // log-probabilities, same indexing
    int skeleton_count = 0;         // unlabeled feasible transitions

    int argmax() const;
};

// Probability distribution over all feasible labeled transitions of the
// model's system. Arc-swift scores every arc candidate with the biaffine
// combination and a per-direction label layer plus a scalar Shift head;
// the other systems classify one feature block built from (s3,s2,s1,b1).
ScoredCandidates score_transitions(const ParserState& state, const EncodedSentence& enc,
                                   const ScorerModel& model);
ScoredCandidates score_transitions(const ParserState& state, const Sentence& sentence,
                                   const ScorerModel& model);

struct TrainerConfig {
    double lr0 = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.9;
    double epsilon = 1e-8;
    int batch_size = 32;
    int epochs = 10;
    double anneal_factor = 0.5;
    int anneal_start = 5;  // first epoch whose successors anneal; 10-epoch default
    int anneal_every = 1;  // UD-style runs use epochs=30, start=15, every=3
    double dropout_prob = 0.05;
    double unk_replace_prob = 0.10;
    uint64_t seed = 1;
    ModelDims dims;

    // lr for 1-based epoch e: lr0 * factor^max(0, floor((e-1-start)/every)+1)
    double lr_for_epoch(int epoch) const;
};

struct LossGrad {
    double nll = 0.0;
    Eigen::VectorXd grad;
};

// Negative log-likelihood of the oracle sequence plus exact gradients
// for every parameter. train_mode enables inverted dropout on the
// projection outputs and combined features and random UNK replacement
// of input words; both draw from a generator seeded with rng_seed only,
// so results are independent of threading and batch order.
LossGrad loss_and_gradient(const Sentence& sentence, const std::vector<Transition>& oracle_seq,
                           const ScorerModel& model, const TrainerConfig& cfg, bool train_mode,
                           uint64_t rng_seed);

struct AdamState {
    Eigen::VectorXd m;
    Eigen::VectorXd v;
    long t = 0;

    explicit AdamState(Eigen::Index size)
        : m(Eigen::VectorXd::Zero(size)), v(Eigen::VectorXd::Zero(size)) {}
};

// Bias-corrected Adam. Throws ContractError on non-finite gradients.
void adam_step(Eigen::VectorXd& theta, const Eigen::VectorXd& grad, AdamState& st,
               const TrainerConfig& cfg, double lr);

struct TrainLog {
    std::vector<double> epoch_nll;  // mean per-sentence nll
    std::vector<double> epoch_lr;
};

// Shuffled minibatch training with the annealing schedule from cfg.
// The corpus must already be filtered to projective sentences.
ScorerModel train(const std::vector<Sentence>& corpus, SystemId system, OracleVariant variant,
                  const TrainerConfig& cfg, TrainLog* log = nullptr);

// Binary model file with a version header, vocab tables, and all
// tensors with declared shapes; load rejects any mismatch.
void save_model(const ScorerModel& model, const std::string& path);
ScorerModel load_model(const std::string& path);

}  // namespace swiftdep
