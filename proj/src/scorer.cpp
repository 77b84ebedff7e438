#include "swiftdep/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>

namespace swiftdep {

namespace {

const char* kSpecials[3] = {"<unk>", "<root>", "<pad>"};

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

uint64_t mix_seed(uint64_t a, uint64_t b, uint64_t c) {
    return splitmix64(splitmix64(splitmix64(a) ^ b) ^ c);
}

}  // namespace

StringVocab::StringVocab() {
    for (const char* s : kSpecials) add(s);
}

int StringVocab::add(const std::string& item) {
    auto it = index_.find(item);
    if (it != index_.end()) return it->second;
    int idx = static_cast<int>(items_.size());
    items_.push_back(item);
    index_.emplace(item, idx);
    return idx;
}

int StringVocab::find(const std::string& item) const {
    auto it = index_.find(item);
    return it == index_.end() ? -1 : it->second;
}

int StringVocab::find_or_unk(const std::string& item) const {
    int idx = find(item);
    return idx < 0 ? kUnk : idx;
}

ParamLayout ParamLayout::make(int n_words, int n_pos, int n_labels, const ModelDims& dims) {
    ParamLayout lay;
    size_t at = 0;
    auto place = [&](TensorInfo& t, const char* name, int rows, int cols) {
        t.name = name;
        t.offset = at;
        t.rows = rows;
        t.cols = cols;
        at += t.count();
    };
    const int R = kRepr, F = kFeat;
    place(lay.word_emb, "word_emb", n_words, dims.word_dim);
    place(lay.pos_emb, "pos_emb", n_pos, dims.pos_dim);
    place(lay.w_head, "w_head", R, dims.input());
    place(lay.b_head, "b_head", R, 1);
    place(lay.w_dep, "w_dep", R, dims.input());
    place(lay.b_dep, "b_dep", R, 1);
    place(lay.bi_w, "bi_w", F, R * R);
    place(lay.bi_b, "bi_b", F, R);
    place(lay.bi_c, "bi_c", F, R);
    place(lay.bi_d, "bi_d", F, 1);
    place(lay.lab_left, "lab_left", n_labels, F);
    place(lay.lab_left_b, "lab_left_b", n_labels, 1);
    place(lay.lab_right, "lab_right", n_labels, F);
    place(lay.lab_right_b, "lab_right_b", n_labels, 1);
    place(lay.shift_w, "shift_w", F, 1);
    place(lay.shift_b, "shift_b", 1, 1);
    place(lay.null_feat, "null_feat", F, 1);
    place(lay.cls_w, "cls_w", 2 + 2 * n_labels, 4 * F);
    place(lay.cls_b, "cls_b", 2 + 2 * n_labels, 1);
    lay.total = at;
    return lay;
}

std::vector<const TensorInfo*> ParamLayout::all() const {
    return {&word_emb, &pos_emb, &w_head, &b_head, &w_dep, &b_dep, &bi_w, &bi_b, &bi_c, &bi_d,
            &lab_left, &lab_left_b, &lab_right, &lab_right_b, &shift_w, &shift_b, &null_feat,
            &cls_w, &cls_b};
}

ScorerModel init_model(SystemId system, const std::vector<Sentence>& corpus, const ModelDims& dims,
                       uint64_t seed) {
    ScorerModel m;
    m.system = system;
    m.dims = dims;
    for (const Sentence& s : corpus) {
        for (const Token& t : s.tokens) {
            m.words.add(t.form);
            m.pos.add(t.upos);
        }
    }
    m.labels = LabelVocab::from_corpus(corpus);
    if (m.labels.size() == 0) throw ContractError("init_model: corpus has no labels");
    m.layout = ParamLayout::make(m.words.size(), m.pos.size(), m.labels.size(), dims);
    m.theta.resize(static_cast<Eigen::Index>(m.layout.total));

    std::mt19937_64 rng(splitmix64(seed));
    auto uniform_fill = [&](const TensorInfo& t, double lo, double hi) {
        std::uniform_real_distribution<double> u(lo, hi);
        auto v = m.vec(t);
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = u(rng);
    };
    auto normal_fill = [&](const TensorInfo& t, double stddev) {
        std::normal_distribution<double> g(0.0, stddev);
        auto v = m.vec(t);
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = g(rng);
    };
    auto const_fill = [&](const TensorInfo& t, double value) { m.vec(t).setConstant(value); };

    const auto& lay = m.layout;
    uniform_fill(lay.word_emb, -0.1, 0.1);
    uniform_fill(lay.pos_emb, -0.1, 0.1);
    normal_fill(lay.w_head, std::sqrt(2.0 / dims.input()));
    const_fill(lay.b_head, 0.0);
    normal_fill(lay.w_dep, std::sqrt(2.0 / dims.input()));
    const_fill(lay.b_dep, 0.0);
    normal_fill(lay.bi_w, 0.05);
    normal_fill(lay.bi_b, 0.05);
    normal_fill(lay.bi_c, 0.05);
    const_fill(lay.bi_d, 0.1);  // start with mostly-alive feature units
    normal_fill(lay.lab_left, 0.1);
    const_fill(lay.lab_left_b, 0.0);
    normal_fill(lay.lab_right, 0.1);
    const_fill(lay.lab_right_b, 0.0);
    normal_fill(lay.shift_w, 0.1);
    const_fill(lay.shift_b, 0.0);
    normal_fill(lay.null_feat, 0.1);
    normal_fill(lay.cls_w, std::sqrt(2.0 / (4.0 * kFeat)));
    const_fill(lay.cls_b, 0.0);
    return m;
}

namespace {

// Embedding rows feeding token t's window, outermost-left first.
// Position 0 is the root; positions outside [0, n] use the pad row.
void window_rows(int t, int n, const std::vector<int>& wid, const std::vector<int>& pid, int w,
                 std::vector<int>& out_w, std::vector<int>& out_p) {
    out_w.clear();
    out_p.clear();
    for (int j = t - w; j <= t + w; ++j) {
        if (j < 0 || j > n) {
            out_w.push_back(StringVocab::kPad);
            out_p.push_back(StringVocab::kPad);
        } else {
            out_w.push_back(wid[static_cast<size_t>(j)]);
            out_p.push_back(pid[static_cast<size_t>(j)]);
        }
    }
}

void sentence_ids(const Sentence& s, const ScorerModel& m, std::vector<int>& wid,
                  std::vector<int>& pid) {
    const int n = s.size();
    wid.assign(static_cast<size_t>(n) + 1, StringVocab::kRoot);
    pid.assign(static_cast<size_t>(n) + 1, StringVocab::kRoot);
    for (int t = 1; t <= n; ++t) {
        wid[static_cast<size_t>(t)] = m.words.find_or_unk(s.token(t).form);
        pid[static_cast<size_t>(t)] = m.pos.find_or_unk(s.token(t).upos);
    }
}

void fill_input_row(Eigen::MatrixXd& X, int t, const std::vector<int>& rw,
                    const std::vector<int>& rp, const ScorerModel& m) {
    CMapMat we = m.view(m.layout.word_emb);
    CMapMat pe = m.view(m.layout.pos_emb);
    const int ew = m.dims.word_dim, ep = m.dims.pos_dim;
    int off = 0;
    for (size_t s = 0; s < rw.size(); ++s) {
        X.block(t, off, 1, ew) = we.row(rw[s]);
        off += ew;
        X.block(t, off, 1, ep) = pe.row(rp[s]);
        off += ep;
    }
}

Eigen::VectorXd relu(const Eigen::VectorXd& v) { return v.cwiseMax(0.0); }

double log_sum_exp(const Eigen::VectorXd& z) {
    double m = z.maxCoeff();
    return m + std::log((z.array() - m).exp().sum());
}

struct StepCandidates {
    std::vector<Transition> skel;
    std::vector<Transition> cands;
    std::vector<int> cand_begin;  // per skeleton, index of its first candidate
};

StepCandidates enumerate_candidates(const ParserState& s, SystemId system, int n_labels) {
    StepCandidates out;
    out.skel = feasible(s, system);
    for (const Transition& t : out.skel) {
        out.cand_begin.push_back(static_cast<int>(out.cands.size()));
        if (t.induces_arc()) {
            for (int l = 0; l < n_labels; ++l) out.cands.push_back({t.kind, t.depth, l});
        } else {
            out.cands.push_back(t);
        }
    }
    return out;
}

int find_candidate(const StepCandidates& sc, const Transition& t) {
    for (size_t i = 0; i < sc.cands.size(); ++i)
        if (sc.cands[i] == t) return static_cast<int>(i);
    return -1;
}

std::array<int, 4> feature_slots(const ParserState& s) {
    return {s.stack_size() >= 3 ? s.stack_item(3) : -1, s.stack_size() >= 2 ? s.stack_item(2) : -1,
            s.stack_size() >= 1 ? s.stack_item(1) : -1, s.buffer_empty() ? -1 : s.buffer_front};
}

}  // namespace

TokenRepr token_repr(const Sentence& sentence, int index, const ScorerModel& model) {
    const int n = sentence.size();
    if (index < 0 || index > n) throw ContractError("token_repr: index outside [0, n]");
    std::vector<int> wid, pid;
    sentence_ids(sentence, model, wid, pid);
    std::vector<int> rw, rp;
    window_rows(index, n, wid, pid, model.dims.window, rw, rp);
    Eigen::MatrixXd X(index + 1, model.dims.input());
    fill_input_row(X, index, rw, rp, model);
    Eigen::VectorXd x = X.row(index).transpose();
    const auto& lay = model.layout;
    TokenRepr r;
    r.head = relu(model.view(lay.w_head) * x + model.vec(lay.b_head));
    r.dep = relu(model.view(lay.w_dep) * x + model.vec(lay.b_dep));
    return r;
}

Eigen::VectorXd biaffine_combine(const Eigen::VectorXd& v_head, const Eigen::VectorXd& v_dep,
                                 const ScorerModel& model) {
    if (v_head.size() != kRepr || v_dep.size() != kRepr)
        throw ContractError("biaffine_combine: input dimension mismatch");
    const auto& lay = model.layout;
    // bi_w reinterpreted as (feat*repr) x repr maps v_dep to all W_i v_dep rows at once.
    CMapMat stacked(model.theta.data() + lay.bi_w.offset, kFeat * kRepr, kRepr);
    Eigen::VectorXd pflat = stacked * v_dep;
    CMapMat P(pflat.data(), kFeat, kRepr);
    Eigen::VectorXd pre = P * v_head + model.view(lay.bi_b) * v_head +
                          model.view(lay.bi_c) * v_dep + model.vec(lay.bi_d);
    return relu(pre);
}

EncodedSentence encode(const Sentence& sentence, const ScorerModel& model) {
    const int n = sentence.size();
    const auto& lay = model.layout;
    EncodedSentence e;
    e.n = n;
    std::vector<int> wid, pid;
    sentence_ids(sentence, model, wid, pid);
    Eigen::MatrixXd X(n + 1, model.dims.input());
    std::vector<int> rw, rp;
    for (int t = 0; t <= n; ++t) {
        window_rows(t, n, wid, pid, model.dims.window, rw, rp);
        fill_input_row(X, t, rw, rp, model);
    }
    Eigen::MatrixXd Ah = X * model.view(lay.w_head).transpose();
    Ah.rowwise() += model.vec(lay.b_head).transpose();
    Eigen::MatrixXd Ad = X * model.view(lay.w_dep).transpose();
    Ad.rowwise() += model.vec(lay.b_dep).transpose();
    e.h = Ah.cwiseMax(0.0);
    e.d = Ad.cwiseMax(0.0);
    e.bh = e.h * model.view(lay.bi_b).transpose();
    e.cd = e.d * model.view(lay.bi_c).transpose();
    CMapMat stacked(model.theta.data() + lay.bi_w.offset, kFeat * kRepr, kRepr);
    e.P.resize(static_cast<size_t>(n) + 1);
    e.token_feat.resize(n + 1, kFeat);
    Eigen::VectorXd delta = model.vec(lay.bi_d);
    for (int t = 0; t <= n; ++t) {
        Eigen::VectorXd pflat = stacked * e.d.row(t).transpose();
        e.P[static_cast<size_t>(t)] = Eigen::Map<RowMat>(pflat.data(), kFeat, kRepr);
        Eigen::VectorXd pre = e.P[static_cast<size_t>(t)] * e.h.row(t).transpose() +
                              e.bh.row(t).transpose() + e.cd.row(t).transpose() + delta;
        e.token_feat.row(t) = relu(pre).transpose();
    }
    return e;
}

int trad_class_index(const Transition& t, int n_labels) {
    switch (t.kind) {
        case TransitionKind::Shift: return 0;
        case TransitionKind::Reduce: return 1;
        case TransitionKind::LeftArc: return 2 + t.label;
        case TransitionKind::RightArc: return 2 + n_labels + t.label;
        default: throw ContractError("trad_class_index: non-local transition");
    }
}

int ScoredCandidates::argmax() const {
    // Candidates are in canonical transition order, so the first maximum
    // is the canonical tie-break winner.
    int best = 0;
    for (int i = 1; i < static_cast<int>(cands.size()); ++i)
        if (logp[i] > logp[best]) best = i;
    return best;
}

ScoredCandidates score_transitions(const ParserState& state, const EncodedSentence& enc,
                                   const ScorerModel& model) {
    if (is_terminal(state, model.system))
        throw ContractError("score_transitions: terminal state");
    const auto& lay = model.layout;
    const int L = model.labels.size();
    StepCandidates sc = enumerate_candidates(state, model.system, L);
    Eigen::VectorXd z(static_cast<Eigen::Index>(sc.cands.size()));
    Eigen::VectorXd delta = model.vec(lay.bi_d);

    if (model.system == SystemId::ArcSwift) {
        const int b = state.buffer_front;
        auto arc_feat = [&](int H, int D) {
            Eigen::VectorXd pre = enc.P[static_cast<size_t>(D)] * enc.h.row(H).transpose() +
                                  enc.bh.row(H).transpose() + enc.cd.row(D).transpose() + delta;
            return relu(pre);
        };
        for (size_t si = 0; si < sc.skel.size(); ++si) {
            const Transition& sk = sc.skel[si];
            int at = sc.cand_begin[si];
            if (sk.kind == TransitionKind::Shift) {
                z[at] = model.vec(lay.shift_w).dot(enc.token_feat.row(b)) +
                        model.theta[static_cast<Eigen::Index>(lay.shift_b.offset)];
            } else if (sk.kind == TransitionKind::LeftArcK) {
                Eigen::VectorXd f = arc_feat(b, state.stack_item(sk.depth));
                z.segment(at, L) = model.view(lay.lab_left) * f + model.vec(lay.lab_left_b);
            } else {
                Eigen::VectorXd f = arc_feat(state.stack_item(sk.depth), b);
                z.segment(at, L) = model.view(lay.lab_right) * f + model.vec(lay.lab_right_b);
            }
        }
    } else {
        std::array<int, 4> slots = feature_slots(state);
        Eigen::VectorXd u(4 * kFeat);
        for (int s = 0; s < 4; ++s) {
            if (slots[static_cast<size_t>(s)] < 0)
                u.segment(s * kFeat, kFeat) = model.vec(lay.null_feat);
            else
                u.segment(s * kFeat, kFeat) =
                    enc.token_feat.row(slots[static_cast<size_t>(s)]).transpose();
        }
        CMapMat cls = model.view(lay.cls_w);
        CMapVec clsb = model.vec(lay.cls_b);
        for (size_t i = 0; i < sc.cands.size(); ++i) {
            int c = trad_class_index(sc.cands[i], L);
            z[static_cast<Eigen::Index>(i)] = cls.row(c).dot(u) + clsb[c];
        }
    }

    ScoredCandidates out;
    out.cands = std::move(sc.cands);
    out.logp = z.array() - log_sum_exp(z);
    out.skeleton_count = static_cast<int>(sc.skel.size());
    return out;
}

ScoredCandidates score_transitions(const ParserState& state, const Sentence& sentence,
                                   const ScorerModel& model) {
    EncodedSentence enc = encode(sentence, model);
    return score_transitions(state, enc, model);
}

double TrainerConfig::lr_for_epoch(int epoch) const {
    int past = epoch - 1 - anneal_start;  // full epochs beyond the anneal point
    int exponent = past >= 0 ? past / anneal_every + 1 : 0;
    return lr0 * std::pow(anneal_factor, exponent);
}

LossGrad loss_and_gradient(const Sentence& sentence, const std::vector<Transition>& oracle_seq,
                           const ScorerModel& model, const TrainerConfig& cfg, bool train_mode,
                           uint64_t rng_seed) {
    const int n = sentence.size();
    const SystemId system = model.system;
    const int L = model.labels.size();
    const auto& lay = model.layout;

    LossGrad out;
    out.grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(lay.total));
    auto gview = [&](const TensorInfo& t) {
        return MapMat(out.grad.data() + t.offset, t.rows, t.cols);
    };
    auto gvec = [&](const TensorInfo& t) {
        return MapVec(out.grad.data() + t.offset, static_cast<Eigen::Index>(t.count()));
    };

    // One generator drives, in a fixed order: UNK replacement for tokens
    // 1..n, projection masks for tokens 0..n (head then dep), token
    // feature masks (stack-feature route), then per-step masks.
    std::mt19937_64 rng(splitmix64(rng_seed));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const bool drop = train_mode && cfg.dropout_prob > 0.0;
    const double inv_keep = drop ? 1.0 / (1.0 - cfg.dropout_prob) : 1.0;
    auto draw_mask = [&](Eigen::Index size) {
        Eigen::VectorXd m = Eigen::VectorXd::Constant(size, 1.0);
        if (drop)
            for (Eigen::Index i = 0; i < size; ++i)
                m[i] = unif(rng) < cfg.dropout_prob ? 0.0 : inv_keep;
        return m;
    };

    std::vector<int> wid, pid;
    sentence_ids(sentence, model, wid, pid);
    if (train_mode && cfg.unk_replace_prob > 0.0)
        for (int t = 1; t <= n; ++t)
            if (unif(rng) < cfg.unk_replace_prob) wid[static_cast<size_t>(t)] = StringVocab::kUnk;

    // Token-level forward.
    const int D_in = model.dims.input();
    Eigen::MatrixXd X(n + 1, D_in);
    std::vector<std::vector<int>> rows_w(static_cast<size_t>(n) + 1),
        rows_p(static_cast<size_t>(n) + 1);
    for (int t = 0; t <= n; ++t) {
        window_rows(t, n, wid, pid, model.dims.window, rows_w[static_cast<size_t>(t)],
                    rows_p[static_cast<size_t>(t)]);
        fill_input_row(X, t, rows_w[static_cast<size_t>(t)], rows_p[static_cast<size_t>(t)],
                       model);
    }
    Eigen::MatrixXd Ah = X * model.view(lay.w_head).transpose();
    Ah.rowwise() += model.vec(lay.b_head).transpose();
    Eigen::MatrixXd Ad = X * model.view(lay.w_dep).transpose();
    Ad.rowwise() += model.vec(lay.b_dep).transpose();
    Eigen::MatrixXd Mh(n + 1, kRepr), Md(n + 1, kRepr);
    for (int t = 0; t <= n; ++t) {
        Mh.row(t) = draw_mask(kRepr).transpose();
        Md.row(t) = draw_mask(kRepr).transpose();
    }
    Eigen::MatrixXd H = Ah.cwiseMax(0.0).cwiseProduct(Mh);
    Eigen::MatrixXd D = Ad.cwiseMax(0.0).cwiseProduct(Md);

    // Pair-scoring caches (the model is fixed during one loss evaluation).
    Eigen::MatrixXd BH = H * model.view(lay.bi_b).transpose();
    Eigen::MatrixXd CD = D * model.view(lay.bi_c).transpose();
    Eigen::VectorXd delta = model.vec(lay.bi_d);
    CMapMat stacked(model.theta.data() + lay.bi_w.offset, kFeat * kRepr, kRepr);
    std::vector<RowMat> P(static_cast<size_t>(n) + 1);
    for (int t = 0; t <= n; ++t) {
        Eigen::VectorXd pflat = stacked * D.row(t).transpose();
        P[static_cast<size_t>(t)] = Eigen::Map<RowMat>(pflat.data(), kFeat, kRepr);
    }
    auto pair_pre = [&](int Ht, int Dt) {
        return Eigen::VectorXd(P[static_cast<size_t>(Dt)] * H.row(Ht).transpose() +
                               BH.row(Ht).transpose() + CD.row(Dt).transpose() + delta);
    };

    Eigen::MatrixXd dH = Eigen::MatrixXd::Zero(n + 1, kRepr);
    Eigen::MatrixXd dD = Eigen::MatrixXd::Zero(n + 1, kRepr);
    CMapMat biW = model.view(lay.bi_w);
    auto pair_backward = [&](int Ht, int Dt, const Eigen::VectorXd& pre,
                             const Eigen::VectorXd& mask, const Eigen::VectorXd& dfeat) {
        Eigen::VectorXd dpre = dfeat.cwiseProduct(mask);
        for (int i = 0; i < kFeat; ++i)
            if (pre[i] <= 0.0) dpre[i] = 0.0;
        gvec(lay.bi_d) += dpre;
        gview(lay.bi_b) += dpre * H.row(Ht);
        gview(lay.bi_c) += dpre * D.row(Dt);
        RowMat outer = H.row(Ht).transpose() * D.row(Dt);
        Eigen::Map<const Eigen::VectorXd> khd(outer.data(), kRepr * kRepr);
        gview(lay.bi_w) += dpre * khd.transpose();
        Eigen::VectorXd mflat = biW.transpose() * dpre;
        Eigen::Map<const RowMat> M(mflat.data(), kRepr, kRepr);
        dH.row(Ht) += (M * D.row(Dt).transpose() +
                       model.view(lay.bi_b).transpose() * dpre)
                          .transpose();
        dD.row(Dt) += (M.transpose() * H.row(Ht).transpose() +
                       model.view(lay.bi_c).transpose() * dpre)
                          .transpose();
    };

    // Stack-feature route: per-token features computed once per sentence,
    // reused at every step; their masks are per token, not per step.
    Eigen::MatrixXd tokPre, tokMask, tokFeat, dTokFeat;
    if (system != SystemId::ArcSwift) {
        tokPre.resize(n + 1, kFeat);
        tokMask.resize(n + 1, kFeat);
        tokFeat.resize(n + 1, kFeat);
        dTokFeat = Eigen::MatrixXd::Zero(n + 1, kFeat);
        for (int t = 0; t <= n; ++t) {
            tokPre.row(t) = pair_pre(t, t).transpose();
            tokMask.row(t) = draw_mask(kFeat).transpose();
            tokFeat.row(t) =
                tokPre.row(t).cwiseMax(0.0).cwiseProduct(tokMask.row(t));
        }
    }

    // Step loop.
    ParserState state = initial_state(n);
    for (const Transition& gold : oracle_seq) {
        if (is_terminal(state, system))
            throw ContractError("oracle sequence continues past a terminal state");
        StepCandidates sc = enumerate_candidates(state, system, L);
        const Eigen::Index nc = static_cast<Eigen::Index>(sc.cands.size());
        Eigen::VectorXd z(nc);

        struct SkelFwd {
            int H = -1, Dt = -1;
            Eigen::VectorXd pre, mask, feat;
        };
        std::vector<SkelFwd> fwd;

        if (system == SystemId::ArcSwift) {
            const int b = state.buffer_front;
            fwd.resize(sc.skel.size());
            for (size_t si = 0; si < sc.skel.size(); ++si) {
                const Transition& sk = sc.skel[si];
                SkelFwd& f = fwd[si];
                if (sk.kind == TransitionKind::Shift) {
                    f.H = b;
                    f.Dt = b;
                } else if (sk.kind == TransitionKind::LeftArcK) {
                    f.H = b;
                    f.Dt = state.stack_item(sk.depth);
                } else {
                    f.H = state.stack_item(sk.depth);
                    f.Dt = b;
                }
                f.pre = pair_pre(f.H, f.Dt);
                f.mask = draw_mask(kFeat);
                f.feat = f.pre.cwiseMax(0.0).cwiseProduct(f.mask);
                int at = sc.cand_begin[si];
                if (sk.kind == TransitionKind::Shift) {
                    z[at] = model.vec(lay.shift_w).dot(f.feat) +
                            model.theta[static_cast<Eigen::Index>(lay.shift_b.offset)];
                } else if (sk.kind == TransitionKind::LeftArcK) {
                    z.segment(at, L) =
                        model.view(lay.lab_left) * f.feat + model.vec(lay.lab_left_b);
                } else {
                    z.segment(at, L) =
                        model.view(lay.lab_right) * f.feat + model.vec(lay.lab_right_b);
                }
            }
        } else {
            std::array<int, 4> slots = feature_slots(state);
            Eigen::VectorXd u(4 * kFeat);
            for (int s = 0; s < 4; ++s) {
                if (slots[static_cast<size_t>(s)] < 0)
                    u.segment(s * kFeat, kFeat) = model.vec(lay.null_feat);
                else
                    u.segment(s * kFeat, kFeat) =
                        tokFeat.row(slots[static_cast<size_t>(s)]).transpose();
            }
            CMapMat cls = model.view(lay.cls_w);
            CMapVec clsb = model.vec(lay.cls_b);
            for (Eigen::Index i = 0; i < nc; ++i) {
                int c = trad_class_index(sc.cands[static_cast<size_t>(i)], L);
                z[i] = cls.row(c).dot(u) + clsb[c];
            }
            // Defer the shared backward below via du.
            fwd.resize(1);
            fwd[0].feat = u;  // reuse storage for the slot block
        }

        int gold_idx = find_candidate(sc, gold);
        if (gold_idx < 0)
            throw ContractError("oracle transition " + std::to_string(static_cast<int>(gold.kind)) +
                                " infeasible at its step");
        double lse = log_sum_exp(z);
        out.nll += lse - z[gold_idx];
        Eigen::VectorXd dz = (z.array() - lse).exp();
        dz[gold_idx] -= 1.0;

        if (system == SystemId::ArcSwift) {
            for (size_t si = 0; si < sc.skel.size(); ++si) {
                const Transition& sk = sc.skel[si];
                const SkelFwd& f = fwd[si];
                int at = sc.cand_begin[si];
                Eigen::VectorXd dfeat;
                if (sk.kind == TransitionKind::Shift) {
                    double g = dz[at];
                    gvec(lay.shift_w) += g * f.feat;
                    out.grad[static_cast<Eigen::Index>(lay.shift_b.offset)] += g;
                    dfeat = g * model.vec(lay.shift_w);
                } else if (sk.kind == TransitionKind::LeftArcK) {
                    Eigen::VectorXd dzl = dz.segment(at, L);
                    gview(lay.lab_left) += dzl * f.feat.transpose();
                    gvec(lay.lab_left_b) += dzl;
                    dfeat = model.view(lay.lab_left).transpose() * dzl;
                } else {
                    Eigen::VectorXd dzl = dz.segment(at, L);
                    gview(lay.lab_right) += dzl * f.feat.transpose();
                    gvec(lay.lab_right_b) += dzl;
                    dfeat = model.view(lay.lab_right).transpose() * dzl;
                }
                pair_backward(f.H, f.Dt, f.pre, f.mask, dfeat);
            }
        } else {
            const Eigen::VectorXd& u = fwd[0].feat;
            Eigen::VectorXd du = Eigen::VectorXd::Zero(4 * kFeat);
            CMapMat cls = model.view(lay.cls_w);
            for (Eigen::Index i = 0; i < nc; ++i) {
                int c = trad_class_index(sc.cands[static_cast<size_t>(i)], L);
                gview(lay.cls_w).row(c) += dz[i] * u.transpose();
                gvec(lay.cls_b)[c] += dz[i];
                du += dz[i] * cls.row(c).transpose();
            }
            std::array<int, 4> slots = feature_slots(state);
            for (int s = 0; s < 4; ++s) {
                if (slots[static_cast<size_t>(s)] < 0)
                    gvec(lay.null_feat) += du.segment(s * kFeat, kFeat);
                else
                    dTokFeat.row(slots[static_cast<size_t>(s)]) +=
                        du.segment(s * kFeat, kFeat).transpose();
            }
        }
        state = apply(state, gold, system);
    }
    if (!is_terminal(state, system))
        throw ContractError("oracle sequence does not reach a terminal state");

    if (system != SystemId::ArcSwift) {
        for (int t = 0; t <= n; ++t) {
            if (dTokFeat.row(t).isZero(0.0)) continue;
            pair_backward(t, t, tokPre.row(t).transpose(), tokMask.row(t).transpose(),
                          dTokFeat.row(t).transpose());
        }
    }

    // Token-level backward.
    Eigen::MatrixXd dAh =
        dH.cwiseProduct(Mh).cwiseProduct((Ah.array() > 0.0).cast<double>().matrix());
    Eigen::MatrixXd dAd =
        dD.cwiseProduct(Md).cwiseProduct((Ad.array() > 0.0).cast<double>().matrix());
    gview(lay.w_head) += dAh.transpose() * X;
    gvec(lay.b_head) += dAh.colwise().sum().transpose();
    gview(lay.w_dep) += dAd.transpose() * X;
    gvec(lay.b_dep) += dAd.colwise().sum().transpose();
    Eigen::MatrixXd dX = dAh * model.view(lay.w_head) + dAd * model.view(lay.w_dep);
    const int ew = model.dims.word_dim, ep = model.dims.pos_dim;
    auto g_we = gview(lay.word_emb);
    auto g_pe = gview(lay.pos_emb);
    for (int t = 0; t <= n; ++t) {
        int off = 0;
        const auto& rw = rows_w[static_cast<size_t>(t)];
        const auto& rp = rows_p[static_cast<size_t>(t)];
        for (size_t s = 0; s < rw.size(); ++s) {
            g_we.row(rw[s]) += dX.block(t, off, 1, ew);
            off += ew;
            g_pe.row(rp[s]) += dX.block(t, off, 1, ep);
            off += ep;
        }
    }
    return out;
}

void adam_step(Eigen::VectorXd& theta, const Eigen::VectorXd& grad, AdamState& st,
               const TrainerConfig& cfg, double lr) {
    if (theta.size() != grad.size() || st.m.size() != theta.size())
        throw ContractError("adam_step: shape mismatch");
    if (!grad.allFinite()) {
        double mx = grad.cwiseAbs().maxCoeff();
        throw ContractError("adam_step: non-finite gradient (max |g| = " + std::to_string(mx) +
                            ", t = " + std::to_string(st.t) + ")");
    }
    st.t += 1;
    st.m = cfg.beta1 * st.m + (1.0 - cfg.beta1) * grad;
    st.v = cfg.beta2 * st.v.array().matrix() + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(st.t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(st.t));
    theta.array() -=
        lr * (st.m.array() / bc1) / ((st.v.array() / bc2).sqrt() + cfg.epsilon);
}

ScorerModel train(const std::vector<Sentence>& corpus, SystemId system, OracleVariant variant,
                  const TrainerConfig& cfg, TrainLog* log) {
    if (corpus.empty()) throw ContractError("train: empty corpus");
    if (variant_system(variant) != system)
        throw ContractError("train: oracle variant does not match the transition system");
    ScorerModel model = init_model(system, corpus, cfg.dims, cfg.seed);
    std::vector<std::vector<Transition>> seqs(corpus.size());
    for (size_t i = 0; i < corpus.size(); ++i)
        seqs[i] = oracle_sequence(corpus[i], variant, model.labels);

    AdamState st(model.theta.size());
    std::vector<size_t> order(corpus.size());
    std::iota(order.begin(), order.end(), size_t{0});
    Eigen::VectorXd gsum(model.theta.size());

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        const double lr = cfg.lr_for_epoch(epoch);
        std::mt19937_64 shuffler(mix_seed(cfg.seed, 0x05u, static_cast<uint64_t>(epoch)));
        std::shuffle(order.begin(), order.end(), shuffler);
        double total_nll = 0.0;
        for (size_t at = 0; at < order.size(); at += static_cast<size_t>(cfg.batch_size)) {
            size_t end = std::min(order.size(), at + static_cast<size_t>(cfg.batch_size));
            gsum.setZero();
            for (size_t i = at; i < end; ++i) {
                size_t idx = order[i];
                uint64_t rs = mix_seed(cfg.seed, static_cast<uint64_t>(epoch),
                                       static_cast<uint64_t>(idx));
                LossGrad lg =
                    loss_and_gradient(corpus[idx], seqs[idx], model, cfg, true, rs);
                gsum += lg.grad;
                total_nll += lg.nll;
            }
            gsum /= static_cast<double>(end - at);
            adam_step(model.theta, gsum, st, cfg, lr);
        }
        if (log) {
            log->epoch_nll.push_back(total_nll / static_cast<double>(corpus.size()));
            log->epoch_lr.push_back(lr);
        }
    }
    return model;
}

namespace {

constexpr uint32_t kModelVersion = 1;

void put_u32(std::ostream& os, uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); }
void put_str(std::ostream& os, const std::string& s) {
    put_u32(os, static_cast<uint32_t>(s.size()));
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}
uint32_t get_u32(std::istream& is) {
    uint32_t v = 0;
    if (!is.read(reinterpret_cast<char*>(&v), 4)) throw ParseError("model file truncated");
    return v;
}
std::string get_str(std::istream& is) {
    uint32_t len = get_u32(is);
    if (len > (1u << 24)) throw ParseError("model file: implausible string length");
    std::string s(len, '\0');
    if (len && !is.read(s.data(), len)) throw ParseError("model file truncated");
    return s;
}

}  // namespace

void save_model(const ScorerModel& model, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ParseError("cannot open model file for writing: " + path);
    os.write("SWDP", 4);
    put_u32(os, kModelVersion);
    put_u32(os, static_cast<uint32_t>(model.system));
    put_u32(os, static_cast<uint32_t>(model.dims.word_dim));
    put_u32(os, static_cast<uint32_t>(model.dims.pos_dim));
    put_u32(os, static_cast<uint32_t>(model.dims.window));
    put_u32(os, kRepr);
    put_u32(os, kFeat);
    auto put_items = [&](const std::vector<std::string>& items) {
        put_u32(os, static_cast<uint32_t>(items.size()));
        for (const std::string& s : items) put_str(os, s);
    };
    put_items(model.words.items());
    put_items(model.pos.items());
    put_items(model.labels.labels());
    auto tensors = model.layout.all();
    put_u32(os, static_cast<uint32_t>(tensors.size()));
    for (const TensorInfo* t : tensors) {
        put_str(os, t->name);
        put_u32(os, static_cast<uint32_t>(t->rows));
        put_u32(os, static_cast<uint32_t>(t->cols));
        os.write(reinterpret_cast<const char*>(model.theta.data() + t->offset),
                 static_cast<std::streamsize>(t->count() * sizeof(double)));
    }
    if (!os) throw ParseError("failed writing model file: " + path);
}

ScorerModel load_model(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ParseError("cannot open model file: " + path);
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "SWDP", 4) != 0)
        throw ParseError("not a model file (bad magic): " + path);
    uint32_t version = get_u32(is);
    if (version != kModelVersion)
        throw ParseError("unsupported model version " + std::to_string(version));
    ScorerModel m;
    uint32_t sys = get_u32(is);
    if (sys > 3) throw ParseError("model file: invalid system id");
    m.system = static_cast<SystemId>(sys);
    m.dims.word_dim = static_cast<int>(get_u32(is));
    m.dims.pos_dim = static_cast<int>(get_u32(is));
    m.dims.window = static_cast<int>(get_u32(is));
    if (get_u32(is) != kRepr || get_u32(is) != kFeat)
        throw ParseError("model file: representation width mismatch");
    auto get_items = [&]() {
        uint32_t count = get_u32(is);
        std::vector<std::string> items(count);
        for (uint32_t i = 0; i < count; ++i) items[i] = get_str(is);
        return items;
    };
    std::vector<std::string> words = get_items();
    std::vector<std::string> pos = get_items();
    std::vector<std::string> labels = get_items();
    for (int i = 0; i < 3; ++i) {
        if (words.size() < 3 || words[static_cast<size_t>(i)] != kSpecials[i] ||
            pos.size() < 3 || pos[static_cast<size_t>(i)] != kSpecials[i])
            throw ParseError("model file: vocabulary is missing reserved rows");
    }
    for (size_t i = 3; i < words.size(); ++i) m.words.add(words[i]);
    for (size_t i = 3; i < pos.size(); ++i) m.pos.add(pos[i]);
    m.labels = LabelVocab(labels);
    if (m.words.size() != static_cast<int>(words.size()) ||
        m.pos.size() != static_cast<int>(pos.size()))
        throw ParseError("model file: duplicate vocabulary entries");
    m.layout = ParamLayout::make(m.words.size(), m.pos.size(), m.labels.size(), m.dims);
    m.theta.resize(static_cast<Eigen::Index>(m.layout.total));
    uint32_t tcount = get_u32(is);
    auto tensors = m.layout.all();
    if (tcount != tensors.size()) throw ParseError("model file: tensor count mismatch");
    for (const TensorInfo* t : tensors) {
        std::string name = get_str(is);
        uint32_t rows = get_u32(is), cols = get_u32(is);
        if (name != t->name || rows != static_cast<uint32_t>(t->rows) ||
            cols != static_cast<uint32_t>(t->cols))
            throw ParseError("model file: tensor " + name + " has unexpected shape");
        if (!is.read(reinterpret_cast<char*>(m.theta.data() + t->offset),
                     static_cast<std::streamsize>(t->count() * sizeof(double))))
            throw ParseError("model file truncated in tensor " + name);
    }
    if (!m.theta.allFinite()) throw ParseError("model file: non-finite parameter values");
    return m;
}

}  // namespace swiftdep
