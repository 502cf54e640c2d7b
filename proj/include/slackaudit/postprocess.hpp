#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "slackaudit/dataset.hpp"
#include "slackaudit/metrics.hpp"
#include "slackaudit/score.hpp"

namespace slackaudit {

enum class SearchMode {
    Normalized,     // randomized thresholds over the candidate grid plus
                    // exact constraint-saturating mixtures
    Deterministic,  // attainable deterministic thresholds only
};

// A normalized threshold tau realized as a distribution over at most two
// adjacent deterministic thresholds. The induced positive prediction rate
// on the training group equals 1 - tau exactly.
struct NormalizedThreshold {
    double tau = 0.0;
    int lo = 0;              // index of the lower cut (more positives)
    int hi = 0;              // adjacent higher cut; lo == hi when deterministic
    double weight_lo = 1.0;  // mixture weight on the lower cut
    bool deterministic() const { return lo == hi; }
};

// Per-group view of a score distribution: records sharing a score form an
// atomic block; deterministic thresholds sit between blocks. Threshold
// index j predicts block b positive iff b >= j, so j = 0 is all-positive
// and j = blocks() is all-negative.
class GroupProfile {
  public:
    GroupProfile(const Dataset& dataset, const ScoreFunction& score, int group);

    int group() const { return group_; }
    int blocks() const { return static_cast<int>(block_score_.size()); }
    int thresholds() const { return blocks() + 1; }
    long long size() const { return n_; }
    long long positives() const { return positives_; }

    double block_score(int b) const { return block_score_[b]; }
    long long block_count(int b) const { return block_count_[b]; }
    long long block_positives(int b) const { return block_pos_[b]; }

    // Counts at deterministic threshold j.
    long long predicted_positive(int j) const { return pos_pred_[j]; }
    long long predicted_true_positive(int j) const { return true_pos_[j]; }
    long long misclassified(int j) const { return miss_[j]; }

    double rate(int j) const;  // positive prediction rate at threshold j
    double tpr(int j) const;   // true positive rate; throws if no positives
    double tau(int j) const { return tau_[j]; }

    // Index of the block holding this exact score; -1 if absent.
    int block_of(double score) const;

  private:
    int group_;
    long long n_ = 0;
    long long positives_ = 0;
    std::vector<double> block_score_;
    std::vector<long long> block_count_;
    std::vector<long long> block_pos_;
    std::vector<long long> pos_pred_;
    std::vector<long long> true_pos_;
    std::vector<long long> miss_;
    std::vector<double> tau_;
};

// Shared realization state: a policy is only meaningful against the score
// distribution it was searched on, so it carries the profiles plus the
// dataset fingerprint they were built from.
struct PolicyContext {
    std::uint64_t fingerprint = 0;
    GroupProfile group1;
    GroupProfile group2;
    const GroupProfile& profile(int group) const { return group == 1 ? group1 : group2; }
};

struct GroupThresholdPolicy {
    ScoreFunction score;
    NormalizedThreshold tau1;
    NormalizedThreshold tau2;
    std::shared_ptr<const PolicyContext> context;
};

struct SearchResult {
    GroupThresholdPolicy policy;
    double loss = 0.0;  // whole-dataset misclassification of the policy
    double bias = 0.0;  // signed group disparity
    double b1 = 0.0;    // group-1 bias term of the chosen threshold
    double b2 = 0.0;    // group-2 bias term
};

struct CurvePoint {
    double tau;
    double group_error;  // group-local misclassification rate
    double bias_term;    // positive rate (DemPar) or TPR (EqOpp)
};

struct ThresholdCurves {
    std::vector<CurvePoint> group1;
    std::vector<CurvePoint> group2;
};

// Every tau whose rate 1-tau is attainable by a deterministic threshold on
// the group, plus `refinement` equispaced extras per adjacent pair.
std::vector<double> candidate_taus(const Dataset& dataset, const ScoreFunction& score,
                                   int group, int refinement);

// Mixture over adjacent thresholds whose exact positive rate is 1 - tau.
NormalizedThreshold realize_tau(const Dataset& dataset, const ScoreFunction& score,
                                int group, double tau);

// Expected positive probability per record under the policy's mixtures.
Predictions evaluate_policy(const GroupThresholdPolicy& policy, const Dataset& dataset);

// Optional restriction of each group's candidate thresholds to a tau
// interval. With a restricted grid the feasible set can be empty, in which
// case the search throws InfeasibleError.
struct SearchOptions {
    int refinement = 0;
    std::optional<std::pair<double, double>> tau_range1;
    std::optional<std::pair<double, double>> tau_range2;
};

// Reusable exhaustive searcher; builds the per-group tables once so a
// slack sweep pays the grid cost a single time.
class ThresholdSearch {
  public:
    ThresholdSearch(const Dataset& dataset, const ScoreFunction& score, BiasNotion notion,
                    SearchMode mode, SearchOptions options = {});

    // Lowest-loss feasible pair (|bias| <= slack). Ties resolve by lowest
    // |bias|, then coordinate-wise proximity to the unconstrained optimum,
    // then highest tau1, then highest tau2.
    SearchResult solve(double slack) const;

    std::shared_ptr<const PolicyContext> context() const { return context_; }
    ThresholdCurves curves() const;

    // Unconstrained optimum used as the tie-breaking anchor.
    double attractor_tau1() const { return att_tau1_; }
    double attractor_tau2() const { return att_tau2_; }

  private:
    struct Cand {
        double tau;
        int lo, hi;
        double weight_lo;
        double loss_num;  // misclassified count contribution (fractional under mixtures)
        double b;         // bias term
    };

    void append_bias_matches(int group, double target, std::vector<Cand>& out) const;
    SearchResult make_result(const Cand& c1, const Cand& c2, double bias_value) const;

    ScoreFunction score_;
    BiasNotion notion_;
    SearchMode mode_;
    std::shared_ptr<const PolicyContext> context_;
    std::vector<Cand> cands_[2];
    long long total_ = 0;
    double att_tau1_ = 0.0, att_tau2_ = 0.0;
};

// One-shot search over the candidate grid.
SearchResult postprocess_search(const Dataset& dataset, const ScoreFunction& score,
                                BiasNotion notion, double slack, SearchMode mode,
                                int refinement = 0);

// Per-group loss and bias-term tables over the candidate grid.
ThresholdCurves threshold_curves(const Dataset& dataset, const ScoreFunction& score,
                                 BiasNotion notion, int refinement = 0);

}  // namespace slackaudit
