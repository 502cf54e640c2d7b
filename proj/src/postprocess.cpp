#include "slackaudit/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "slackaudit/errors.hpp"

namespace slackaudit {

namespace {

// Attainable rates within one ulp-ish of a requested rate snap to the
// deterministic threshold so grid taus realize with exact 0/1 predictions.
constexpr double kRateSnap = 1e-13;

}  // namespace

GroupProfile::GroupProfile(const Dataset& dataset, const ScoreFunction& score, int group)
    : group_(group) {
    std::vector<std::pair<double, int>> pts;
    for (const Record& r : dataset.records()) {
        if (r.group != group) continue;
        const double s = score(r.features, r.group);
        if (!std::isfinite(s))
            throw ValidationError("score function produced a non-finite value");
        pts.emplace_back(s, r.label);
    }
    std::sort(pts.begin(), pts.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    n_ = static_cast<long long>(pts.size());
    for (const auto& [s, y] : pts) {
        if (!block_score_.empty() && block_score_.back() == s) {
            block_count_.back()++;
            block_pos_.back() += y;
        } else {
            block_score_.push_back(s);
            block_count_.push_back(1);
            block_pos_.push_back(y);
        }
        positives_ += y;
    }
    const int K = blocks();
    pos_pred_.assign(K + 1, 0);
    true_pos_.assign(K + 1, 0);
    for (int j = K - 1; j >= 0; --j) {
        pos_pred_[j] = pos_pred_[j + 1] + block_count_[j];
        true_pos_[j] = true_pos_[j + 1] + block_pos_[j];
    }
    miss_.resize(K + 1);
    tau_.resize(K + 1);
    for (int j = 0; j <= K; ++j) {
        miss_[j] = (positives_ - true_pos_[j]) + (pos_pred_[j] - true_pos_[j]);
        tau_[j] = 1.0 - static_cast<double>(pos_pred_[j]) / static_cast<double>(n_);
    }
}

double GroupProfile::rate(int j) const {
    return static_cast<double>(pos_pred_[j]) / static_cast<double>(n_);
}

double GroupProfile::tpr(int j) const {
    if (positives_ == 0)
        throw UndefinedDenominatorError("group " + std::to_string(group_) +
                                        " has no positive labels");
    return static_cast<double>(true_pos_[j]) / static_cast<double>(positives_);
}

int GroupProfile::block_of(double score) const {
    const auto it = std::lower_bound(block_score_.begin(), block_score_.end(), score);
    if (it == block_score_.end() || *it != score) return -1;
    return static_cast<int>(it - block_score_.begin());
}

std::vector<double> candidate_taus(const Dataset& dataset, const ScoreFunction& score,
                                   int group, int refinement) {
    if (refinement < 0) throw ValidationError("refinement must be >= 0");
    const GroupProfile p(dataset, score, group);
    std::vector<double> out;
    for (int j = 0; j < p.thresholds(); ++j) {
        if (j > 0 && refinement > 0) {
            const double lo = p.tau(j - 1), hi = p.tau(j);
            for (int i = 1; i <= refinement; ++i)
                out.push_back(lo + (hi - lo) * static_cast<double>(i) /
                                       static_cast<double>(refinement + 1));
        }
        out.push_back(p.tau(j));
    }
    return out;
}

namespace {

NormalizedThreshold realize_on_profile(const GroupProfile& p, double tau) {
    if (!(tau >= 0.0 && tau <= 1.0)) throw ValidationError("tau must be in [0,1]");
    const double target = 1.0 - tau;
    const int K = p.blocks();
    // rates are strictly decreasing from 1 (j=0) to 0 (j=K)
    int lo = 0, hi = K;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        if (p.rate(mid) >= target)
            lo = mid;
        else
            hi = mid;
    }
    NormalizedThreshold t;
    t.tau = tau;
    if (std::fabs(p.rate(lo) - target) <= kRateSnap) {
        t.lo = t.hi = lo;
        t.weight_lo = 1.0;
    } else if (std::fabs(p.rate(hi) - target) <= kRateSnap) {
        t.lo = t.hi = hi;
        t.weight_lo = 1.0;
    } else {
        t.lo = lo;
        t.hi = hi;
        t.weight_lo = (target - p.rate(hi)) / (p.rate(lo) - p.rate(hi));
    }
    return t;
}

double predict_block(const NormalizedThreshold& t, int block) {
    if (t.deterministic()) return block >= t.lo ? 1.0 : 0.0;
    if (block >= t.hi) return 1.0;
    if (block == t.lo) return t.weight_lo;
    return 0.0;
}

}  // namespace

NormalizedThreshold realize_tau(const Dataset& dataset, const ScoreFunction& score,
                                int group, double tau) {
    return realize_on_profile(GroupProfile(dataset, score, group), tau);
}

Predictions evaluate_policy(const GroupThresholdPolicy& policy, const Dataset& dataset) {
    if (!policy.context) throw StateError("policy has not been realized");
    if (policy.context->fingerprint != dataset.fingerprint())
        throw StateError("policy was realized on a different dataset");
    Predictions out(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const Record& r = dataset[i];
        const GroupProfile& p = policy.context->profile(r.group);
        const int b = p.block_of(policy.score(r.features, r.group));
        if (b < 0) throw StateError("record score not in the realized distribution");
        out[i] = predict_block(r.group == 1 ? policy.tau1 : policy.tau2, b);
    }
    return out;
}

ThresholdSearch::ThresholdSearch(const Dataset& dataset, const ScoreFunction& score,
                                 BiasNotion notion, SearchMode mode, SearchOptions options)
    : score_(score), notion_(notion), mode_(mode) {
    if (options.refinement < 0) throw ValidationError("refinement must be >= 0");
    context_ = std::make_shared<PolicyContext>(PolicyContext{
        dataset.fingerprint(),
        GroupProfile(dataset, score, 1),
        GroupProfile(dataset, score, 2),
    });
    total_ = context_->group1.size() + context_->group2.size();
    if (notion == BiasNotion::EqualOpportunity) {
        for (int g = 1; g <= 2; ++g)
            if (context_->profile(g).positives() == 0)
                throw UndefinedDenominatorError("group " + std::to_string(g) +
                                                " has no positive labels");
    }

    // Bias terms are compared in a scaled space where grid values are exact
    // integers: rate*n (DemPar) or tpr*P (EqOpp), times the other group's
    // denominator. Grid-grid comparisons are then exact and ties are real.
    for (int g = 0; g < 2; ++g) {
        const GroupProfile& p = context_->profile(g + 1);
        const GroupProfile& q = context_->profile(2 - g);
        const double scale =
            notion == BiasNotion::DemographicParity
                ? static_cast<double>(q.size())
                : static_cast<double>(q.positives());
        const auto& range = g == 0 ? options.tau_range1 : options.tau_range2;
        auto in_range = [&](double tau) {
            return !range || (tau >= range->first && tau <= range->second);
        };
        auto term_num = [&](int j) {
            return notion == BiasNotion::DemographicParity
                       ? static_cast<double>(p.predicted_positive(j))
                       : static_cast<double>(p.predicted_true_positive(j));
        };
        auto term_den = [&] {
            return notion == BiasNotion::DemographicParity
                       ? static_cast<double>(p.size())
                       : static_cast<double>(p.positives());
        }();
        const int refinement = mode == SearchMode::Normalized ? options.refinement : 0;
        for (int j = 0; j < p.thresholds(); ++j) {
            if (j > 0 && refinement > 0) {
                for (int i = 1; i <= refinement; ++i) {
                    const double target_rate =
                        p.rate(j - 1) + (p.rate(j) - p.rate(j - 1)) * static_cast<double>(i) /
                                            static_cast<double>(refinement + 1);
                    const double w = (target_rate - p.rate(j)) / (p.rate(j - 1) - p.rate(j));
                    Cand c;
                    c.tau = 1.0 - target_rate;
                    c.lo = j - 1;
                    c.hi = j;
                    c.weight_lo = w;
                    c.loss_num = w * static_cast<double>(p.misclassified(j - 1)) +
                                 (1.0 - w) * static_cast<double>(p.misclassified(j));
                    c.b = (w * term_num(j - 1) + (1.0 - w) * term_num(j)) / term_den;
                    c.b_scaled = (w * term_num(j - 1) + (1.0 - w) * term_num(j)) * scale;
                    if (in_range(c.tau)) cands_[g].push_back(c);
                }
            }
            Cand c;
            c.tau = p.tau(j);
            c.lo = c.hi = j;
            c.weight_lo = 1.0;
            c.loss_num = static_cast<double>(p.misclassified(j));
            c.b = term_num(j) / term_den;
            c.b_scaled = term_num(j) * scale;
            if (in_range(c.tau)) cands_[g].push_back(c);
        }
        if (cands_[g].empty())
            throw ValidationError("tau range excludes every candidate threshold for group " +
                                  std::to_string(g + 1));
    }

    // Unconstrained optimum, the anchor for proximity tie-breaking: cross
    // the per-group loss minimizers, resolving ties by lowest |bias| then
    // highest taus.
    double best_loss[2] = {std::numeric_limits<double>::infinity(),
                           std::numeric_limits<double>::infinity()};
    for (int g = 0; g < 2; ++g)
        for (const Cand& c : cands_[g]) best_loss[g] = std::min(best_loss[g], c.loss_num);
    bool found = false;
    double bt1 = 0.0, bt2 = 0.0, babs = 0.0;
    for (const Cand& c1 : cands_[0]) {
        if (c1.loss_num != best_loss[0]) continue;
        for (const Cand& c2 : cands_[1]) {
            if (c2.loss_num != best_loss[1]) continue;
            const double ab = std::fabs(c1.b_scaled - c2.b_scaled);
            if (!found || ab < babs || (ab == babs && (c1.tau > bt1 || (c1.tau == bt1 && c2.tau > bt2)))) {
                found = true;
                babs = ab;
                bt1 = c1.tau;
                bt2 = c2.tau;
            }
        }
    }
    att_tau1_ = bt1;
    att_tau2_ = bt2;
}

void ThresholdSearch::append_bias_matches(int group, double target, std::vector<Cand>& out) const {
    const std::vector<Cand>& grid = cands_[group - 1];
    // Scan deterministic candidates; b is non-increasing along the array.
    std::vector<int> det;
    for (int i = 0; i < static_cast<int>(grid.size()); ++i)
        if (grid[i].deterministic()) det.push_back(i);
    for (std::size_t k = 0; k < det.size(); ++k) {
        const Cand& c = grid[det[k]];
        if (std::fabs(c.b - target) <= kRateSnap) {
            Cand m = c;
            out.push_back(m);
            continue;
        }
        if (k + 1 < det.size()) {
            const Cand& d = grid[det[k + 1]];
            if (c.b - d.b > kRateSnap && d.b + kRateSnap < target && target < c.b - kRateSnap) {
                const double w = (target - d.b) / (c.b - d.b);
                Cand m;
                m.lo = c.lo;
                m.hi = d.lo;
                m.weight_lo = w;
                m.tau = w * c.tau + (1.0 - w) * d.tau;
                m.loss_num = w * c.loss_num + (1.0 - w) * d.loss_num;
                m.b = target;
                m.b_scaled = w * c.b_scaled + (1.0 - w) * d.b_scaled;
                out.push_back(m);
            }
        }
    }
}

SearchResult ThresholdSearch::make_result(const Cand& c1, const Cand& c2,
                                          double bias_value) const {
    SearchResult r;
    r.policy.score = score_;
    r.policy.tau1 = NormalizedThreshold{c1.tau, c1.lo, c1.hi, c1.weight_lo};
    r.policy.tau2 = NormalizedThreshold{c2.tau, c2.lo, c2.hi, c2.weight_lo};
    r.policy.context = context_;
    r.loss = (c1.loss_num + c2.loss_num) / static_cast<double>(total_);
    r.bias = bias_value;
    r.b1 = c1.b;
    r.b2 = c2.b;
    return r;
}

SearchResult ThresholdSearch::solve(double slack) const {
    if (!(slack >= 0.0)) throw ValidationError("slack must be >= 0");
    const double den1 = notion_ == BiasNotion::DemographicParity
                            ? static_cast<double>(context_->group1.size())
                            : static_cast<double>(context_->group1.positives());
    const double den2 = notion_ == BiasNotion::DemographicParity
                            ? static_cast<double>(context_->group2.size())
                            : static_cast<double>(context_->group2.positives());
    const double slack_scaled = slack * den1 * den2;

    const Cand* best1 = nullptr;
    const Cand* best2 = nullptr;
    double best_loss = 0.0, best_abs = 0.0, best_d1 = 0.0, best_d2 = 0.0;
    auto consider = [&](const Cand& c1, const Cand& c2, double abs_scaled) {
        const double loss = c1.loss_num + c2.loss_num;
        const double d1 = std::fabs(c1.tau - att_tau1_);
        const double d2 = std::fabs(c2.tau - att_tau2_);
        bool better;
        if (!best1)
            better = true;
        else if (loss != best_loss)
            better = loss < best_loss;
        else if (abs_scaled != best_abs)
            better = abs_scaled < best_abs;
        else if (d1 != best_d1)
            better = d1 < best_d1;
        else if (d2 != best_d2)
            better = d2 < best_d2;
        else if (c1.tau != best1->tau)
            better = c1.tau > best1->tau;
        else
            better = c2.tau > best2->tau;
        if (better) {
            best1 = &c1;
            best2 = &c2;
            best_loss = loss;
            best_abs = abs_scaled;
            best_d1 = d1;
            best_d2 = d2;
        }
    };

    const std::vector<Cand>& a = cands_[0];
    const std::vector<Cand>& b = cands_[1];
    // b_scaled is non-increasing along each candidate array, so the
    // feasible window in the other group is contiguous.
    for (const Cand& c1 : a) {
        const double hi_val = c1.b_scaled + slack_scaled;
        const double lo_val = c1.b_scaled - slack_scaled;
        const auto first = std::partition_point(
            b.begin(), b.end(), [&](const Cand& c) { return c.b_scaled > hi_val; });
        const auto last = std::partition_point(
            b.begin(), b.end(), [&](const Cand& c) { return c.b_scaled >= lo_val; });
        for (auto it = first; it != last; ++it)
            consider(c1, *it, std::fabs(c1.b_scaled - it->b_scaled));
    }

    std::vector<Cand> sat;
    if (mode_ == SearchMode::Normalized) {
        for (const Cand& c1 : a) {
            if (!c1.deterministic()) continue;
            for (const double sgn : {1.0, -1.0}) {
                sat.clear();
                append_bias_matches(2, c1.b - sgn * slack, sat);
                for (const Cand& c2 : sat) consider(c1, c2, slack_scaled);
            }
        }
        for (const Cand& c2 : b) {
            if (!c2.deterministic()) continue;
            for (const double sgn : {1.0, -1.0}) {
                sat.clear();
                append_bias_matches(1, c2.b + sgn * slack, sat);
                for (const Cand& c1 : sat) consider(c1, c2, slack_scaled);
            }
        }
    }

    if (!best1) {
        // Restricted grids can exclude every pair; report the closest miss.
        double min_abs = std::numeric_limits<double>::infinity();
        for (const Cand& c1 : a)
            for (const Cand& c2 : b)
                min_abs = std::min(min_abs, std::fabs(c1.b - c2.b));
        throw InfeasibleError("no threshold pair satisfies |bias| <= " + std::to_string(slack),
                              min_abs);
    }
    return make_result(*best1, *best2, best1->b - best2->b);
}

ThresholdCurves ThresholdSearch::curves() const {
    ThresholdCurves out;
    for (int g = 0; g < 2; ++g) {
        const double n = static_cast<double>(context_->profile(g + 1).size());
        auto& dst = g == 0 ? out.group1 : out.group2;
        for (const Cand& c : cands_[g]) dst.push_back({c.tau, c.loss_num / n, c.b});
    }
    return out;
}

SearchResult postprocess_search(const Dataset& dataset, const ScoreFunction& score,
                                BiasNotion notion, double slack, SearchMode mode,
                                int refinement) {
    SearchOptions opt;
    opt.refinement = refinement;
    return ThresholdSearch(dataset, score, notion, mode, opt).solve(slack);
}

ThresholdCurves threshold_curves(const Dataset& dataset, const ScoreFunction& score,
                                 BiasNotion notion, int refinement) {
    SearchOptions opt;
    opt.refinement = refinement;
    return ThresholdSearch(dataset, score, notion, SearchMode::Normalized, opt).curves();
}

}  // namespace slackaudit
