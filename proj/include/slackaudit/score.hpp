#pragma once

#include <memory>
#include <span>
#include <vector>

namespace slackaudit {

struct GabosModel;

// Deterministic mapping from (features, group) to a real score.
//
// Three shapes cover every trainer in this project: a raw feature column
// (synthetic counterexamples), an affine function w.x + b (linear models),
// and a tabular lookup through a fitted partition (GABOS).
class ScoreFunction {
  public:
    enum class Kind { RawColumn, Affine, Tabular };

    static ScoreFunction raw_column(int index);
    static ScoreFunction affine(std::vector<double> weights, double offset);
    static ScoreFunction tabular(std::shared_ptr<const GabosModel> model);

    double operator()(std::span<const double> features, int group) const;

    Kind kind() const { return kind_; }
    const GabosModel* model() const { return model_.get(); }

  private:
    ScoreFunction() = default;
    Kind kind_ = Kind::RawColumn;
    int column_ = 0;
    std::vector<double> weights_;
    double offset_ = 0.0;
    std::shared_ptr<const GabosModel> model_;
};

}  // namespace slackaudit
