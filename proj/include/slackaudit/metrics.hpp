#pragma once

#include <string>
#include <vector>

#include "slackaudit/dataset.hpp"

namespace slackaudit {

enum class BiasNotion {
    DemographicParity,  // difference in positive prediction rates
    EqualOpportunity,   // difference in true positive rates
};

std::string to_string(BiasNotion notion);
BiasNotion bias_notion_from_string(const std::string& s);

// Per-record probabilities of positive classification, aligned with a
// Dataset's records. Stochastic classifiers are evaluated in expectation.
using Predictions = std::vector<double>;

// Mean prediction within a group.
double positive_rate(const Predictions& predictions, const Dataset& dataset, int group);

// Mean prediction among a group's positively labeled records. Throws
// UndefinedDenominatorError when the group has no positives.
double true_positive_rate(const Predictions& predictions, const Dataset& dataset, int group);

// Signed group-1-minus-group-2 disparity; callers take |.| for the
// absolutely bounded constraint.
double bias(BiasNotion notion, const Predictions& predictions, const Dataset& dataset);

// Expected 0-1 loss over the whole dataset:
// (1/N) sum y*(1-f) + (1-y)*f.
double misclassification_loss(const Predictions& predictions, const Dataset& dataset);

}  // namespace slackaudit
