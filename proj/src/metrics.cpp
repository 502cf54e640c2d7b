#include "slackaudit/metrics.hpp"

#include "slackaudit/errors.hpp"

namespace slackaudit {

std::string to_string(BiasNotion notion) {
    return notion == BiasNotion::DemographicParity ? "dempar" : "eqopp";
}

BiasNotion bias_notion_from_string(const std::string& s) {
    if (s == "dempar") return BiasNotion::DemographicParity;
    if (s == "eqopp") return BiasNotion::EqualOpportunity;
    throw ValidationError("unknown bias notion: " + s);
}

namespace {

void check_aligned(const Predictions& predictions, const Dataset& dataset) {
    if (predictions.size() != dataset.size())
        throw AlignmentError("predictions length " + std::to_string(predictions.size()) +
                             " does not match dataset size " + std::to_string(dataset.size()));
    for (double f : predictions)
        if (!(f >= 0.0 && f <= 1.0))
            throw ValidationError("prediction outside [0,1]");
}

}  // namespace

double positive_rate(const Predictions& predictions, const Dataset& dataset, int group) {
    check_aligned(predictions, dataset);
    double sum = 0.0;
    for (std::size_t i = 0; i < dataset.size(); ++i)
        if (dataset[i].group == group) sum += predictions[i];
    return sum / static_cast<double>(dataset.group_size(group));
}

double true_positive_rate(const Predictions& predictions, const Dataset& dataset, int group) {
    check_aligned(predictions, dataset);
    const std::size_t pos = dataset.group_positives(group);
    if (pos == 0)
        throw UndefinedDenominatorError("group " + std::to_string(group) +
                                        " has no positive labels");
    double sum = 0.0;
    for (std::size_t i = 0; i < dataset.size(); ++i)
        if (dataset[i].group == group && dataset[i].label == 1) sum += predictions[i];
    return sum / static_cast<double>(pos);
}

double bias(BiasNotion notion, const Predictions& predictions, const Dataset& dataset) {
    if (notion == BiasNotion::DemographicParity)
        return positive_rate(predictions, dataset, 1) - positive_rate(predictions, dataset, 2);
    return true_positive_rate(predictions, dataset, 1) -
           true_positive_rate(predictions, dataset, 2);
}

double misclassification_loss(const Predictions& predictions, const Dataset& dataset) {
    check_aligned(predictions, dataset);
    double sum = 0.0;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const double f = predictions[i];
        sum += dataset[i].label == 1 ? 1.0 - f : f;
    }
    return sum / static_cast<double>(dataset.size());
}

}  // namespace slackaudit
