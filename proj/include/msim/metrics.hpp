#pragma once

// Multiclass classification metrics: per-class precision/recall/F1 with
// supports, overall accuracy, and a confusion matrix kept in two forms —
// raw counts and the display convention (rows normalized by true-class
// support, off-diagonal entries negated).

#include <vector>

namespace msim {

struct ClassificationReport {
    std::vector<int> classes;  // ascending class ids
    std::vector<long long> support;
    std::vector<double> precision;
    std::vector<double> recall;
    std::vector<double> f1;
    double accuracy = 0.0;
    std::vector<std::vector<long long>> counts;     // counts[true][pred]
    std::vector<std::vector<double>> confusion;     // signed, row-normalized

    // f1 for a class id; 0 if the class is absent from the report
    double f1_of(int class_id) const;
    int index_of(int class_id) const;  // -1 if absent
};

// classes = sorted union of labels seen in y_true and y_pred, plus any ids
// passed in `ensure` (so a class with no test samples still gets a row)
ClassificationReport evaluate_predictions(const std::vector<int>& y_true,
                                          const std::vector<int>& y_pred,
                                          const std::vector<int>& ensure = {});

}  // namespace msim
