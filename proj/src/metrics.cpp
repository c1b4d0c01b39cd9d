#include "msim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace msim {

int ClassificationReport::index_of(int class_id) const {
    auto it = std::lower_bound(classes.begin(), classes.end(), class_id);
    if (it == classes.end() || *it != class_id) return -1;
    return static_cast<int>(it - classes.begin());
}

double ClassificationReport::f1_of(int class_id) const {
    int i = index_of(class_id);
    return i < 0 ? 0.0 : f1[static_cast<size_t>(i)];
}

ClassificationReport evaluate_predictions(const std::vector<int>& y_true,
                                          const std::vector<int>& y_pred,
                                          const std::vector<int>& ensure) {
    if (y_true.size() != y_pred.size())
        throw std::invalid_argument("evaluate_predictions: length mismatch");
    if (y_true.empty())
        throw std::invalid_argument("evaluate_predictions: empty input");

    ClassificationReport r;
    r.classes = y_true;
    r.classes.insert(r.classes.end(), y_pred.begin(), y_pred.end());
    r.classes.insert(r.classes.end(), ensure.begin(), ensure.end());
    std::sort(r.classes.begin(), r.classes.end());
    r.classes.erase(std::unique(r.classes.begin(), r.classes.end()),
                    r.classes.end());

    const size_t k = r.classes.size();
    const size_t n = y_true.size();
    r.counts.assign(k, std::vector<long long>(k, 0));
    for (size_t s = 0; s < n; ++s) {
        int ti = r.index_of(y_true[s]);
        int pi = r.index_of(y_pred[s]);
        ++r.counts[static_cast<size_t>(ti)][static_cast<size_t>(pi)];
    }

    r.support.assign(k, 0);
    r.precision.assign(k, 0.0);
    r.recall.assign(k, 0.0);
    r.f1.assign(k, 0.0);
    long long correct = 0;
    std::vector<long long> pred_total(k, 0);
    for (size_t i = 0; i < k; ++i) {
        for (size_t j = 0; j < k; ++j) {
            r.support[i] += r.counts[i][j];
            pred_total[j] += r.counts[i][j];
        }
        correct += r.counts[i][i];
    }
    for (size_t i = 0; i < k; ++i) {
        double tp = static_cast<double>(r.counts[i][i]);
        if (pred_total[i] > 0) r.precision[i] = tp / static_cast<double>(pred_total[i]);
        if (r.support[i] > 0) r.recall[i] = tp / static_cast<double>(r.support[i]);
        double pr = r.precision[i] + r.recall[i];
        if (pr > 0.0) r.f1[i] = 2.0 * r.precision[i] * r.recall[i] / pr;
    }
    r.accuracy = static_cast<double>(correct) / static_cast<double>(n);

    // display form: each row scaled to sum to one in absolute value, with
    // everything off the diagonal flipped negative
    r.confusion.assign(k, std::vector<double>(k, 0.0));
    for (size_t i = 0; i < k; ++i) {
        if (r.support[i] == 0) continue;
        for (size_t j = 0; j < k; ++j) {
            double v = static_cast<double>(r.counts[i][j]) /
                       static_cast<double>(r.support[i]);
            r.confusion[i][j] = (i == j) ? v : -v;
        }
    }
    return r;
}

}  // namespace msim
