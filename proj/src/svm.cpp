#include "msim/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace msim {

const char* kernel_name(Kernel k) {
    switch (k) {
        case Kernel::Linear: return "linear";
        case Kernel::Poly: return "poly";
        case Kernel::Rbf: return "rbf";
    }
    return "?";
}

std::optional<Kernel> kernel_from(const std::string& name) {
    if (name == "linear") return Kernel::Linear;
    if (name == "poly") return Kernel::Poly;
    if (name == "rbf") return Kernel::Rbf;
    return std::nullopt;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double sqdist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

}  // namespace

double kernel_eval(const SvmHyperParams& hp, const std::vector<double>& a,
                   const std::vector<double>& b) {
    switch (hp.kernel) {
        case Kernel::Linear: return dot(a, b);
        case Kernel::Poly:
            return std::pow(hp.gamma * dot(a, b) + 1.0, hp.degree);
        case Kernel::Rbf: return std::exp(-hp.gamma * sqdist(a, b));
    }
    return 0.0;
}

double BinarySvm::decision(const std::vector<double>& x) const {
    double s = bias;
    for (size_t i = 0; i < sv_x.size(); ++i)
        s += sv_coef[i] * kernel_eval(hp, sv_x[i], x);
    return s;
}

// ---------------------------------------------------------------------------
// dual solver
//
// minimizes f(a) = 1/2 a'Qa - e'a with Q_ij = y_i y_j K_ij over the box
// [0,C]^n intersected with y'a = 0.  each step picks the steepest-ascent
// index i and the partner j giving the best second-order gain, solves the
// two-variable subproblem analytically, and clips to the box.  stops when
// the KKT gap m - M drops below tolerance.

namespace {

constexpr double kKktTol = 1e-3;
constexpr int kMaxIterations = 100000;
constexpr double kCurveFloor = 1e-12;
constexpr size_t kDenseGramCap = 4096;  // full gram matrix below this size

struct DualSolution {
    std::vector<double> alpha;
    double bias = 0.0;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
};

DualSolution solve_dual(const std::vector<std::vector<double>>& X,
                        const std::vector<int>& y, const SvmHyperParams& hp) {
    const size_t n = X.size();
    const double C = hp.C;
    const bool dense = hp.kernel != Kernel::Linear && n <= kDenseGramCap;

    std::vector<double> gram;
    if (dense) {
        gram.resize(n * n);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j <= i; ++j) {
                double v = kernel_eval(hp, X[i], X[j]);
                gram[i * n + j] = v;
                gram[j * n + i] = v;
            }
    }
    auto kernel_row = [&](size_t i, std::vector<double>& out) {
        if (dense) {
            std::copy_n(gram.begin() + static_cast<long>(i * n), n, out.begin());
        } else {
            for (size_t t = 0; t < n; ++t) out[t] = kernel_eval(hp, X[i], X[t]);
        }
    };

    std::vector<double> diag(n);
    for (size_t i = 0; i < n; ++i)
        diag[i] = dense ? gram[i * n + i] : kernel_eval(hp, X[i], X[i]);

    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);  // gradient of f; Qa - e
    std::vector<double> row_i(n), row_j(n);

    const double inf = std::numeric_limits<double>::infinity();
    auto in_up = [&](size_t t) {
        return (y[t] > 0 && alpha[t] < C) || (y[t] < 0 && alpha[t] > 0.0);
    };
    auto in_low = [&](size_t t) {
        return (y[t] < 0 && alpha[t] < C) || (y[t] > 0 && alpha[t] > 0.0);
    };

    DualSolution out;
    int it = 0;
    bool converged = false;
    double rho = 0.0;
    for (; it < kMaxIterations; ++it) {
        double m = -inf, M = inf;
        long i = -1;
        for (size_t t = 0; t < n; ++t) {
            double v = -y[t] * grad[t];
            if (in_up(t) && v > m) {
                m = v;
                i = static_cast<long>(t);
            }
            if (in_low(t) && v < M) M = v;
        }
        if (i < 0 || m - M <= kKktTol) {
            converged = true;
            rho = (i < 0 || M == inf) ? 0.0 : (m + M) / 2.0;
            break;
        }

        kernel_row(static_cast<size_t>(i), row_i);
        long j = -1;
        double best_gain = 0.0;
        for (size_t t = 0; t < n; ++t) {
            if (!in_low(t)) continue;
            double vt = -y[t] * grad[t];
            if (vt >= m) continue;
            double b = m - vt;
            double a = diag[static_cast<size_t>(i)] + diag[t] - 2.0 * row_i[t];
            if (a < kCurveFloor) a = kCurveFloor;
            double gain = -(b * b) / a;
            if (gain < best_gain) {
                best_gain = gain;
                j = static_cast<long>(t);
            }
        }
        if (j < 0) {  // no partner can improve; numerically optimal
            converged = true;
            rho = (m + M) / 2.0;
            break;
        }
        kernel_row(static_cast<size_t>(j), row_j);

        const size_t si = static_cast<size_t>(i), sj = static_cast<size_t>(j);
        // move along a_i += y_i t, a_j -= y_j t (keeps y'a fixed)
        double curve = diag[si] + diag[sj] - 2.0 * row_i[sj];
        if (curve < kCurveFloor) curve = kCurveFloor;
        double step = (y[sj] * grad[sj] - y[si] * grad[si]) / curve;
        double lo = -alpha[si] * y[si], hi = (C - alpha[si]) * y[si];
        if (lo > hi) std::swap(lo, hi);
        double lo2 = (alpha[sj] - C) * y[sj], hi2 = alpha[sj] * y[sj];
        if (lo2 > hi2) std::swap(lo2, hi2);
        lo = std::max(lo, lo2);
        hi = std::min(hi, hi2);
        step = std::clamp(step, lo, hi);
        if (step == 0.0) {  // pinned against the box; nothing left to gain
            converged = true;
            rho = (m + M) / 2.0;
            break;
        }

        alpha[si] += y[si] * step;
        alpha[sj] -= y[sj] * step;
        for (auto t : {si, sj}) {
            if (alpha[t] < 1e-12) alpha[t] = 0.0;
            if (alpha[t] > C - 1e-12) alpha[t] = C;
        }
        for (size_t t = 0; t < n; ++t)
            grad[t] += y[t] * step * (row_i[t] - row_j[t]);
    }
    if (!converged) {
        // iteration cap: report the KKT midpoint of the final state
        double m = -inf, M = inf;
        for (size_t t = 0; t < n; ++t) {
            double v = -y[t] * grad[t];
            if (in_up(t)) m = std::max(m, v);
            if (in_low(t)) M = std::min(M, v);
        }
        rho = (m > -inf && M < inf) ? (m + M) / 2.0 : 0.0;
    }

    double objective = 0.0;
    for (size_t t = 0; t < n; ++t) objective += 0.5 * alpha[t] * (1.0 - grad[t]);

    out.alpha = std::move(alpha);
    out.bias = rho;
    out.objective = objective;
    out.iterations = it;
    out.converged = converged;
    return out;
}

}  // namespace

BinarySvm train_binary_svm(const std::vector<std::vector<double>>& X,
                           const std::vector<int>& y,
                           const SvmHyperParams& hp) {
    if (X.empty() || X.size() != y.size())
        throw std::invalid_argument("train_binary_svm: bad input shapes");
    bool has_pos = false, has_neg = false;
    for (int v : y) {
        if (v == 1) has_pos = true;
        else if (v == -1) has_neg = true;
        else throw std::invalid_argument("train_binary_svm: labels must be -1/+1");
    }
    if (!has_pos || !has_neg)
        throw std::invalid_argument("train_binary_svm: single-class input");
    if (hp.C <= 0.0) throw std::invalid_argument("train_binary_svm: C must be positive");

    DualSolution sol = solve_dual(X, y, hp);

    BinarySvm model;
    model.hp = hp;
    model.bias = sol.bias;
    model.objective = sol.objective;
    model.iterations = sol.iterations;
    model.converged = sol.converged;
    for (size_t t = 0; t < X.size(); ++t) {
        if (sol.alpha[t] <= 1e-12) continue;
        model.sv_x.push_back(X[t]);
        model.sv_coef.push_back(sol.alpha[t] * y[t]);
    }
    if (hp.kernel == Kernel::Linear) {
        model.w.assign(X[0].size(), 0.0);
        for (size_t s = 0; s < model.sv_x.size(); ++s)
            for (size_t f = 0; f < model.w.size(); ++f)
                model.w[f] += model.sv_coef[s] * model.sv_x[s][f];
    }
    return model;
}

// ---------------------------------------------------------------------------
// one-vs-one

OvoSvm train_ovo(const std::vector<std::vector<double>>& X,
                 const std::vector<int>& labels, const SvmHyperParams& hp) {
    if (X.size() != labels.size() || X.empty())
        throw std::invalid_argument("train_ovo: bad input shapes");
    OvoSvm model;
    model.hp = hp;
    model.classes = labels;
    std::sort(model.classes.begin(), model.classes.end());
    model.classes.erase(
        std::unique(model.classes.begin(), model.classes.end()),
        model.classes.end());
    if (model.classes.size() < 2)
        throw std::invalid_argument("train_ovo: need at least two classes");

    for (size_t a = 0; a < model.classes.size(); ++a) {
        for (size_t b = a + 1; b < model.classes.size(); ++b) {
            int ca = model.classes[a], cb = model.classes[b];
            std::vector<std::vector<double>> Xp;
            std::vector<int> yp;
            for (size_t s = 0; s < X.size(); ++s) {
                if (labels[s] == ca) {
                    Xp.push_back(X[s]);
                    yp.push_back(1);
                } else if (labels[s] == cb) {
                    Xp.push_back(X[s]);
                    yp.push_back(-1);
                }
            }
            BinarySvm bin = train_binary_svm(Xp, yp, hp);
            bin.class_pos = ca;
            bin.class_neg = cb;
            model.pairs.push_back(std::move(bin));
        }
    }
    return model;
}

std::vector<double> OvoSvm::pair_decisions(const std::vector<double>& x) const {
    std::vector<double> d;
    d.reserve(pairs.size());
    for (const auto& p : pairs) d.push_back(p.decision(x));
    return d;
}

int OvoSvm::vote(const std::vector<double>& decisions) const {
    if (decisions.size() != pairs.size())
        throw std::invalid_argument("vote: decision count mismatch");
    const size_t k = classes.size();
    std::vector<int> votes(k, 0);
    std::vector<double> score(k, 0.0);
    size_t idx = 0;
    for (size_t a = 0; a < k; ++a) {
        for (size_t b = a + 1; b < k; ++b, ++idx) {
            double d = decisions[idx];
            if (d > 0.0) ++votes[a];
            else ++votes[b];
            score[a] += d;
            score[b] -= d;
        }
    }
    size_t best = 0;
    for (size_t c = 1; c < k; ++c) {
        if (votes[c] > votes[best] ||
            (votes[c] == votes[best] && score[c] > score[best]))
            best = c;  // equal votes and equal score keep the lower class id
    }
    return classes[best];
}

int OvoSvm::predict(const std::vector<double>& x) const {
    return vote(pair_decisions(x));
}

ClassificationReport evaluate(const OvoSvm& model,
                              const std::vector<std::vector<double>>& X,
                              const std::vector<int>& labels) {
    if (X.size() != labels.size() || X.empty())
        throw std::invalid_argument("evaluate: bad input shapes");
    std::vector<int> pred;
    pred.reserve(X.size());
    for (const auto& x : X) pred.push_back(model.predict(x));
    return evaluate_predictions(labels, pred, model.classes);
}

// ---------------------------------------------------------------------------
// grid search

std::vector<SvmHyperParams> default_grid() {
    const double cs[] = {1.0, 10.0, 100.0, 1000.0};
    const double gammas[] = {0.01, 0.1, 1.0};
    const int degrees[] = {2, 3, 4};
    std::vector<SvmHyperParams> grid;
    for (double c : cs) grid.push_back({Kernel::Linear, c, 0.1, 3});
    for (double c : cs)
        for (double g : gammas)
            for (int d : degrees) grid.push_back({Kernel::Poly, c, g, d});
    for (double c : cs)
        for (double g : gammas) grid.push_back({Kernel::Rbf, c, g, 3});
    return grid;
}

namespace {

int kernel_rank(Kernel k) {
    switch (k) {
        case Kernel::Linear: return 0;
        case Kernel::Poly: return 1;
        case Kernel::Rbf: return 2;
    }
    return 3;
}

// simplicity order used to break validation-accuracy ties
bool simpler(const SvmHyperParams& a, const SvmHyperParams& b) {
    if (kernel_rank(a.kernel) != kernel_rank(b.kernel))
        return kernel_rank(a.kernel) < kernel_rank(b.kernel);
    if (a.C != b.C) return a.C < b.C;
    if (a.gamma != b.gamma) return a.gamma < b.gamma;
    return a.degree < b.degree;
}

}  // namespace

GridResult grid_search(const std::vector<std::vector<double>>& X_train,
                       const std::vector<int>& y_train,
                       const std::vector<std::vector<double>>& X_val,
                       const std::vector<int>& y_val,
                       const std::vector<SvmHyperParams>& grid) {
    if (grid.empty()) throw std::invalid_argument("grid_search: empty grid");
    if (X_val.size() != y_val.size() || X_val.empty())
        throw std::invalid_argument("grid_search: bad validation set");
    GridResult res;
    bool have_best = false;
    for (const auto& hp : grid) {
        OvoSvm model = train_ovo(X_train, y_train, hp);
        long long correct = 0;
        for (size_t s = 0; s < X_val.size(); ++s)
            if (model.predict(X_val[s]) == y_val[s]) ++correct;
        double acc = static_cast<double>(correct) /
                     static_cast<double>(X_val.size());
        res.points.push_back({hp, acc});
        if (!have_best || acc > res.best_val_accuracy ||
            (acc == res.best_val_accuracy && simpler(hp, res.best))) {
            have_best = true;
            res.best = hp;
            res.best_val_accuracy = acc;
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// weight attribution

std::vector<std::vector<double>> explain_weights(const OvoSvm& model) {
    if (model.hp.kernel != Kernel::Linear)
        throw std::invalid_argument("explain_weights: linear kernel only");
    std::vector<std::vector<double>> rows;
    rows.reserve(model.pairs.size());
    for (const auto& p : model.pairs) {
        std::vector<double> row(p.w.size(), 0.0);
        double total = 0.0;
        for (double wf : p.w) total += std::fabs(wf);
        if (total > 0.0) {
            for (size_t f = 0; f < p.w.size(); ++f)
                row[f] = std::fabs(p.w[f]) / total;
        } else if (!row.empty()) {
            // degenerate all-zero weights: spread evenly so rows still sum to 1
            std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(row.size()));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace msim
