#pragma once

// Soft-margin support vector machines: a pairwise working-set dual solver
// (second-order selection, KKT gap stop), one-vs-one multiclass voting,
// validation grid search, and per-pair weight attribution for the linear
// kernel.

#include <optional>
#include <string>
#include <vector>

#include "msim/metrics.hpp"

namespace msim {

enum class Kernel { Linear, Poly, Rbf };

const char* kernel_name(Kernel k);
std::optional<Kernel> kernel_from(const std::string& name);

struct SvmHyperParams {
    Kernel kernel = Kernel::Linear;
    double C = 1.0;
    double gamma = 0.1;  // poly / rbf only
    int degree = 3;      // poly only
};

double kernel_eval(const SvmHyperParams& hp, const std::vector<double>& a,
                   const std::vector<double>& b);

// ---------------------------------------------------------------------------
// binary machine

struct BinarySvm {
    SvmHyperParams hp;
    int class_pos = 0;  // class id mapped to +1
    int class_neg = 0;  // class id mapped to -1
    std::vector<std::vector<double>> sv_x;
    std::vector<double> sv_coef;  // alpha_i * y_i per support vector
    double bias = 0.0;            // decision(x) = sum coef*K(sv, x) + bias
    std::vector<double> w;        // explicit weights, linear kernel only
    double objective = 0.0;       // dual objective at the solution
    int iterations = 0;
    bool converged = false;

    double decision(const std::vector<double>& x) const;
};

// y must be -1/+1 with both labels present; deterministic in the data order
BinarySvm train_binary_svm(const std::vector<std::vector<double>>& X,
                           const std::vector<int>& y,
                           const SvmHyperParams& hp);

// ---------------------------------------------------------------------------
// one-vs-one multiclass

struct OvoSvm {
    SvmHyperParams hp;
    std::vector<int> classes;      // ascending
    std::vector<BinarySvm> pairs;  // (c0,c1), (c0,c2), ..., (c1,c2), ...

    // oriented decision value per pair, in pair order (>0 favors the lower
    // class id of the pair)
    std::vector<double> pair_decisions(const std::vector<double>& x) const;
    // majority vote; ties by summed oriented decision values, then by the
    // lowest class id
    int vote(const std::vector<double>& decisions) const;
    int predict(const std::vector<double>& x) const;
};

OvoSvm train_ovo(const std::vector<std::vector<double>>& X,
                 const std::vector<int>& labels, const SvmHyperParams& hp);

ClassificationReport evaluate(const OvoSvm& model,
                              const std::vector<std::vector<double>>& X,
                              const std::vector<int>& labels);

// ---------------------------------------------------------------------------
// hyperparameter grid

struct GridPoint {
    SvmHyperParams hp;
    double val_accuracy = 0.0;
};

struct GridResult {
    SvmHyperParams best;
    double best_val_accuracy = 0.0;
    std::vector<GridPoint> points;  // every grid point, in evaluation order
};

// C in {1,10,100,1000}; gamma in {0.01,0.1,1} (poly/rbf); degree in {2,3,4}
std::vector<SvmHyperParams> default_grid();

// evaluates every point; ties go to the simpler model: linear before poly
// before rbf, then smaller C, gamma, degree
GridResult grid_search(const std::vector<std::vector<double>>& X_train,
                       const std::vector<int>& y_train,
                       const std::vector<std::vector<double>>& X_val,
                       const std::vector<int>& y_val,
                       const std::vector<SvmHyperParams>& grid);

// ---------------------------------------------------------------------------
// weight attribution (linear kernel only)

// result[p][f] = |w_p[f]| / sum_g |w_p[g]| for pair index p in pair order;
// each row sums to one
std::vector<std::vector<double>> explain_weights(const OvoSvm& model);

}  // namespace msim
