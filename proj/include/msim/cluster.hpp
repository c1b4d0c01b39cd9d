#pragma once

// Agglomerative hierarchical clustering (Lance-Williams updates over a
// condensed distance matrix with per-row nearest-neighbor caching), tree
// cutting, k-selection diagnostics, majority cluster-to-class mapping with
// repair for classes left clusterless, and nearest-centroid assignment of
// held-out samples.  Evaluation follows the shared-cluster convention:
// classes tied to the same clusters form one reporting group.

#include <optional>
#include <string>
#include <vector>

namespace msim {

enum class Linkage { Ward, Complete, Average, Centroid };

const char* linkage_name(Linkage l);
std::optional<Linkage> linkage_from(const std::string& name);

// ---------------------------------------------------------------------------
// tree construction

struct Dendrogram {
    struct Merge {
        int a = 0;        // node ids; leaves are 0..n-1, merge i creates n+i
        int b = 0;        // a < b
        double height = 0.0;
        int size = 0;     // leaves under the new node
    };
    int n_leaves = 0;
    std::vector<Merge> merges;  // n-1 entries in merge order
};

// pairwise Euclidean distances; ties broken toward the smallest id pair
Dendrogram agglomerate(const std::vector<std::vector<double>>& X, Linkage link);

// removes the last k-1 merges (the highest ones for monotone linkages);
// clusters are numbered 0..k-1 in order of their smallest member index
std::vector<int> cut(const Dendrogram& tree, int k);

// ---------------------------------------------------------------------------
// k-selection diagnostics

struct KDiagnostics {
    std::vector<int> ks;
    std::vector<double> silhouette;  // mean silhouette per k
    std::vector<double> wcss;        // within-cluster sum of squares per k
    int silhouette_peak_k = 0;       // argmax silhouette (smaller k on ties)
    int elbow_k = 0;                 // max distance to the chord of the wcss curve
    double cophenetic = 0.0;         // corr(cophenetic dists, euclidean dists)
};

KDiagnostics k_diagnostics(const std::vector<std::vector<double>>& X,
                           const Dendrogram& tree, const std::vector<int>& ks);

// ---------------------------------------------------------------------------
// cluster-to-class mapping and evaluation

// plurality class per cluster (ties to the lower class id); a class left
// with no cluster may take the cluster holding most of its members, but
// only when that does not strip the donor class of its last cluster;
// competing claims resolve larger member count first
std::vector<int> map_clusters(const std::vector<int>& assignments,
                              const std::vector<int>& labels, int k);

struct ClusterModel {
    int k = 0;
    std::vector<int> train_assign;
    std::vector<std::vector<double>> centroids;  // k x d, train means
    std::vector<int> cluster_class;              // repaired plurality map
    // reporting groups: connected classes and clusters (shared membership)
    std::vector<std::vector<int>> group_classes;
    std::vector<std::vector<int>> group_clusters;
    std::vector<int> cluster_group;  // group index per cluster

    int group_of_class(int class_id) const;  // -1 if the class is unknown
    int nearest_centroid(const std::vector<double>& x) const;
};

ClusterModel fit_clusters(const std::vector<std::vector<double>>& X,
                          const std::vector<int>& labels, int k,
                          Linkage link = Linkage::Ward);

// same model, but reusing an already-built tree over the same X; lets one
// agglomeration serve several values of k
ClusterModel fit_clusters_cut(const std::vector<std::vector<double>>& X,
                              const std::vector<int>& labels, int k,
                              const Dendrogram& tree);

struct ClusterEvalRow {
    std::vector<int> classes;   // classes in the group, ascending
    std::vector<int> clusters;  // clusters in the group, ascending
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    long long support = 0;      // true samples of the group in the test set
};

struct ClusterEvaluation {
    std::vector<ClusterEvalRow> rows;    // ordered by lowest class id
    double accuracy = 0.0;               // group-level test accuracy
    std::vector<int> assignments;        // nearest-centroid cluster per sample
};

ClusterEvaluation evaluate_clusters(const ClusterModel& model,
                                    const std::vector<std::vector<double>>& X,
                                    const std::vector<int>& labels);

}  // namespace msim
