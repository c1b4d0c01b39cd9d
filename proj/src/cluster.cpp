#include "msim/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace msim {

const char* linkage_name(Linkage l) {
    switch (l) {
        case Linkage::Ward: return "ward";
        case Linkage::Complete: return "complete";
        case Linkage::Average: return "average";
        case Linkage::Centroid: return "centroid";
    }
    return "?";
}

std::optional<Linkage> linkage_from(const std::string& name) {
    if (name == "ward") return Linkage::Ward;
    if (name == "complete") return Linkage::Complete;
    if (name == "average") return Linkage::Average;
    if (name == "centroid") return Linkage::Centroid;
    return std::nullopt;
}

namespace {

double euclid(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t f = 0; f < a.size(); ++f) {
        double d = a[f] - b[f];
        s += d * d;
    }
    return std::sqrt(s);
}

// condensed index for the strict upper triangle of an n x n matrix
size_t cond_index(size_t n, size_t i, size_t j) {
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

double lance_williams(Linkage link, double d_it, double d_jt, double d_ij,
                      double ni, double nj, double nt) {
    switch (link) {
        case Linkage::Complete: return std::max(d_it, d_jt);
        case Linkage::Average: return (ni * d_it + nj * d_jt) / (ni + nj);
        case Linkage::Ward: {
            double s = ((ni + nt) * d_it * d_it + (nj + nt) * d_jt * d_jt -
                        nt * d_ij * d_ij) /
                       (ni + nj + nt);
            return std::sqrt(std::max(0.0, s));
        }
        case Linkage::Centroid: {
            double s = (ni * d_it * d_it + nj * d_jt * d_jt) / (ni + nj) -
                       ni * nj * d_ij * d_ij / ((ni + nj) * (ni + nj));
            return std::sqrt(std::max(0.0, s));
        }
    }
    return 0.0;
}

}  // namespace

Dendrogram agglomerate(const std::vector<std::vector<double>>& X, Linkage link) {
    const size_t n = X.size();
    if (n < 2) throw std::invalid_argument("agglomerate: need at least 2 samples");
    for (const auto& row : X)
        if (row.size() != X[0].size())
            throw std::invalid_argument("agglomerate: ragged feature matrix");

    std::vector<double> cond(n * (n - 1) / 2);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            cond[cond_index(n, i, j)] = euclid(X[i], X[j]);
    auto dist = [&](size_t a, size_t b) -> double& {
        return a < b ? cond[cond_index(n, a, b)] : cond[cond_index(n, b, a)];
    };

    std::vector<int> id(n), sz(n, 1);
    std::vector<char> alive(n, 1);
    std::iota(id.begin(), id.end(), 0);

    // (distance, node-id pair) ordering; ids break exact distance ties
    auto better = [&](double d1, int a1, int b1, double d2, int a2, int b2) {
        if (d1 != d2) return d1 < d2;
        int lo1 = std::min(a1, b1), hi1 = std::max(a1, b1);
        int lo2 = std::min(a2, b2), hi2 = std::max(a2, b2);
        if (lo1 != lo2) return lo1 < lo2;
        return hi1 < hi2;
    };

    struct Best {
        double d = 0.0;
        long slot = -1;
    };
    std::vector<Best> nn(n);
    auto rescan = [&](size_t s) {
        Best b;
        for (size_t t = 0; t < n; ++t) {
            if (t == s || !alive[t]) continue;
            double d = dist(s, t);
            if (b.slot < 0 ||
                better(d, id[s], id[t], b.d, id[s], id[static_cast<size_t>(b.slot)]))
                b = {d, static_cast<long>(t)};
        }
        nn[s] = b;
    };
    for (size_t s = 0; s < n; ++s) rescan(s);

    Dendrogram tree;
    tree.n_leaves = static_cast<int>(n);
    int next_id = static_cast<int>(n);
    for (size_t step = 0; step + 1 < n; ++step) {
        long gs = -1;
        for (size_t s = 0; s < n; ++s) {
            if (!alive[s] || nn[s].slot < 0) continue;
            if (gs < 0 ||
                better(nn[s].d, id[s], id[static_cast<size_t>(nn[s].slot)],
                       nn[static_cast<size_t>(gs)].d, id[static_cast<size_t>(gs)],
                       id[static_cast<size_t>(nn[static_cast<size_t>(gs)].slot)]))
                gs = static_cast<long>(s);
        }
        size_t si = static_cast<size_t>(gs);
        size_t sj = static_cast<size_t>(nn[si].slot);
        double d_ij = nn[si].d;
        tree.merges.push_back({std::min(id[si], id[sj]), std::max(id[si], id[sj]),
                               d_ij, sz[si] + sz[sj]});

        for (size_t t = 0; t < n; ++t) {
            if (!alive[t] || t == si || t == sj) continue;
            dist(t, si) = lance_williams(link, dist(t, si), dist(t, sj), d_ij,
                                         sz[si], sz[sj], sz[t]);
        }
        sz[si] += sz[sj];
        id[si] = next_id++;
        alive[sj] = 0;
        nn[sj].slot = -1;

        rescan(si);
        for (size_t t = 0; t < n; ++t) {
            if (!alive[t] || t == si) continue;
            long p = nn[t].slot;
            if (p == static_cast<long>(si) || p == static_cast<long>(sj)) {
                rescan(t);  // cached partner was rebuilt or removed
            } else if (better(dist(t, si), id[t], id[si], nn[t].d, id[t],
                              id[static_cast<size_t>(p)])) {
                nn[t] = {dist(t, si), static_cast<long>(si)};
            }
        }
    }
    return tree;
}

std::vector<int> cut(const Dendrogram& tree, int k) {
    const int n = tree.n_leaves;
    if (k < 1 || k > n) throw std::invalid_argument("cut: k out of range");
    // union-find over node ids; apply the first n-k merges
    std::vector<int> parent(static_cast<size_t>(n) + tree.merges.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) {
        while (parent[static_cast<size_t>(v)] != v) {
            parent[static_cast<size_t>(v)] =
                parent[static_cast<size_t>(parent[static_cast<size_t>(v)])];
            v = parent[static_cast<size_t>(v)];
        }
        return v;
    };
    for (int m = 0; m < n - k; ++m) {
        const auto& mg = tree.merges[static_cast<size_t>(m)];
        int node = n + m;
        parent[static_cast<size_t>(find(mg.a))] = node;
        parent[static_cast<size_t>(find(mg.b))] = node;
    }
    std::vector<int> assign(static_cast<size_t>(n), -1);
    std::map<int, int> root_to_cluster;
    int next = 0;
    for (int leaf = 0; leaf < n; ++leaf) {
        int root = find(leaf);
        auto it = root_to_cluster.find(root);
        if (it == root_to_cluster.end())
            it = root_to_cluster.emplace(root, next++).first;
        assign[static_cast<size_t>(leaf)] = it->second;
    }
    return assign;  // numbered in order of smallest member, by construction
}

// ---------------------------------------------------------------------------
// diagnostics

KDiagnostics k_diagnostics(const std::vector<std::vector<double>>& X,
                           const Dendrogram& tree, const std::vector<int>& ks) {
    const size_t n = X.size();
    if (static_cast<int>(n) != tree.n_leaves)
        throw std::invalid_argument("k_diagnostics: X does not match the tree");
    if (ks.empty()) throw std::invalid_argument("k_diagnostics: empty k range");

    KDiagnostics out;
    out.ks = ks;

    std::vector<double> cond(n * (n - 1) / 2);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            cond[cond_index(n, i, j)] = euclid(X[i], X[j]);

    for (int k : ks) {
        std::vector<int> assign = cut(tree, k);
        std::vector<long long> csize(static_cast<size_t>(k), 0);
        for (int a : assign) ++csize[static_cast<size_t>(a)];

        // mean silhouette: per-sample sums of distances to each cluster
        std::vector<std::vector<double>> sums(
            n, std::vector<double>(static_cast<size_t>(k), 0.0));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) {
                double d = cond[cond_index(n, i, j)];
                sums[i][static_cast<size_t>(assign[j])] += d;
                sums[j][static_cast<size_t>(assign[i])] += d;
            }
        double sil = 0.0;
        for (size_t i = 0; i < n; ++i) {
            size_t own = static_cast<size_t>(assign[i]);
            if (csize[own] <= 1) continue;  // singleton contributes 0
            double a = sums[i][own] / static_cast<double>(csize[own] - 1);
            double b = std::numeric_limits<double>::infinity();
            for (size_t c = 0; c < static_cast<size_t>(k); ++c) {
                if (c == own || csize[c] == 0) continue;
                b = std::min(b, sums[i][c] / static_cast<double>(csize[c]));
            }
            double m = std::max(a, b);
            if (m > 0.0 && b != std::numeric_limits<double>::infinity())
                sil += (b - a) / m;
        }
        out.silhouette.push_back(sil / static_cast<double>(n));

        // within-cluster sum of squares against cluster means
        const size_t d = X[0].size();
        std::vector<std::vector<double>> mean(static_cast<size_t>(k),
                                              std::vector<double>(d, 0.0));
        for (size_t i = 0; i < n; ++i)
            for (size_t f = 0; f < d; ++f)
                mean[static_cast<size_t>(assign[i])][f] += X[i][f];
        for (size_t c = 0; c < static_cast<size_t>(k); ++c)
            if (csize[c] > 0)
                for (size_t f = 0; f < d; ++f)
                    mean[c][f] /= static_cast<double>(csize[c]);
        double wcss = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const auto& m = mean[static_cast<size_t>(assign[i])];
            for (size_t f = 0; f < d; ++f) {
                double dv = X[i][f] - m[f];
                wcss += dv * dv;
            }
        }
        out.wcss.push_back(wcss);
    }

    size_t peak = 0;
    for (size_t i = 1; i < out.silhouette.size(); ++i)
        if (out.silhouette[i] > out.silhouette[peak]) peak = i;
    out.silhouette_peak_k = ks[peak];

    // elbow: the point farthest from the chord of the normalized wcss curve
    if (ks.size() < 3) {
        out.elbow_k = ks.front();
    } else {
        double k0 = ks.front(), k1 = ks.back();
        double w_lo = *std::min_element(out.wcss.begin(), out.wcss.end());
        double w_hi = *std::max_element(out.wcss.begin(), out.wcss.end());
        double wspan = (w_hi > w_lo) ? (w_hi - w_lo) : 1.0;
        double x0 = 0.0, y0 = (out.wcss.front() - w_lo) / wspan;
        double x1 = 1.0, y1 = (out.wcss.back() - w_lo) / wspan;
        double chord = std::hypot(x1 - x0, y1 - y0);
        size_t best = 0;
        double best_dist = -1.0;
        for (size_t i = 0; i < ks.size(); ++i) {
            double x = (ks[i] - k0) / (k1 - k0);
            double y = (out.wcss[i] - w_lo) / wspan;
            double dist =
                std::fabs((y1 - y0) * x - (x1 - x0) * y + x1 * y0 - y1 * x0) / chord;
            if (dist > best_dist) {
                best_dist = dist;
                best = i;
            }
        }
        out.elbow_k = ks[best];
    }

    // cophenetic correlation: stream every leaf pair at its joining merge
    {
        std::vector<std::vector<int>> leaves(
            static_cast<size_t>(tree.n_leaves) + tree.merges.size());
        for (int i = 0; i < tree.n_leaves; ++i)
            leaves[static_cast<size_t>(i)] = {i};
        double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
        double count = 0;
        for (size_t m = 0; m < tree.merges.size(); ++m) {
            const auto& mg = tree.merges[m];
            auto& L = leaves[static_cast<size_t>(mg.a)];
            auto& R = leaves[static_cast<size_t>(mg.b)];
            for (int u : L)
                for (int v : R) {
                    double x = euclid(X[static_cast<size_t>(u)],
                                      X[static_cast<size_t>(v)]);
                    double y = mg.height;
                    sx += x;
                    sy += y;
                    sxx += x * x;
                    syy += y * y;
                    sxy += x * y;
                    count += 1.0;
                }
            size_t node = static_cast<size_t>(tree.n_leaves) + m;
            if (L.size() < R.size()) L.swap(R);
            L.insert(L.end(), R.begin(), R.end());
            leaves[node] = std::move(L);
            R.clear();
        }
        double vx = count * sxx - sx * sx;
        double vy = count * syy - sy * sy;
        out.cophenetic =
            (vx > 0.0 && vy > 0.0)
                ? (count * sxy - sx * sy) / std::sqrt(vx * vy)
                : 0.0;
    }
    return out;
}

// ---------------------------------------------------------------------------
// mapping and evaluation

std::vector<int> map_clusters(const std::vector<int>& assignments,
                              const std::vector<int>& labels, int k) {
    if (assignments.size() != labels.size() || assignments.empty())
        throw std::invalid_argument("map_clusters: bad input shapes");
    std::vector<int> class_ids = labels;
    std::sort(class_ids.begin(), class_ids.end());
    class_ids.erase(std::unique(class_ids.begin(), class_ids.end()),
                    class_ids.end());
    auto class_index = [&](int c) {
        return static_cast<size_t>(
            std::lower_bound(class_ids.begin(), class_ids.end(), c) -
            class_ids.begin());
    };

    std::vector<std::vector<long long>> cnt(
        static_cast<size_t>(k), std::vector<long long>(class_ids.size(), 0));
    for (size_t s = 0; s < labels.size(); ++s)
        ++cnt[static_cast<size_t>(assignments[s])][class_index(labels[s])];

    std::vector<int> mapped(static_cast<size_t>(k), -1);
    for (size_t c = 0; c < static_cast<size_t>(k); ++c) {
        size_t best = 0;
        for (size_t ci = 1; ci < class_ids.size(); ++ci)
            if (cnt[c][ci] > cnt[c][best]) best = ci;  // ties keep the lower id
        mapped[c] = class_ids[best];
    }

    // repair classes that ended up with no cluster: each may claim the
    // cluster holding most of its members, larger claims first, but never
    // strip the donor class of its only cluster
    struct Claim {
        long long count;
        int class_id;
    };
    std::vector<Claim> claims;
    for (size_t ci = 0; ci < class_ids.size(); ++ci) {
        if (std::find(mapped.begin(), mapped.end(), class_ids[ci]) != mapped.end())
            continue;
        long long best = 0;
        for (size_t c = 0; c < static_cast<size_t>(k); ++c)
            best = std::max(best, cnt[c][ci]);
        if (best > 0) claims.push_back({best, class_ids[ci]});
    }
    std::sort(claims.begin(), claims.end(), [](const Claim& a, const Claim& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.class_id < b.class_id;
    });
    std::vector<char> taken(static_cast<size_t>(k), 0);
    for (const auto& claim : claims) {
        size_t ci = class_index(claim.class_id);
        // candidate clusters by member count, then lower cluster id
        std::vector<size_t> order;
        for (size_t c = 0; c < static_cast<size_t>(k); ++c)
            if (cnt[c][ci] > 0) order.push_back(c);
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            if (cnt[a][ci] != cnt[b][ci]) return cnt[a][ci] > cnt[b][ci];
            return a < b;
        });
        for (size_t c : order) {
            if (taken[c]) continue;
            int donor = mapped[c];
            long long donor_clusters = 0;
            for (size_t c2 = 0; c2 < static_cast<size_t>(k); ++c2)
                if (mapped[c2] == donor) ++donor_clusters;
            if (donor_clusters < 2) continue;  // would orphan the donor
            mapped[c] = claim.class_id;
            taken[c] = 1;
            break;
        }
    }
    return mapped;
}

int ClusterModel::group_of_class(int class_id) const {
    for (size_t g = 0; g < group_classes.size(); ++g)
        for (int c : group_classes[g])
            if (c == class_id) return static_cast<int>(g);
    return -1;
}

int ClusterModel::nearest_centroid(const std::vector<double>& x) const {
    size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < centroids.size(); ++c) {
        double s = 0.0;
        for (size_t f = 0; f < x.size(); ++f) {
            double d = x[f] - centroids[c][f];
            s += d * d;
        }
        if (s < best_d) {  // strict: equidistant keeps the lower index
            best_d = s;
            best = c;
        }
    }
    return static_cast<int>(best);
}

ClusterModel fit_clusters(const std::vector<std::vector<double>>& X,
                          const std::vector<int>& labels, int k, Linkage link) {
    return fit_clusters_cut(X, labels, k, agglomerate(X, link));
}

ClusterModel fit_clusters_cut(const std::vector<std::vector<double>>& X,
                              const std::vector<int>& labels, int k,
                              const Dendrogram& tree) {
    if (X.size() != labels.size() || X.empty())
        throw std::invalid_argument("fit_clusters: bad input shapes");
    if (tree.n_leaves != static_cast<int>(X.size()))
        throw std::invalid_argument("fit_clusters: tree does not match X");
    ClusterModel model;
    model.k = k;
    model.train_assign = cut(tree, k);

    const size_t d = X[0].size();
    model.centroids.assign(static_cast<size_t>(k), std::vector<double>(d, 0.0));
    std::vector<long long> csize(static_cast<size_t>(k), 0);
    for (size_t s = 0; s < X.size(); ++s) {
        auto c = static_cast<size_t>(model.train_assign[s]);
        ++csize[c];
        for (size_t f = 0; f < d; ++f) model.centroids[c][f] += X[s][f];
    }
    for (size_t c = 0; c < static_cast<size_t>(k); ++c)
        if (csize[c] > 0)
            for (size_t f = 0; f < d; ++f)
                model.centroids[c][f] /= static_cast<double>(csize[c]);

    model.cluster_class = map_clusters(model.train_assign, labels, k);

    // reporting groups: union clusters with their mapped class and every
    // class with its home cluster (the one holding most of its members)
    std::vector<int> class_ids = labels;
    std::sort(class_ids.begin(), class_ids.end());
    class_ids.erase(std::unique(class_ids.begin(), class_ids.end()),
                    class_ids.end());
    auto class_index = [&](int c) {
        return static_cast<size_t>(
            std::lower_bound(class_ids.begin(), class_ids.end(), c) -
            class_ids.begin());
    };
    std::vector<std::vector<long long>> cnt(
        static_cast<size_t>(k), std::vector<long long>(class_ids.size(), 0));
    for (size_t s = 0; s < labels.size(); ++s)
        ++cnt[static_cast<size_t>(model.train_assign[s])][class_index(labels[s])];

    // union-find over k clusters followed by the distinct classes
    std::vector<int> parent(static_cast<size_t>(k) + class_ids.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) {
        while (parent[static_cast<size_t>(v)] != v) {
            parent[static_cast<size_t>(v)] =
                parent[static_cast<size_t>(parent[static_cast<size_t>(v)])];
            v = parent[static_cast<size_t>(v)];
        }
        return v;
    };
    auto unite = [&](int a, int b) { parent[static_cast<size_t>(find(a))] = find(b); };
    for (int c = 0; c < k; ++c)
        unite(c, k + static_cast<int>(class_index(model.cluster_class[static_cast<size_t>(c)])));
    for (size_t ci = 0; ci < class_ids.size(); ++ci) {
        size_t home = 0;
        for (size_t c = 1; c < static_cast<size_t>(k); ++c)
            if (cnt[c][ci] > cnt[home][ci]) home = c;  // ties keep lower cluster
        unite(k + static_cast<int>(ci), static_cast<int>(home));
    }

    std::map<int, int> root_to_group;
    auto group_index = [&](int root) {
        auto it = root_to_group.find(root);
        if (it == root_to_group.end()) {
            it = root_to_group.emplace(root, static_cast<int>(model.group_classes.size()))
                     .first;
            model.group_classes.emplace_back();
            model.group_clusters.emplace_back();
        }
        return it->second;
    };
    // classes first so groups are ordered by their lowest class id
    for (size_t ci = 0; ci < class_ids.size(); ++ci) {
        int g = group_index(find(k + static_cast<int>(ci)));
        model.group_classes[static_cast<size_t>(g)].push_back(class_ids[ci]);
    }
    model.cluster_group.assign(static_cast<size_t>(k), -1);
    for (int c = 0; c < k; ++c) {
        int g = group_index(find(c));
        model.group_clusters[static_cast<size_t>(g)].push_back(c);
        model.cluster_group[static_cast<size_t>(c)] = g;
    }
    return model;
}

ClusterEvaluation evaluate_clusters(const ClusterModel& model,
                                    const std::vector<std::vector<double>>& X,
                                    const std::vector<int>& labels) {
    if (X.size() != labels.size() || X.empty())
        throw std::invalid_argument("evaluate_clusters: bad input shapes");
    const size_t groups = model.group_classes.size();
    std::vector<long long> tp(groups, 0), predicted(groups, 0), actual(groups, 0);

    ClusterEvaluation ev;
    ev.assignments.reserve(X.size());
    long long correct = 0;
    for (size_t s = 0; s < X.size(); ++s) {
        int cl = model.nearest_centroid(X[s]);
        ev.assignments.push_back(cl);
        int pg = model.cluster_group[static_cast<size_t>(cl)];
        int tg = model.group_of_class(labels[s]);
        ++predicted[static_cast<size_t>(pg)];
        if (tg >= 0) ++actual[static_cast<size_t>(tg)];
        if (tg >= 0 && tg == pg) {
            ++tp[static_cast<size_t>(tg)];
            ++correct;
        }
    }
    ev.accuracy = static_cast<double>(correct) / static_cast<double>(X.size());
    for (size_t g = 0; g < groups; ++g) {
        ClusterEvalRow row;
        row.classes = model.group_classes[g];
        row.clusters = model.group_clusters[g];
        row.support = actual[g];
        if (predicted[g] > 0)
            row.precision = static_cast<double>(tp[g]) / static_cast<double>(predicted[g]);
        if (actual[g] > 0)
            row.recall = static_cast<double>(tp[g]) / static_cast<double>(actual[g]);
        if (row.precision + row.recall > 0.0)
            row.f1 = 2.0 * row.precision * row.recall / (row.precision + row.recall);
        ev.rows.push_back(std::move(row));
    }
    return ev;
}

}  // namespace msim
