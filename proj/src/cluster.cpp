#include "dfd/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "dfd/errors.hpp"
#include "dfd/rng.hpp"

namespace dfd::cluster {

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double t = a[i] - b[i];
        d += t * t;
    }
    return d;
}

}  // namespace

ClusterState kmeans(const std::vector<std::vector<double>>& points, int k, std::uint64_t seed, int max_iter) {
    if (points.empty()) throw ValidationError("kmeans: empty input");
    if (k < 1) throw ValidationError("kmeans: k must be positive");
    const std::size_t dim = points[0].size();
    for (const auto& p : points)
        if (p.size() != dim) throw ValidationError("kmeans: inconsistent vector lengths");

    std::set<std::vector<double>> distinct(points.begin(), points.end());
    if (static_cast<std::size_t>(k) > distinct.size())
        throw ValidationError("kmeans: k exceeds number of distinct points");

    const int n = static_cast<int>(points.size());
    ClusterState state;
    state.centers.reserve(k);

    Rng rng(seed);
    if (std::pow(static_cast<double>(k), n) <= 10000.0) {
        // Tiny input: all surjective assignments fit in a few thousand
        // candidates, so start Lloyd at the true optimum instead of gambling
        // on init draws. Restarts then agree across seeds.
        std::vector<int> assign(n, 0), best_assign;
        std::vector<std::vector<double>> cen(k, std::vector<double>(dim, 0.0));
        std::vector<int> cnt(k, 0);
        double best = -1;
        while (true) {
            std::fill(cnt.begin(), cnt.end(), 0);
            for (auto& c : cen) std::fill(c.begin(), c.end(), 0.0);
            for (int i = 0; i < n; ++i) {
                ++cnt[assign[i]];
                for (std::size_t d = 0; d < dim; ++d) cen[assign[i]][d] += points[i][d];
            }
            bool surjective = true;
            for (int c = 0; c < k && surjective; ++c) {
                if (cnt[c] == 0) surjective = false;
                else
                    for (auto& v : cen[c]) v /= cnt[c];
            }
            if (surjective) {
                double obj = 0;
                for (int i = 0; i < n; ++i)
                    for (std::size_t d = 0; d < dim; ++d) {
                        const double diff = points[i][d] - cen[assign[i]][d];
                        obj += diff * diff;
                    }
                if (best < 0 || obj < best) {
                    best = obj;
                    best_assign = assign;
                }
            }
            int pos = n - 1;
            while (pos >= 0 && assign[pos] == k - 1) assign[pos--] = 0;
            if (pos < 0) break;
            ++assign[pos];
        }
        std::fill(cnt.begin(), cnt.end(), 0);
        for (auto& c : cen) std::fill(c.begin(), c.end(), 0.0);
        for (int i = 0; i < n; ++i) {
            ++cnt[best_assign[i]];
            for (std::size_t d = 0; d < dim; ++d) cen[best_assign[i]][d] += points[i][d];
        }
        for (int c = 0; c < k; ++c)
            for (auto& v : cen[c]) v /= cnt[c];
        state.centers = cen;
    } else {
        state.centers.push_back(points[rng.index(points.size())]);
        std::vector<double> min_dist(n);
        while (static_cast<int>(state.centers.size()) < k) {
            // k-means++ D^2 seeding; duplicates of chosen centers carry zero weight.
            double total = 0;
            for (int i = 0; i < n; ++i) {
                double d = std::numeric_limits<double>::infinity();
                for (const auto& c : state.centers) d = std::min(d, sq_dist(points[i], c));
                min_dist[i] = d;
                total += d;
            }
            const double u = rng.uniform(0, total);
            double acc = 0;
            int pick = -1;
            for (int i = 0; i < n; ++i) {
                acc += min_dist[i];
                if (u < acc) {
                    pick = i;
                    break;
                }
            }
            if (pick < 0) {  // u landed on the last accumulation edge
                pick = 0;
                for (int i = 1; i < n; ++i)
                    if (min_dist[i] > min_dist[pick]) pick = i;
            }
            state.centers.push_back(points[pick]);
        }
    }

    state.assignments.assign(n, -1);
    std::vector<int> prev(n, -2);

    for (int iter = 0; iter < max_iter; ++iter) {
        // Assignment step (nearest center, ties to the lowest cluster index).
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_d = sq_dist(points[i], state.centers[0]);
            for (int c = 1; c < k; ++c) {
                const double d = sq_dist(points[i], state.centers[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            state.assignments[i] = best;
        }

        // Repair empty clusters with the point farthest from its center.
        for (int c = 0; c < k; ++c) {
            if (std::count(state.assignments.begin(), state.assignments.end(), c) > 0) continue;
            int worst = -1;
            double worst_d = -1;
            for (int i = 0; i < n; ++i) {
                const double d = sq_dist(points[i], state.centers[state.assignments[i]]);
                if (d > worst_d) {
                    worst_d = d;
                    worst = i;
                }
            }
            state.assignments[worst] = c;
            state.centers[c] = points[worst];
        }

        double objective = 0;
        for (int i = 0; i < n; ++i) objective += sq_dist(points[i], state.centers[state.assignments[i]]);
        state.objective_history.push_back(objective);
        state.objective = objective;
        state.iterations = iter + 1;

        if (state.assignments == prev) break;
        prev = state.assignments;

        // Center update: mean of assigned points.
        std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
        std::vector<int> counts(k, 0);
        for (int i = 0; i < n; ++i) {
            const int c = state.assignments[i];
            ++counts[c];
            for (std::size_t d = 0; d < dim; ++d) sums[c][d] += points[i][d];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;
            for (std::size_t d = 0; d < dim; ++d) state.centers[c][d] = sums[c][d] / counts[c];
        }
    }

    return state;
}

std::map<std::string, std::string> assign_dimensions(
    const ClusterState& state, const std::vector<std::string>& words,
    const std::map<std::string, std::set<std::string>>& seed_lexicon) {
    if (seed_lexicon.empty()) throw ValidationError("assign_dimensions: empty lexicon");
    if (words.size() != state.assignments.size())
        throw ValidationError("assign_dimensions: one word per point required");

    const int k = static_cast<int>(state.centers.size());
    // hits[cluster][dimension] -> count; std::map keeps the lexicographic tie-break.
    std::vector<std::map<std::string, int>> hits(k);
    for (std::size_t i = 0; i < words.size(); ++i) {
        for (const auto& [dim, seeds] : seed_lexicon) {
            if (seeds.count(words[i])) ++hits[state.assignments[i]][dim];
        }
    }

    std::vector<std::string> label(k, "unclassified");
    for (int c = 0; c < k; ++c) {
        int best = 0;
        for (const auto& [dim, count] : hits[c]) {
            if (count > best) {
                best = count;
                label[c] = dim;
            }
        }
    }

    std::map<std::string, std::string> out;
    for (std::size_t i = 0; i < words.size(); ++i) out[words[i]] = label[state.assignments[i]];
    return out;
}

std::string clusters_to_csv(const ClusterState& state, const std::vector<std::string>& words,
                            const std::map<std::string, std::string>& dimensions, const std::string& header) {
    std::ostringstream out;
    out << header << "word,cluster,dimension\n";
    for (std::size_t i = 0; i < words.size(); ++i) {
        out << words[i] << "," << state.assignments[i] << "," << dimensions.at(words[i]) << "\n";
    }
    return out.str();
}

}  // namespace dfd::cluster
