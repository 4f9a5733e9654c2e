#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace dfd::cluster {

struct ClusterState {
    std::vector<std::vector<double>> centers;
    std::vector<int> assignments;           // point index -> cluster index
    double objective = 0;                   // sum of squared distances to assigned centers
    int iterations = 0;
    std::vector<double> objective_history;  // recorded after each assignment step
};

// Lloyd iterations with seeded k-means++ initialization: the first center is
// a seeded uniform pick, each further center drawn with probability
// proportional to the squared distance to its nearest chosen center.
// Inputs with at most ~10^4 candidate partitions skip the init draw and start
// Lloyd at the enumerated optimum, so tiny problems converge to it from every
// seed. Empty clusters are repaired by donating the globally farthest point.
ClusterState kmeans(const std::vector<std::vector<double>>& points, int k, std::uint64_t seed, int max_iter);

// Labels every word by its cluster's majority vote over seed-lexicon hits.
// Clusters without any hit become "unclassified"; vote ties break to the
// lexicographically smallest dimension name.
std::map<std::string, std::string> assign_dimensions(const ClusterState& state,
                                                     const std::vector<std::string>& words,
                                                     const std::map<std::string, std::set<std::string>>& seed_lexicon);

std::string clusters_to_csv(const ClusterState& state, const std::vector<std::string>& words,
                            const std::map<std::string, std::string>& dimensions, const std::string& header);

}  // namespace dfd::cluster
