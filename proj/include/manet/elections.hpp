#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "manet/geometry.hpp"

namespace manet {

// Four criteria weights with the published ordering constraint
// w1 > w2 = w3 > w4 and sum 1.
struct CriteriaWeights {
    double w1 = 0.0, w2 = 0.0, w3 = 0.0, w4 = 0.0;

    static CriteriaWeights ocf_default() { return {0.46, 0.22, 0.22, 0.10}; }
    static CriteriaWeights bcf_default() { return {0.44, 0.23, 0.23, 0.10}; }

    // Throws when the ordering or the unit sum is violated.
    void validate() const;
};

// Weighted linear score over four normalized metrics, in [0, 1].
double ocf(const std::array<double, 4>& metrics, const CriteriaWeights& weights);
double bcf(const std::array<double, 4>& metrics, const CriteriaWeights& weights);

// Metric normalizations used when building election inputs: values already in
// [0, 1] pass through, relative mobility maps via m -> 1/(1+m), connectivity
// degree divides by the epoch's maximum degree.
double normalize_mobility(double relative_mobility_mps);
double normalize_degree(int degree, int max_degree);

struct CaCandidate {
    int id = -1;
    double relative_mobility = 0.0;  // m/s, aggregated over one-hop neighbors
    int degree = 0;
    int hop_count = 0;  // eccentricity within the cluster connectivity graph
};

// Pairwise tournament from the published rules: drop candidates whose hop
// count reaches the cluster size, lower relative mobility wins, ties go to the
// higher degree, then to the lowest id. Equivalent to a lexicographic min, so
// the result cannot depend on candidate order. Throws when nobody is eligible.
int elect_cluster_head(std::span<const CaCandidate> candidates, int cluster_size);

struct ScoredCandidate {
    int id = -1;
    std::array<double, 4> metrics{};  // normalized
    Position position;
};

struct SectorElection {
    std::optional<int> elected;
    double score = 0.0;
    int n_candidates = 0;
};

// Per sector: argmax OCF, ties to the lowest id; an empty sector leaves the
// slot vacant and the DDMZ partial.
std::array<SectorElection, 6> elect_ras(
    const std::array<std::vector<ScoredCandidate>, 6>& sector_candidates,
    const CriteriaWeights& weights);

// Reference-node election: filter by BCF >= threshold, keep the top
// min(8, n) by score, then brute-force all triples for the most equidistant
// one (max of: min pairwise distance - stddev of pairwise distances). Ties go
// to the higher BCF sum, then the lexicographically smallest id triple.
// Returns sorted ids. Throws with fewer than 3 candidates above threshold.
std::vector<int> elect_references(std::span<const ScoredCandidate> candidates,
                                  const CriteriaWeights& weights, double bcf_threshold,
                                  bool* collinear_warning = nullptr);

// CSV row for the election log.
struct ElectionRow {
    int epoch = 0;
    int cluster = -1;
    std::string kind;  // CA | RA | REF
    int candidates = 0;
    int dropped = 0;
    std::string elected;  // id, or id list for REF, or "-" on vacancy
    double score = 0.0;
};

std::string election_csv_header();
std::string to_csv(const ElectionRow& row);

}  // namespace manet
