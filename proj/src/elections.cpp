#include "manet/elections.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace manet {

void CriteriaWeights::validate() const {
    if (!(w1 > w2)) throw std::invalid_argument("weights: w1 > w2 required");
    if (std::abs(w2 - w3) > 1e-9) throw std::invalid_argument("weights: w2 == w3 required");
    if (!(w3 > w4)) throw std::invalid_argument("weights: w3 > w4 required");
    if (w4 < 0.0) throw std::invalid_argument("weights: w4 must be >= 0");
    if (std::abs(w1 + w2 + w3 + w4 - 1.0) > 1e-9) {
        throw std::invalid_argument("weights: must sum to 1");
    }
}

namespace {

double weighted_score(const std::array<double, 4>& x, const CriteriaWeights& w) {
    w.validate();
    for (double v : x) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw std::invalid_argument("criteria metrics must be in [0, 1]");
        }
    }
    return w.w1 * x[0] + w.w2 * x[1] + w.w3 * x[2] + w.w4 * x[3];
}

}  // namespace

double ocf(const std::array<double, 4>& metrics, const CriteriaWeights& weights) {
    return weighted_score(metrics, weights);
}

double bcf(const std::array<double, 4>& metrics, const CriteriaWeights& weights) {
    return weighted_score(metrics, weights);
}

double normalize_mobility(double relative_mobility_mps) {
    if (relative_mobility_mps < 0.0) throw std::invalid_argument("relative mobility must be >= 0");
    return 1.0 / (1.0 + relative_mobility_mps);
}

double normalize_degree(int degree, int max_degree) {
    if (degree < 0 || max_degree < 0) throw std::invalid_argument("degrees must be >= 0");
    if (max_degree == 0) return 0.0;
    return std::min(1.0, static_cast<double>(degree) / static_cast<double>(max_degree));
}

int elect_cluster_head(std::span<const CaCandidate> candidates, int cluster_size) {
    const CaCandidate* best = nullptr;
    for (const auto& c : candidates) {
        if (c.hop_count >= cluster_size) continue;  // dropped from the election
        if (!best) {
            best = &c;
            continue;
        }
        if (c.relative_mobility < best->relative_mobility ||
            (c.relative_mobility == best->relative_mobility && c.degree > best->degree) ||
            (c.relative_mobility == best->relative_mobility && c.degree == best->degree &&
             c.id < best->id)) {
            best = &c;
        }
    }
    if (!best) throw std::runtime_error("elect_cluster_head: no eligible candidate");
    return best->id;
}

std::array<SectorElection, 6> elect_ras(
    const std::array<std::vector<ScoredCandidate>, 6>& sector_candidates,
    const CriteriaWeights& weights) {
    std::array<SectorElection, 6> result;
    for (int s = 0; s < 6; ++s) {
        const auto& pool = sector_candidates[static_cast<std::size_t>(s)];
        SectorElection& out = result[static_cast<std::size_t>(s)];
        out.n_candidates = static_cast<int>(pool.size());
        for (const auto& c : pool) {
            double score = ocf(c.metrics, weights);
            if (!out.elected || score > out.score ||
                (score == out.score && c.id < *out.elected)) {
                out.elected = c.id;
                out.score = score;
            }
        }
    }
    return result;
}

namespace {

struct TripleScore {
    double spread;    // min pairwise distance - stddev of pairwise distances
    double bcf_sum;
    std::array<int, 3> ids;  // sorted
};

TripleScore score_triple(const ScoredCandidate& a, const ScoredCandidate& b,
                         const ScoredCandidate& c, const CriteriaWeights& w) {
    double dab = distance(a.position, b.position);
    double dac = distance(a.position, c.position);
    double dbc = distance(b.position, c.position);
    double mean = (dab + dac + dbc) / 3.0;
    double var = ((dab - mean) * (dab - mean) + (dac - mean) * (dac - mean) +
                  (dbc - mean) * (dbc - mean)) /
                 3.0;
    double spread = std::min({dab, dac, dbc}) - std::sqrt(var);
    std::array<int, 3> ids{a.id, b.id, c.id};
    std::sort(ids.begin(), ids.end());
    return {spread, bcf(a.metrics, w) + bcf(b.metrics, w) + bcf(c.metrics, w), ids};
}

}  // namespace

std::vector<int> elect_references(std::span<const ScoredCandidate> candidates,
                                  const CriteriaWeights& weights, double bcf_threshold,
                                  bool* collinear_warning) {
    std::vector<const ScoredCandidate*> eligible;
    for (const auto& c : candidates) {
        if (bcf(c.metrics, weights) >= bcf_threshold) eligible.push_back(&c);
    }
    if (eligible.size() < 3) {
        throw std::runtime_error("elect_references: fewer than 3 candidates above threshold");
    }
    std::sort(eligible.begin(), eligible.end(),
              [&](const ScoredCandidate* a, const ScoredCandidate* b) {
                  double sa = bcf(a->metrics, weights);
                  double sb = bcf(b->metrics, weights);
                  if (sa != sb) return sa > sb;
                  return a->id < b->id;
              });
    std::size_t k = std::min<std::size_t>(8, eligible.size());

    bool has_best = false;
    TripleScore best{};
    std::array<const ScoredCandidate*, 3> best_nodes{};
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            for (std::size_t l = j + 1; l < k; ++l) {
                TripleScore ts = score_triple(*eligible[i], *eligible[j], *eligible[l], weights);
                if (!has_best || ts.spread > best.spread ||
                    (ts.spread == best.spread && ts.bcf_sum > best.bcf_sum) ||
                    (ts.spread == best.spread && ts.bcf_sum == best.bcf_sum &&
                     ts.ids < best.ids)) {
                    best = ts;
                    best_nodes = {eligible[i], eligible[j], eligible[l]};
                    has_best = true;
                }
            }
        }
    }

    if (collinear_warning) {
        // Downstream triangulation rejects collinear references; surface it now.
        double area = std::abs(triangle_area2(best_nodes[0]->position, best_nodes[1]->position,
                                              best_nodes[2]->position)) / 2.0;
        *collinear_warning = area <= 1e-6;
    }

    return {best.ids.begin(), best.ids.end()};
}

std::string election_csv_header() {
    return "epoch,cluster,kind,candidates,dropped,elected,score";
}

std::string to_csv(const ElectionRow& row) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%d,%d,%s,%d,%d,%s,%.6f", row.epoch, row.cluster,
                  row.kind.c_str(), row.candidates, row.dropped, row.elected.c_str(), row.score);
    return buf;
}

}  // namespace manet
