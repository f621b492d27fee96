#include "manet/trust.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace manet {

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

void require01(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument(std::string(what) + " must be in [0, 1]");
    }
}

}  // namespace

KeyPair KeyStore::register_node(int id) {
    std::uint64_t sk = mix_keys({seed_, 0x6b657973ULL, static_cast<std::uint64_t>(id)});
    KeyPair kp{mix64(sk ^ 0x7075626cULL), sk};
    keys_[id] = kp;
    return kp;
}

std::optional<KeyPair> KeyStore::find(int id) const {
    auto it = keys_.find(id);
    if (it == keys_.end()) return std::nullopt;
    return it->second;
}

std::uint64_t KeyStore::sign(int signer_id, std::uint64_t message_hash) const {
    auto it = keys_.find(signer_id);
    if (it == keys_.end()) throw std::invalid_argument("sign: unknown signer");
    return mix_keys({it->second.signing_key, message_hash});
}

bool KeyStore::verify(int signer_id, std::uint64_t message_hash, std::uint64_t signature) const {
    auto it = keys_.find(signer_id);
    if (it == keys_.end()) return false;
    return mix_keys({it->second.signing_key, message_hash}) == signature;
}

std::uint64_t Certificate::body_hash() const {
    return mix_keys({static_cast<std::uint64_t>(subject_id), subject_public_key,
                     static_cast<std::uint64_t>(issuer_id),
                     static_cast<std::uint64_t>(timestamp * 1e6)});
}

Certificate issue_certificate(const KeyStore& keys, int issuer_id, int subject_id,
                              std::uint64_t subject_public_key, double t) {
    Certificate cert;
    cert.subject_id = subject_id;
    cert.subject_public_key = subject_public_key;
    cert.issuer_id = issuer_id;
    cert.timestamp = t;
    cert.signature = keys.sign(issuer_id, cert.body_hash());
    return cert;
}

bool verify_certificate(const KeyStore& keys, const Certificate& cert, double now) {
    if (cert.timestamp > now) return false;
    return keys.verify(cert.issuer_id, cert.body_hash(), cert.signature);
}

std::uint64_t IntroducerReply::body_hash() const {
    return mix_keys({static_cast<std::uint64_t>(introducer_id),
                     static_cast<std::uint64_t>(target_id), target_public_key,
                     static_cast<std::uint64_t>(trust_value * 1e9)});
}

double TrustLedger::trust(int observer, int subject) const {
    auto it = trust_.find({observer, subject});
    return it == trust_.end() ? default_trust : it->second;
}

void TrustLedger::set_trust(int observer, int subject, double v) {
    trust_[{observer, subject}] = clamp01(v);
}

double TrustLedger::behaviour(int subject) const {
    auto it = behaviour_.find(subject);
    return it == behaviour_.end() ? 0.0 : it->second;
}

double TrustLedger::update_behaviour(int subject, double observation, double alpha) {
    require01(observation, "behaviour observation");
    double prev = behaviour(subject);
    double next = (1.0 - alpha) * prev + alpha * observation;
    behaviour_[subject] = next;
    return next;
}

double chain_trust(double v_observer_introducer, double v_introducer_target) {
    require01(v_observer_introducer, "observer-introducer trust");
    require01(v_introducer_target, "introducer-target trust");
    return 1.0 - std::pow(1.0 - v_introducer_target, v_observer_introducer);
}

AggregateMode aggregate_mode_from(const std::string& name) {
    if (name == "mean") return AggregateMode::Mean;
    if (name == "min") return AggregateMode::Min;
    if (name == "max") return AggregateMode::Max;
    throw std::invalid_argument("unknown trust aggregation mode: " + name);
}

double aggregate_paths(std::span<const double> chained_values, AggregateMode mode) {
    if (chained_values.empty()) throw std::invalid_argument("aggregate_paths: empty input");
    switch (mode) {
        case AggregateMode::Min: return *std::min_element(chained_values.begin(), chained_values.end());
        case AggregateMode::Max: return *std::max_element(chained_values.begin(), chained_values.end());
        case AggregateMode::Mean: {
            double sum = 0.0;
            for (double v : chained_values) sum += v;
            return sum / static_cast<double>(chained_values.size());
        }
    }
    throw std::logic_error("aggregate_paths: bad mode");
}

IntroducerReply introduce(const NodeState& ra, int /*requester_id*/, int target_id,
                          const TrustLedger& ledger, const KeyStore& keys) {
    if (ra.role != Role::Ra) throw std::invalid_argument("introduce: node is not an RA");
    auto target_keys = keys.find(target_id);
    if (!target_keys) throw std::invalid_argument("introduce: unknown target");

    IntroducerReply reply;
    reply.introducer_id = ra.id;
    reply.target_id = target_id;
    reply.target_public_key = target_keys->public_key;
    reply.trust_value = ledger.trust(ra.id, target_id);
    reply.signature = keys.sign(ra.id, reply.body_hash());
    return reply;
}

Verdict detect_malicious(const NodeState& requester, int target_id,
                         std::span<const IntroducerReply> replies, std::span<const Vote> votes,
                         double trust_threshold, const TrustLedger& ledger, const KeyStore& keys,
                         AggregateMode mode) {
    require01(trust_threshold, "trust threshold");

    std::vector<const IntroducerReply*> valid;
    for (const auto& r : replies) {
        if (r.target_id == target_id && keys.verify(r.introducer_id, r.body_hash(), r.signature)) {
            valid.push_back(&r);
        }
    }
    if (valid.empty()) throw std::runtime_error("detect_malicious: no verifiable introducer reply");

    std::vector<double> chained;
    chained.reserve(valid.size());
    for (const auto* r : valid) {
        chained.push_back(chain_trust(ledger.trust(requester.id, r->introducer_id), r->trust_value));
    }
    double agg = aggregate_paths(chained, mode);

    if (agg < trust_threshold) {
        return {VerdictKind::Malicious, "low trust", agg, 0, static_cast<int>(votes.size())};
    }

    // Majority public key among the verified replies is the key under vote;
    // ties break toward the smaller key so reply order never matters.
    std::map<std::uint64_t, int> key_counts;
    for (const auto* r : valid) key_counts[r->target_public_key] += 1;
    std::uint64_t reference_key = 0;
    int best_count = -1;
    for (const auto& [key, count] : key_counts) {
        if (count > best_count) {
            reference_key = key;
            best_count = count;
        }
    }

    int votes_for = 0;
    for (const auto& v : votes) {
        if (v.claimed_public_key == reference_key) votes_for += 1;
    }
    int total = static_cast<int>(votes.size());
    if (total == 0) throw std::runtime_error("detect_malicious: no votes collected");
    if (2 * votes_for > total) {
        return {VerdictKind::Honest, "", agg, votes_for, total};
    }
    return {VerdictKind::Malicious, "key dispute", agg, votes_for, total};
}

GateDecision ra_gate(const NodeState& ra, const Certificate& cert, double trust,
                     double behaviour, double trust_threshold, const KeyStore& keys, double now) {
    if (ra.role != Role::Ra) throw std::invalid_argument("ra_gate: node is not an RA");
    if (!verify_certificate(keys, cert, now)) return {false, "bad certificate"};
    if (trust < trust_threshold) return {false, "low trust"};
    if (behaviour > 0.8) return {false, "misbehaviour"};
    return {true, ""};
}

std::string detection_csv_header() {
    return "t,requester,target,aggregate_trust,votes_for,votes_total,verdict,reason";
}

std::string to_csv(const DetectionRow& row) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%.3f,%d,%d,%.6f,%d,%d,%s,%s", row.t, row.requester,
                  row.target, row.aggregate_trust, row.votes_for, row.votes_total,
                  row.verdict == VerdictKind::Honest ? "honest" : "malicious",
                  row.reason.c_str());
    return buf;
}

}  // namespace manet
