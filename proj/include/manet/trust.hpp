#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "manet/node.hpp"
#include "manet/rng.hpp"

namespace manet {

// Deterministic simulated signature scheme. Keys are derived from the run
// seed; verify recomputes the tag with the registered signing key, so a tag
// produced without that key never verifies. A stand-in for a real asymmetric
// scheme: the simulation only needs sign/verify/forge semantics.
class KeyStore {
public:
    explicit KeyStore(std::uint64_t seed = 0) : seed_(seed) {}

    KeyPair register_node(int id);
    std::optional<KeyPair> find(int id) const;
    bool known(int id) const { return keys_.count(id) > 0; }

    std::uint64_t sign(int signer_id, std::uint64_t message_hash) const;
    bool verify(int signer_id, std::uint64_t message_hash, std::uint64_t signature) const;

private:
    std::uint64_t seed_;
    std::map<int, KeyPair> keys_;
};

struct Certificate {
    int subject_id = -1;
    std::uint64_t subject_public_key = 0;
    int issuer_id = -1;  // an RA
    double timestamp = 0.0;
    std::uint64_t signature = 0;

    std::uint64_t body_hash() const;
};

Certificate issue_certificate(const KeyStore& keys, int issuer_id, int subject_id,
                              std::uint64_t subject_public_key, double t);

// Checks the issuer signature and that the stamp is not from the future.
bool verify_certificate(const KeyStore& keys, const Certificate& cert, double now);

struct IntroducerReply {
    int introducer_id = -1;
    int target_id = -1;
    std::uint64_t target_public_key = 0;
    double trust_value = 0.0;  // introducer -> target
    std::uint64_t signature = 0;

    std::uint64_t body_hash() const;
};

// Directed trust values plus per-node behaviour scores. Single writer: the
// scenario event loop.
class TrustLedger {
public:
    double trust(int observer, int subject) const;        // default when unset
    void set_trust(int observer, int subject, double v);  // clamped to [0,1]

    double behaviour(int subject) const;
    // EWMA update with smoothing alpha; returns the new score. Throws on an
    // observation outside [0, 1].
    double update_behaviour(int subject, double observation, double alpha = 0.3);
    bool misbehaving(int subject) const { return behaviour(subject) > 0.8; }

    void flag_malicious(int id) { flagged_.insert(id); }
    bool is_flagged(int id) const { return flagged_.count(id) > 0; }
    const std::set<int>& flagged() const { return flagged_; }

    double default_trust = 0.5;

private:
    std::map<std::pair<int, int>, double> trust_;
    std::map<int, double> behaviour_;
    std::set<int> flagged_;
};

// Trust chaining along observer -> introducer -> target:
// 1 - (1 - v_introducer_target) ^ v_observer_introducer. Throws outside [0,1].
double chain_trust(double v_observer_introducer, double v_introducer_target);

enum class AggregateMode { Mean, Min, Max };

AggregateMode aggregate_mode_from(const std::string& name);

// Combine chained trust values from several introducer paths.
double aggregate_paths(std::span<const double> chained_values,
                       AggregateMode mode = AggregateMode::Mean);

// An RA vouches for a target: its registered public key plus the RA's trust
// value for it, signed. Throws when ra is not an RA or the target key is
// unknown.
IntroducerReply introduce(const NodeState& ra, int requester_id, int target_id,
                          const TrustLedger& ledger, const KeyStore& keys);

struct Vote {
    int voter_id = -1;
    std::uint64_t claimed_public_key = 0;
};

enum class VerdictKind { Honest, Malicious };

struct Verdict {
    VerdictKind kind = VerdictKind::Honest;
    std::string reason;  // "", "low trust", "key dispute"
    double aggregate_trust = 0.0;
    int votes_for = 0;
    int votes_total = 0;
};

// Signature-gated detection: verify replies, chain and aggregate trust, apply
// the threshold, then require a strict majority of votes to agree on the
// introduced public key. Throws when no reply survives verification.
Verdict detect_malicious(const NodeState& requester, int target_id,
                         std::span<const IntroducerReply> replies, std::span<const Vote> votes,
                         double trust_threshold, const TrustLedger& ledger, const KeyStore& keys,
                         AggregateMode mode = AggregateMode::Mean);

struct GateDecision {
    bool forward = false;       // forward the request to the CA
    std::string reason;         // populated on Reject
};

// DDMZ filter in front of the CA: certificate must verify, trust must meet
// the threshold, behaviour must not exceed the misbehaviour bound. A Reject
// is broadcast as a malicious alert by the caller.
GateDecision ra_gate(const NodeState& ra, const Certificate& cert, double trust,
                     double behaviour, double trust_threshold, const KeyStore& keys, double now);

// CSV row for the detection log.
struct DetectionRow {
    double t = 0.0;
    int requester = -1;
    int target = -1;
    double aggregate_trust = 0.0;
    int votes_for = 0;
    int votes_total = 0;
    VerdictKind verdict = VerdictKind::Honest;
    std::string reason;
};

std::string detection_csv_header();
std::string to_csv(const DetectionRow& row);

}  // namespace manet
