#pragma once

#include <cstdint>

#include "manet/geometry.hpp"

namespace manet {

enum class Role { Member, ClusterHead, Ra, Reference, Malicious };

inline const char* role_name(Role r) {
    switch (r) {
        case Role::Member: return "member";
        case Role::ClusterHead: return "ca";
        case Role::Ra: return "ra";
        case Role::Reference: return "reference";
        case Role::Malicious: return "malicious";
    }
    return "?";
}

struct KeyPair {
    std::uint64_t public_key = 0;
    std::uint64_t signing_key = 0;
};

struct NodeState {
    int id = -1;
    Position position;
    Position waypoint;
    double speed = 0.0;  // m/s

    Role role = Role::Member;
    int ra_sector = 0;  // 1..6 when role == Ra, else 0

    double residual_energy = 1.0;  // [0, 1]
    double trust = 1.0;            // [0, 1] baseline reputation
    double behaviour = 0.0;        // [0, 1] misbehaviour score

    KeyPair keys;
    int connectivity_degree = 0;
};

}  // namespace manet
