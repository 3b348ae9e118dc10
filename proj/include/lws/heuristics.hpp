#pragma once

// The three guiding heuristics and their exact integer accumulators.
//
//   H1  contact energy (the objective itself)
//   H2  sum of squared distances over non-consecutive H-H pairs
//   H3  spread of H monomers around their centroid
//
// H3 is kept scaled by n_H so everything stays in integer arithmetic:
// n_H * sum ||p - c||^2 == n_H * sum ||p||^2 - ||sum p||^2 exactly, and
// scaling by a positive constant never changes which move ranks best.
// simulate() prices a move without touching state; execute() commits it and
// leaves every accumulator equal to its from-scratch recomputation.

#include <cstdint>

#include "lws/hp.hpp"
#include "lws/lattice.hpp"

namespace lws {

enum class HeuristicKind : std::uint8_t { H1Contacts = 0, H2AllPairDist = 1, H3CentroidDist = 2 };

inline constexpr int kNumHeuristics = 3;

struct Sum3 {
    long long x = 0, y = 0, z = 0;
    void add(Vec3 p) { x += p.x; y += p.y; z += p.z; }
    void sub(Vec3 p) { x -= p.x; y -= p.y; z -= p.z; }
    long long squared_norm() const { return x * x + y * y + z * z; }
    friend Sum3 operator+(Sum3 a, Sum3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend bool operator==(const Sum3&, const Sum3&) = default;
};

struct HeuristicState {
    long long contact_energy = 0;   // value of the energy function, <= 0
    long long allpair_sum = 0;      // sum of d^2 over ALL unordered H-H pairs
    long long consecutive_sum = 0;  // sum of d^2 over H-H pairs with j == i+1
    Sum3 h_coord_sum;               // sum of H positions (centroid numerator)
    long long h_norm_sum = 0;       // sum of ||p||^2 over H monomers
    int n_h = 0;

    friend bool operator==(const HeuristicState&, const HeuristicState&) = default;
};

inline long long heuristic_value(const HeuristicState& s, HeuristicKind kind) {
    switch (kind) {
        case HeuristicKind::H1Contacts:
            return s.contact_energy;
        case HeuristicKind::H2AllPairDist:
            return s.allpair_sum - s.consecutive_sum;
        case HeuristicKind::H3CentroidDist:
            return static_cast<long long>(s.n_h) * s.h_norm_sum - s.h_coord_sum.squared_norm();
    }
    return 0;
}

struct HeuristicDeltas {
    long long h1 = 0;
    long long h2 = 0;
    long long h3_scaled = 0;

    long long of(HeuristicKind kind) const {
        switch (kind) {
            case HeuristicKind::H1Contacts: return h1;
            case HeuristicKind::H2AllPairDist: return h2;
            case HeuristicKind::H3CentroidDist: return h3_scaled;
        }
        return 0;
    }
};

// All accumulators from scratch by direct summation.
inline HeuristicState recompute(const Conformation& conf, const HPSequence& seq) {
    HeuristicState s;
    s.n_h = seq.h_count();
    const std::vector<int>& hs = seq.h_indices();
    for (std::size_t a = 0; a < hs.size(); ++a) {
        const Vec3 pa = conf.position(hs[a]);
        s.h_coord_sum.add(pa);
        s.h_norm_sum += squared_norm(pa);
        for (std::size_t b = a + 1; b < hs.size(); ++b) {
            const int i = hs[a], j = hs[b];
            const long long d2 = squared_distance(pa, conf.position(j));
            s.allpair_sum += d2;
            if (j == i + 1) s.consecutive_sum += d2;
            if (i + 1 < j && d2 == 2) s.contact_energy -= 1;
        }
    }
    return s;
}

namespace detail {

inline bool move_contains(const Move& move, int index) {
    for (const Move::Change& c : move.changes)
        if (c.index == index) return true;
    return false;
}

// Non-consecutive H-H contacts between moved monomers and the fixed rest,
// counted via the 12-neighborhood of each moved H monomer, plus contacts
// among the moved monomers themselves.
template <typename PosOf>
long long moved_contacts(const Conformation& conf, const HPSequence& seq, const Move& move,
                         PosOf&& pos_of) {
    long long contacts = 0;
    for (std::size_t k = 0; k < move.changes.size(); ++k) {
        const int i = move.changes[k].index;
        if (!seq.is_h(i)) continue;
        const Vec3 pi = pos_of(k);
        for (Vec3 v : kBasisVectors) {
            const int j = conf.occupant(pi + v);
            if (j < 0 || move_contains(move, j)) continue;
            if (seq.is_h(j) && (j > i + 1 || j < i - 1)) ++contacts;
        }
        for (std::size_t l = k + 1; l < move.changes.size(); ++l) {
            const int j = move.changes[l].index;
            if (!seq.is_h(j)) continue;
            if (j > i + 1 && is_neighbor(pi, pos_of(l))) ++contacts;
        }
    }
    return contacts;
}

struct MoveEffect {
    HeuristicDeltas deltas;
    Sum3 d_coord;
    long long d_norm = 0;
};

inline MoveEffect analyze_move(const HeuristicState& state, const Conformation& conf,
                               const HPSequence& seq, const Move& move) {
    MoveEffect e;
    bool touches_h = false;
    for (const Move::Change& c : move.changes)
        if (seq.is_h(c.index)) {
            touches_h = true;
            break;
        }
    if (!touches_h) return e;  // P-only moves leave every accumulator unchanged

    const long long old_contacts = moved_contacts(
        conf, seq, move, [&](std::size_t k) { return conf.position(move.changes[k].index); });
    const long long new_contacts =
        moved_contacts(conf, seq, move, [&](std::size_t k) { return move.changes[k].to; });
    e.deltas.h1 = old_contacts - new_contacts;  // energy = -contacts

    for (const Move::Change& c : move.changes) {
        if (!seq.is_h(c.index)) continue;
        const Vec3 from = conf.position(c.index);
        e.d_coord.sub(from);
        e.d_coord.add(c.to);
        e.d_norm += squared_norm(c.to) - squared_norm(from);
    }

    const long long n_h = state.n_h;
    const long long old_scaled = n_h * state.h_norm_sum - state.h_coord_sum.squared_norm();
    const long long new_scaled =
        n_h * (state.h_norm_sum + e.d_norm) - (state.h_coord_sum + e.d_coord).squared_norm();
    e.deltas.h3_scaled = new_scaled - old_scaled;
    // same algebraic delta; the consecutive term is invariant under feasible moves
    e.deltas.h2 = e.deltas.h3_scaled;
    return e;
}

}  // namespace detail

// Exact deltas of all three objectives for a feasible move, without mutating
// anything. Only pairs involving moved monomers are touched.
inline HeuristicDeltas simulate(const HeuristicState& state, const Conformation& conf,
                                const HPSequence& seq, const Move& move) {
    return detail::analyze_move(state, conf, seq, move).deltas;
}

// Commits a move: positions, occupancy, and all accumulators. Throws
// InfeasibleMoveError if the move collides or breaks the chain (a generator
// bug); the chain check runs before any mutation.
inline HeuristicDeltas execute(HeuristicState& state, Conformation& conf, const HPSequence& seq,
                               const Move& move) {
    const auto new_pos = [&](int i) {
        for (const Move::Change& c : move.changes)
            if (c.index == i) return c.to;
        return conf.position(i);
    };
    for (const Move::Change& c : move.changes) {
        if (c.index > 0 && !is_neighbor(new_pos(c.index - 1), c.to))
            throw InfeasibleMoveError("move breaks chain at " + std::to_string(c.index - 1));
        if (c.index + 1 < conf.size() && !is_neighbor(c.to, new_pos(c.index + 1)))
            throw InfeasibleMoveError("move breaks chain at " + std::to_string(c.index));
    }

    const detail::MoveEffect e = detail::analyze_move(state, conf, seq, move);
    conf.apply(move);
    state.contact_energy += e.deltas.h1;
    state.allpair_sum += e.deltas.h2;
    state.h_coord_sum = state.h_coord_sum + e.d_coord;
    state.h_norm_sum += e.d_norm;
    return e.deltas;
}

}  // namespace lws
