#pragma once

// Shared generators and comparison utilities for the test suites.

#include <algorithm>
#include <cstdlib>
#include <string>
#include <vector>

#include "lws/lws.hpp"

namespace lws::testing {

inline HPSequence random_sequence(Rng& rng, int n) {
    std::string s;
    for (int i = 0; i < n; ++i) s.push_back(rng.uniform_int(0, 1) ? 'H' : 'P');
    // an all-P draw is legal but dull; force at least one H
    if (s.find('H') == std::string::npos) s[static_cast<std::size_t>(rng.uniform_int(0, n - 1))] = 'H';
    return HPSequence::parse(s);
}

inline SegmentSelection random_selection(Rng& rng, const Conformation& conf, int max_size) {
    const int n = conf.size();
    SegmentSelection sel;
    if (rng.uniform_int(0, 1) == 0) {
        sel.kind = SegmentSelection::Kind::Single;
        const int size = std::min(rng.uniform_int(1, max_size), n - 1);
        const int start = rng.uniform_int(0, n - size);
        for (int i = start; i < start + size; ++i) sel.indices.push_back(i);
    } else {
        sel.kind = SegmentSelection::Kind::Multiple;
        const int want = std::min(rng.uniform_int(1, max_size), std::max(1, n / 4));
        for (int tries = 0; tries < 200 && static_cast<int>(sel.indices.size()) < want; ++tries) {
            const int i = rng.uniform_int(0, n - 1);
            bool clash = false;
            for (int j : sel.indices)
                if (std::abs(i - j) < 2) clash = true;
            if (!clash) sel.indices.push_back(i);
        }
        std::sort(sel.indices.begin(), sel.indices.end());
    }
    return sel;
}

inline std::vector<Move> sorted_moves(std::vector<Move> moves) {
    std::sort(moves.begin(), moves.end());
    return moves;
}

// Independent O(n^2) evaluation of the contact energy, kept separate from the
// library implementation on purpose.
inline long long pair_scan_energy(const std::vector<Vec3>& pos, const HPSequence& seq) {
    long long e = 0;
    const int n = static_cast<int>(pos.size());
    for (int i = 0; i < n; ++i) {
        if (!seq.is_h(i)) continue;
        for (int j = i + 2; j < n; ++j) {
            if (!seq.is_h(j)) continue;
            const Vec3 d = pos[static_cast<std::size_t>(j)] - pos[static_cast<std::size_t>(i)];
            if (d.x * d.x + d.y * d.y + d.z * d.z == 2) --e;
        }
    }
    return e;
}

// Applies one random legal segment move; returns false if the drawn
// neighborhood was empty.
inline bool random_executed_move(Rng& rng, Conformation& conf, const HPSequence& seq,
                                 HeuristicState& state, int max_size) {
    const SegmentSelection sel = random_selection(rng, conf, max_size);
    const std::vector<Move> moves = generate_moves(conf, sel);
    if (moves.empty()) return false;
    const Move& m = moves[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(moves.size()) - 1))];
    execute(state, conf, seq, m);
    return true;
}

}  // namespace lws::testing
