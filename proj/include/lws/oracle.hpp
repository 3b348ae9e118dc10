#pragma once

// Brute-force ground truth at small scale: exhaustive conformation
// enumeration for tiny chains, and an independent segment-neighborhood
// enumerator used to cross-check the move generator. Deliberately dumb;
// nothing here shares code with the incremental search path.

#include <algorithm>
#include <array>
#include <functional>
#include <stdexcept>
#include <vector>

#include "lws/errors.hpp"
#include "lws/hp.hpp"
#include "lws/lattice.hpp"
#include "lws/search.hpp"

namespace lws {

struct OracleResult {
    long long optimal_energy = 0;
    long long optimizer_count = 0;
    long long enumerated = 0;  // feasible walks examined
};

inline constexpr int kOracleMaxLength = 9;

namespace detail {

// The 48 signed coordinate permutations (orientation group of the lattice),
// as functions on points.
inline std::vector<std::array<int, 9>> lattice_symmetries() {
    std::vector<std::array<int, 9>> mats;
    int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (auto& p : perm) {
        for (int signs = 0; signs < 8; ++signs) {
            std::array<int, 9> m{};
            for (int row = 0; row < 3; ++row) {
                const int s = (signs >> row) & 1 ? -1 : 1;
                m[static_cast<std::size_t>(row * 3 + p[row])] = s;
            }
            mats.push_back(m);
        }
    }
    return mats;
}

inline Vec3 apply_symmetry(const std::array<int, 9>& m, Vec3 p) {
    return {m[0] * p.x + m[1] * p.y + m[2] * p.z, m[3] * p.x + m[4] * p.y + m[5] * p.z,
            m[6] * p.x + m[7] * p.y + m[8] * p.z};
}

inline int direction_index(Vec3 v) {
    for (int d = 0; d < kNumDirections; ++d)
        if (kBasisVectors[static_cast<std::size_t>(d)] == v) return d;
    return -1;
}

// Direction permutations induced by the symmetries that fix the first step
// vector. Walks are kept only if their direction string is lexicographically
// minimal among its images under these, which quotients the residual
// orientation freedom left after pinning the first step.
inline std::vector<std::array<int, 12>> first_step_stabilizer() {
    std::vector<std::array<int, 12>> perms;
    for (const auto& m : lattice_symmetries()) {
        if (apply_symmetry(m, kBasisVectors[0]) != kBasisVectors[0]) continue;
        std::array<int, 12> perm{};
        bool identity = true;
        for (int d = 0; d < kNumDirections; ++d) {
            perm[static_cast<std::size_t>(d)] =
                direction_index(apply_symmetry(m, kBasisVectors[static_cast<std::size_t>(d)]));
            if (perm[static_cast<std::size_t>(d)] != d) identity = false;
        }
        if (!identity) perms.push_back(perm);
    }
    return perms;
}

}  // namespace detail

// Enumerates every self-avoiding walk of the sequence's length starting at
// the origin with first step fixed to the first basis vector (the energy is
// invariant under translation and orientation) and returns the exact minimum
// of the contact energy. symmetry_reduction additionally keeps one canonical
// representative per residual orientation class.
inline OracleResult enumerate_optimal(const HPSequence& seq, bool symmetry_reduction = true) {
    const int n = seq.size();
    if (n > kOracleMaxLength) throw TooLongError(n, kOracleMaxLength);

    OracleResult result;
    if (n == 1) {
        result.enumerated = 1;
        result.optimizer_count = 1;
        return result;
    }

    const std::vector<std::array<int, 12>> stabilizer =
        symmetry_reduction ? detail::first_step_stabilizer() : std::vector<std::array<int, 12>>{};

    std::vector<Vec3> pos(static_cast<std::size_t>(n));
    pos[0] = {0, 0, 0};
    pos[1] = kBasisVectors[0];
    OccupancyIndex occ;
    occ.reserve(static_cast<std::size_t>(n));
    occ.insert(pos[0], 0);
    occ.insert(pos[1], 1);

    long long best = 1;  // any walk scores <= 0
    long long best_count = 0;
    long long enumerated = 0;

    // status per stabilizer element: 0 = prefixes equal so far, 1 = strictly less
    std::vector<int> status(stabilizer.size(), 0);

    const auto contacts_added = [&](int k, Vec3 r) {
        if (!seq.is_h(k)) return 0;
        int c = 0;
        for (Vec3 v : kBasisVectors) {
            const int j = occ.find(r + v);
            if (j >= 0 && j <= k - 2 && seq.is_h(j)) ++c;
        }
        return c;
    };

    std::function<void(int, int)> dfs = [&](int k, int contacts) {
        if (k == n) {
            ++enumerated;
            const long long e = -contacts;
            if (e < best) {
                best = e;
                best_count = 1;
            } else if (e == best) {
                ++best_count;
            }
            return;
        }
        for (int d = 0; d < kNumDirections; ++d) {
            std::vector<int> saved;
            bool canonical = true;
            for (std::size_t g = 0; g < stabilizer.size(); ++g) {
                if (status[g] != 0) continue;
                const int img = stabilizer[g][static_cast<std::size_t>(d)];
                if (d > img) {
                    canonical = false;
                    break;
                }
                if (d < img) {
                    saved.push_back(static_cast<int>(g));
                    status[g] = 1;
                }
            }
            if (canonical) {
                const Vec3 r = pos[static_cast<std::size_t>(k - 1)] + kBasisVectors[static_cast<std::size_t>(d)];
                if (!occ.contains(r)) {
                    occ.insert(r, k);
                    pos[static_cast<std::size_t>(k)] = r;
                    dfs(k + 1, contacts + contacts_added(k, r));
                    occ.erase(r);
                }
            }
            for (int g : saved) status[static_cast<std::size_t>(g)] = 0;
        }
    };

    dfs(2, contacts_added(1, pos[1]));
    result.optimal_energy = best;
    result.optimizer_count = best_count;
    result.enumerated = enumerated;
    return result;
}

namespace detail {

// All lattice points reachable from center in at most radius steps.
inline std::vector<Vec3> lattice_ball(Vec3 center, int radius) {
    std::vector<Vec3> frontier{center};
    std::vector<Vec3> all{center};
    OccupancyIndex seen;
    seen.insert(center, 0);
    for (int depth = 0; depth < radius; ++depth) {
        std::vector<Vec3> next;
        for (Vec3 p : frontier) {
            for (Vec3 v : kBasisVectors) {
                const Vec3 q = p + v;
                if (seen.insert(q, 0)) {
                    next.push_back(q);
                    all.push_back(q);
                }
            }
        }
        frontier = std::move(next);
    }
    std::sort(all.begin(), all.end());
    return all;
}

inline std::vector<Vec3> intersect_sorted(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
    std::vector<Vec3> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace detail

// Independent check of the move generator: enumerates all placements of the
// selected monomers over candidate points within chain reach of their fixed
// anchors, keeps those that pass full validation, and returns the exact
// feasible move set (identity excluded).
inline std::vector<Move> neighborhood_oracle(const Conformation& conf,
                                             const SegmentSelection& sel) {
    if (sel.indices.size() > 4)
        throw std::invalid_argument("neighborhood oracle supports at most 4 selected positions");
    const int n = conf.size();
    if (sel.indices.empty() || static_cast<int>(sel.indices.size()) == n) return {};

    // candidate pool per selected monomer
    std::vector<std::vector<Vec3>> pools;
    std::size_t k = 0;
    while (k < sel.indices.size()) {
        std::size_t e = k;
        while (e + 1 < sel.indices.size() && sel.indices[e + 1] == sel.indices[e] + 1) ++e;
        const int a = sel.indices[k], b = sel.indices[e];
        for (int i = a; i <= b; ++i) {
            std::vector<Vec3> pool;
            if (a > 0) pool = detail::lattice_ball(conf.position(a - 1), i - a + 1);
            if (b < n - 1) {
                const std::vector<Vec3> from_after = detail::lattice_ball(conf.position(b + 1), b - i + 1);
                pool = (a > 0) ? detail::intersect_sorted(pool, from_after) : from_after;
            }
            pools.push_back(std::move(pool));
        }
        k = e + 1;
    }

    std::vector<Move> moves;
    std::vector<Vec3> candidate = conf.positions();
    const std::size_t total = sel.indices.size();

    std::function<void(std::size_t)> assign = [&](std::size_t slot) {
        if (slot == total) {
            if (!validate(candidate).ok()) return;
            Move m;
            for (int idx : sel.indices)
                if (candidate[static_cast<std::size_t>(idx)] != conf.position(idx))
                    m.changes.push_back({idx, candidate[static_cast<std::size_t>(idx)]});
            if (!m.changes.empty()) moves.push_back(std::move(m));
            return;
        }
        const int idx = sel.indices[slot];
        for (Vec3 p : pools[slot]) {
            candidate[static_cast<std::size_t>(idx)] = p;
            assign(slot + 1);
        }
        candidate[static_cast<std::size_t>(idx)] = conf.position(idx);
    };
    assign(0);
    return moves;
}

}  // namespace lws
