#pragma once

// Integer geometry of the face-centered-cubic lattice.
//
// Lattice points are integer 3-vectors with even coordinate sum; one step
// along any of the 12 basis vectors has squared Euclidean length 2.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <vector>

namespace lws {

struct Vec3 {
    int x = 0;
    int y = 0;
    int z = 0;

    friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    friend constexpr bool operator==(Vec3 a, Vec3 b) = default;
    friend constexpr auto operator<=>(Vec3 a, Vec3 b) = default;
};

using LatticePoint = Vec3;

// The 12 FCC basis vectors, in fixed order v1..v12. The set is closed under
// negation; enumeration order matters for reproducible move generation.
inline constexpr std::array<Vec3, 12> kBasisVectors = {{
    {1, 1, 0},  {-1, -1, 0}, {-1, 1, 0},  {1, -1, 0},
    {0, 1, 1},  {0, 1, -1},  {0, -1, -1}, {0, -1, 1},
    {1, 0, 1},  {-1, 0, 1},  {-1, 0, -1}, {1, 0, -1},
}};

inline constexpr int kNumDirections = 12;

// Direction is an index into kBasisVectors.
using Direction = int;

constexpr const std::array<Vec3, 12>& basis_vectors() { return kBasisVectors; }

constexpr Vec3 direction_vector(Direction d) { return kBasisVectors[static_cast<std::size_t>(d)]; }

constexpr long long squared_norm(Vec3 v) {
    return static_cast<long long>(v.x) * v.x + static_cast<long long>(v.y) * v.y +
           static_cast<long long>(v.z) * v.z;
}

constexpr long long squared_distance(Vec3 p, Vec3 q) { return squared_norm(q - p); }

constexpr bool even_coordinate_sum(Vec3 v) { return ((v.x + v.y + v.z) & 1) == 0; }

// Two points are in contact iff they differ by a basis vector. On this
// lattice that is equivalent to squared distance 2 (the difference is then a
// signed permutation of (1,1,0), all of which are basis vectors).
constexpr bool is_neighbor(Vec3 p, Vec3 q) { return squared_distance(p, q) == 2; }

// All points adjacent to both p and q, sorted lexicographically by (x,y,z).
// Sizes: 12 when p == q, 4 when p and q are neighbors, and 0/1/2/4 otherwise.
inline std::vector<Vec3> common_neighbors(Vec3 p, Vec3 q) {
    std::vector<Vec3> out;
    out.reserve(12);
    for (Vec3 v : kBasisVectors) {
        Vec3 r = p + v;
        if (is_neighbor(r, q)) out.push_back(r);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Lower bound on the number of basis steps needed to cover displacement v:
// each step changes any single coordinate by at most 1 and the L1 norm by at
// most 2.
constexpr int step_distance_lower_bound(Vec3 v) {
    const int ax = v.x < 0 ? -v.x : v.x;
    const int ay = v.y < 0 ? -v.y : v.y;
    const int az = v.z < 0 ? -v.z : v.z;
    const int linf = ax > ay ? (ax > az ? ax : az) : (ay > az ? ay : az);
    const int l1 = ax + ay + az;
    return linf > (l1 + 1) / 2 ? linf : (l1 + 1) / 2;
}

// Packs a point into a single 64-bit key for hashing. Coordinates are
// offset-encoded with 21 bits each; walks never get anywhere near the bound.
constexpr std::uint64_t pack_point(Vec3 p) {
    constexpr std::uint64_t bias = 1u << 20;
    return ((static_cast<std::uint64_t>(p.x) + bias) << 42) |
           ((static_cast<std::uint64_t>(p.y) + bias) << 21) |
           (static_cast<std::uint64_t>(p.z) + bias);
}

}  // namespace lws
