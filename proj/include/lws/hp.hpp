#pragma once

// HP sequences, conformations as self-avoiding walks on the FCC lattice,
// constraint validation, and the contact energy function.

#include <array>
#include <cctype>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lws/errors.hpp"
#include "lws/lattice.hpp"

namespace lws {

enum class Monomer : std::uint8_t { H, P };

class HPSequence {
public:
    HPSequence() = default;

    // Accepts 'H'/'P' case-insensitively, ignores whitespace.
    static HPSequence parse(std::string_view text) {
        std::vector<Monomer> monomers;
        monomers.reserve(text.size());
        int position = 0;
        for (char c : text) {
            if (std::isspace(static_cast<unsigned char>(c))) continue;
            ++position;
            const char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            if (u == 'H')
                monomers.push_back(Monomer::H);
            else if (u == 'P')
                monomers.push_back(Monomer::P);
            else
                throw InvalidCharacterError(position, c);
        }
        if (monomers.empty()) throw EmptySequenceError();
        return HPSequence(std::move(monomers));
    }

    explicit HPSequence(std::vector<Monomer> monomers) : monomers_(std::move(monomers)) {
        for (int i = 0; i < size(); ++i)
            if (is_h(i)) h_indices_.push_back(i);
    }

    int size() const { return static_cast<int>(monomers_.size()); }
    int h_count() const { return static_cast<int>(h_indices_.size()); }
    Monomer operator[](int i) const { return monomers_[static_cast<std::size_t>(i)]; }
    bool is_h(int i) const { return monomers_[static_cast<std::size_t>(i)] == Monomer::H; }
    const std::vector<int>& h_indices() const { return h_indices_; }

    std::string to_string() const {
        std::string s;
        s.reserve(monomers_.size());
        for (Monomer m : monomers_) s.push_back(m == Monomer::H ? 'H' : 'P');
        return s;
    }

private:
    std::vector<Monomer> monomers_;
    std::vector<int> h_indices_;
};

// Open-addressing hash table from packed lattice point to monomer index.
// Collision checks dominate move generation, so this sidesteps the node
// allocations of std::unordered_map.
class OccupancyIndex {
public:
    OccupancyIndex() { rehash(64); }

    void reserve(std::size_t n) {
        std::size_t want = 64;
        while (want < n * 4) want <<= 1;
        if (want > slots_.size()) rehash(want);
    }

    // Returns the occupant index, or -1 if the point is free.
    int find(Vec3 p) const {
        const std::uint64_t key = pack_point(p);
        std::size_t i = probe_start(key);
        while (true) {
            const Slot& s = slots_[i];
            if (s.state == kEmpty) return -1;
            if (s.state == kFull && s.key == key) return s.value;
            i = (i + 1) & mask_;
        }
    }

    bool contains(Vec3 p) const { return find(p) >= 0; }

    // Inserts; returns false if the key is already present (value unchanged).
    bool insert(Vec3 p, int value) {
        if ((filled_ + deleted_ + 1) * 2 > slots_.size()) rehash(slots_.size() * 2);
        const std::uint64_t key = pack_point(p);
        std::size_t i = probe_start(key);
        std::size_t tomb = SIZE_MAX;
        while (true) {
            Slot& s = slots_[i];
            if (s.state == kEmpty) {
                Slot& dst = (tomb == SIZE_MAX) ? s : slots_[tomb];
                if (tomb != SIZE_MAX) --deleted_;
                dst = Slot{key, value, kFull};
                ++filled_;
                return true;
            }
            if (s.state == kDeleted && tomb == SIZE_MAX) tomb = i;
            if (s.state == kFull && s.key == key) return false;
            i = (i + 1) & mask_;
        }
    }

    void insert_or_assign(Vec3 p, int value) {
        if (!insert(p, value)) {
            const std::uint64_t key = pack_point(p);
            std::size_t i = probe_start(key);
            while (!(slots_[i].state == kFull && slots_[i].key == key)) i = (i + 1) & mask_;
            slots_[i].value = value;
        }
    }

    bool erase(Vec3 p) {
        const std::uint64_t key = pack_point(p);
        std::size_t i = probe_start(key);
        while (true) {
            Slot& s = slots_[i];
            if (s.state == kEmpty) return false;
            if (s.state == kFull && s.key == key) {
                s.state = kDeleted;
                --filled_;
                ++deleted_;
                return true;
            }
            i = (i + 1) & mask_;
        }
    }

    std::size_t size() const { return filled_; }

    void clear() {
        for (Slot& s : slots_) s.state = kEmpty;
        filled_ = deleted_ = 0;
    }

private:
    static constexpr std::uint8_t kEmpty = 0, kFull = 1, kDeleted = 2;
    struct Slot {
        std::uint64_t key = 0;
        int value = 0;
        std::uint8_t state = kEmpty;
    };

    static std::uint64_t mix(std::uint64_t x) {
        x ^= x >> 33;
        x *= 0xff51afd7ed558ccdULL;
        x ^= x >> 33;
        x *= 0xc4ceb9fe1a85ec53ULL;
        x ^= x >> 33;
        return x;
    }

    std::size_t probe_start(std::uint64_t key) const { return mix(key) & mask_; }

    void rehash(std::size_t capacity) {
        std::vector<Slot> old = std::move(slots_);
        slots_.assign(capacity, Slot{});
        mask_ = capacity - 1;
        filled_ = deleted_ = 0;
        for (const Slot& s : old) {
            if (s.state != kFull) continue;
            std::size_t i = mix(s.key) & mask_;
            while (slots_[i].state == kFull) i = (i + 1) & mask_;
            slots_[i] = s;
            ++filled_;
        }
    }

    std::vector<Slot> slots_;
    std::size_t mask_ = 0;
    std::size_t filled_ = 0;
    std::size_t deleted_ = 0;
};

// A simultaneous repositioning of one or more monomers. Only monomers that
// actually change position are listed; indices strictly increasing.
struct Move {
    struct Change {
        int index;
        Vec3 to;
        friend bool operator==(const Change&, const Change&) = default;
        friend auto operator<=>(const Change&, const Change&) = default;
    };
    std::vector<Change> changes;

    bool empty() const { return changes.empty(); }
    friend bool operator==(const Move&, const Move&) = default;
    friend auto operator<=>(const Move&, const Move&) = default;
};

// An embedding of the chain as lattice points plus an occupancy index for
// O(1) collision lookups. The constructor accepts arbitrary positions
// (validate() reports violations as data); apply() maintains feasibility.
class Conformation {
public:
    Conformation() = default;

    explicit Conformation(std::vector<Vec3> positions) : positions_(std::move(positions)) {
        occ_.reserve(positions_.size());
        for (int i = 0; i < size(); ++i) occ_.insert_or_assign(positions_[static_cast<std::size_t>(i)], i);
    }

    int size() const { return static_cast<int>(positions_.size()); }
    const Vec3& position(int i) const { return positions_[static_cast<std::size_t>(i)]; }
    const std::vector<Vec3>& positions() const { return positions_; }

    // Occupant monomer index at p, or -1 if free.
    int occupant(Vec3 p) const { return occ_.find(p); }
    bool occupied(Vec3 p) const { return occ_.contains(p); }

    // Applies all changes simultaneously: old points are vacated first so
    // that moved monomers may swap into each other's former positions.
    // Throws InfeasibleMoveError on a collision with an unmoved monomer.
    void apply(const Move& move) {
        for (const Move::Change& c : move.changes)
            occ_.erase(positions_[static_cast<std::size_t>(c.index)]);
        for (std::size_t k = 0; k < move.changes.size(); ++k) {
            const Move::Change& c = move.changes[k];
            if (!occ_.insert(c.to, c.index)) {
                // roll back so the conformation stays usable
                for (std::size_t u = 0; u < k; ++u) occ_.erase(move.changes[u].to);
                for (const Move::Change& r : move.changes)
                    occ_.insert(positions_[static_cast<std::size_t>(r.index)], r.index);
                throw InfeasibleMoveError("move collides at monomer " + std::to_string(c.index));
            }
        }
        for (const Move::Change& c : move.changes) positions_[static_cast<std::size_t>(c.index)] = c.to;
    }

private:
    std::vector<Vec3> positions_;
    OccupancyIndex occ_;
};

struct Violation {
    enum class Kind { Chain, SelfAvoid, Parity };
    Kind kind;
    int i;       // 0-based monomer index
    int j = -1;  // partner index for Chain/SelfAvoid
    friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

// Checks the chain constraint, the self-avoiding constraint, and lattice
// parity relative to the first monomer. Violations are data, not errors.
inline ValidationReport validate(std::span<const Vec3> positions) {
    ValidationReport report;
    const int n = static_cast<int>(positions.size());
    for (int i = 0; i + 1 < n; ++i)
        if (!is_neighbor(positions[static_cast<std::size_t>(i)], positions[static_cast<std::size_t>(i) + 1]))
            report.violations.push_back({Violation::Kind::Chain, i, i + 1});
    OccupancyIndex seen;
    seen.reserve(positions.size());
    for (int i = 0; i < n; ++i) {
        const Vec3 p = positions[static_cast<std::size_t>(i)];
        if (int j = seen.find(p); j >= 0)
            report.violations.push_back({Violation::Kind::SelfAvoid, j, i});
        else
            seen.insert(p, i);
        if (!even_coordinate_sum(p - positions[0]))
            report.violations.push_back({Violation::Kind::Parity, i});
    }
    return report;
}

inline ValidationReport validate(const Conformation& conf) { return validate(conf.positions()); }

// HP contact energy: -1 per non-consecutive H-H lattice-neighbor pair.
// Plain O(n^2) pair scan; the search maintains this value incrementally and
// is checked against this routine.
inline int energy(const Conformation& conf, const HPSequence& seq) {
    if (conf.size() != seq.size())
        throw LengthMismatchError(static_cast<std::size_t>(conf.size()),
                                  static_cast<std::size_t>(seq.size()));
    int contacts = 0;
    const std::vector<int>& hs = seq.h_indices();
    for (std::size_t a = 0; a < hs.size(); ++a) {
        for (std::size_t b = a + 1; b < hs.size(); ++b) {
            const int i = hs[a], j = hs[b];
            if (i + 1 < j && is_neighbor(conf.position(i), conf.position(j))) ++contacts;
        }
    }
    return -contacts;
}

// Residue classification for converting amino-acid strings to HP sequences.
// The default marks {A,C,F,G,I,L,M,V,W,Y} hydrophobic; swap via data file.
class HydroTable {
public:
    static const HydroTable& standard() {
        static const HydroTable table = make_default();
        return table;
    }

    static HydroTable make_default() {
        HydroTable t;
        for (char c : std::string_view("ACFGILMVWY")) t.set(c, Monomer::H);
        for (char c : std::string_view("DEHKNPQRST")) t.set(c, Monomer::P);
        return t;
    }

    void set(char residue, Monomer m) {
        const int i = index(residue);
        if (i >= 0) classes_[static_cast<std::size_t>(i)] = m;
    }

    std::optional<Monomer> classify(char residue) const {
        const int i = index(residue);
        return i < 0 ? std::nullopt : classes_[static_cast<std::size_t>(i)];
    }

private:
    static int index(char c) {
        const char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        return (u >= 'A' && u <= 'Z') ? u - 'A' : -1;
    }

    std::array<std::optional<Monomer>, 26> classes_{};
};

inline HPSequence convert_aa_to_hp(std::string_view amino_acids,
                                   const HydroTable& table = HydroTable::standard()) {
    std::vector<Monomer> monomers;
    monomers.reserve(amino_acids.size());
    int position = 0;
    for (char c : amino_acids) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        ++position;
        const std::optional<Monomer> m = table.classify(c);
        if (!m) throw UnknownResidueError(position, c);
        monomers.push_back(*m);
    }
    if (monomers.empty()) throw EmptySequenceError();
    return HPSequence(std::move(monomers));
}

}  // namespace lws
