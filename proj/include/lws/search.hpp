#pragma once

// Large-segment local search over self-avoiding walks.
//
// Each iteration re-optimizes a small set of monomer positions exhaustively:
// either one contiguous segment or several scattered single positions. The
// neighborhood is enumerated with a mixed-radix direction counter that prunes
// the moment a partial placement collides. One of three heuristics guides the
// choice of move per iteration; a tabu list keeps recently moved monomers
// fixed; stagnation grows the segment size and the stagnation threshold.

#include <algorithm>
#include <cassert>
#include <chrono>
#include <climits>
#include <cmath>
#include <cstdlib>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "lws/errors.hpp"
#include "lws/heuristics.hpp"
#include "lws/hp.hpp"
#include "lws/lattice.hpp"
#include "lws/rng.hpp"

namespace lws {

struct SearchParams {
    int initial_segment_size = 1;
    long long initial_max_stable = 1000;
    double stable_factor = 1.2;
    int tenure_min = 4;
    int tenure_max_divisor = 8;  // tenure drawn uniformly from [tenure_min, n/divisor]
    int max_single_segment_size = 6;
    long long max_iterations = 1'000'000;
    std::chrono::milliseconds wall_clock_budget{0};  // 0 = no time limit
    std::uint64_t rng_seed = 1;
    std::optional<HeuristicKind> pinned_heuristic;  // unset = uniform draw per iteration
    std::optional<long long> target_energy;  // stop once the global best reaches this
    long long warmup_iterations = 0;   // greedy single-residue warm-up before the main loop
    // Per-iteration cap on evaluated candidate moves. Unclosed segments of
    // size 6 can have neighborhoods in the millions on sparse chains; the cap
    // bounds per-iteration work while small neighborhoods stay exhaustive.
    long long max_candidates_per_iteration = 20'000;
    bool validate_each_step = false;   // full feasibility audit after every executed move
    long long validate_stride = 4096;  // sampled audit otherwise (0 disables)
};

class TabuList {
public:
    TabuList() = default;
    explicit TabuList(int n) : expiry_(static_cast<std::size_t>(n), 0) {}

    // An index is tabu at iteration t iff its expiry is >= t.
    bool is_tabu(int index, long long iteration) const {
        return expiry_[static_cast<std::size_t>(index)] >= iteration;
    }

    void add(int index, long long expiry_iteration) {
        long long& e = expiry_[static_cast<std::size_t>(index)];
        e = std::max(e, expiry_iteration);
    }

    void clear() { std::fill(expiry_.begin(), expiry_.end(), 0); }
    int size() const { return static_cast<int>(expiry_.size()); }

private:
    std::vector<long long> expiry_;
};

// Escalation clock: no global-best improvement for max_stable steps grows the
// segment and the threshold; any improvement resets both to their initial
// values. The threshold compounds from its current value, with floor
// semantics on the decimal factor and a minimum growth of one.
struct StagnationSchedule {
    int initial_segment_size = 1;
    long long initial_max_stable = 1000;
    double factor = 1.2;

    int segment_size = 1;
    long long max_stable = 1000;
    long long steps_since_improvement = 0;

    void reset() {
        segment_size = initial_segment_size;
        max_stable = initial_max_stable;
        steps_since_improvement = 0;
    }

    void note_improvement() { reset(); }
    void note_stable_step() { ++steps_since_improvement; }
    bool escalation_due() const { return steps_since_improvement >= max_stable; }

    void escalate() {
        // exact decimal arithmetic so e.g. 1000 * 1.2 lands on 1200, not 1199
        const long long scaled = std::llround(factor * 1'000'000.0);
        max_stable = std::max(max_stable + 1, max_stable * scaled / 1'000'000);
        ++segment_size;
    }
};

struct SegmentSelection {
    enum class Kind { Single, Multiple };
    Kind kind = Kind::Single;
    std::vector<int> indices;  // strictly increasing monomer indices
};

inline SegmentSelection::Kind select_segment_type(Rng& rng) {
    return rng.uniform_int(0, 1) == 0 ? SegmentSelection::Kind::Single
                                      : SegmentSelection::Kind::Multiple;
}

inline HeuristicKind select_heuristic(Rng& rng, std::optional<HeuristicKind> pinned = {}) {
    if (pinned) return *pinned;
    return static_cast<HeuristicKind>(rng.uniform_int(0, kNumHeuristics - 1));
}

namespace detail {
inline constexpr int kSelectionAttempts = 50;
inline constexpr int kDrawsPerPick = 50;
}  // namespace detail

// Draws the monomer indices for one iteration, or nothing if the tabu list
// blocks every attempt.
//
// Single: a contiguous window of the effective size around a random center,
// clamped at the chain ends; rejected if any index in it is tabu. Multiple:
// distinct non-tabu indices with pairwise sequence distance >= 2, so each
// selected position keeps fixed chain neighbors.
inline std::optional<SegmentSelection> select_segment_variables(int n, const TabuList& tabu,
                                                                long long iteration,
                                                                SegmentSelection::Kind kind,
                                                                int segment_size,
                                                                const SearchParams& params,
                                                                Rng& rng) {
    if (kind == SegmentSelection::Kind::Single) {
        const int eff = std::min({segment_size, params.max_single_segment_size, n - 1});
        if (eff < 1) return std::nullopt;
        for (int attempt = 0; attempt < detail::kSelectionAttempts; ++attempt) {
            const int center = rng.uniform_int(0, n - 1);
            const int start = std::clamp(center - (eff - 1) / 2, 0, n - eff);
            bool blocked = false;
            for (int i = start; i < start + eff; ++i)
                if (tabu.is_tabu(i, iteration)) {
                    blocked = true;
                    break;
                }
            if (blocked) continue;
            SegmentSelection sel;
            sel.kind = kind;
            for (int i = start; i < start + eff; ++i) sel.indices.push_back(i);
            return sel;
        }
        return std::nullopt;
    }

    const int eff = std::min(segment_size, std::max(1, n / 4));
    for (int attempt = 0; attempt < detail::kSelectionAttempts; ++attempt) {
        std::vector<int> chosen;
        bool failed = false;
        for (int k = 0; k < eff && !failed; ++k) {
            bool picked = false;
            for (int draw = 0; draw < detail::kDrawsPerPick; ++draw) {
                const int i = rng.uniform_int(0, n - 1);
                if (tabu.is_tabu(i, iteration)) continue;
                bool clash = false;
                for (int j : chosen)
                    if (std::abs(i - j) < 2) {
                        clash = true;
                        break;
                    }
                if (clash) continue;
                chosen.push_back(i);
                picked = true;
                break;
            }
            if (!picked) failed = true;
        }
        if (failed) continue;
        std::sort(chosen.begin(), chosen.end());
        SegmentSelection sel;
        sel.kind = kind;
        sel.indices = std::move(chosen);
        return sel;
    }
    return std::nullopt;
}

namespace detail {

struct GenDigit {
    int monomer;          // monomer placed by this digit
    int src_digit;        // digit whose placed point this one extends, or -1
    Vec3 anchor;          // source point when src_digit < 0
    int close_steps = -1; // digits left in the run before it must rejoin the chain
    Vec3 close_to;
};

// Splits strictly increasing indices into maximal contiguous runs and lays
// out the generator digits in materialization order. A run starting at
// monomer 0 has no predecessor, so it anchors at the fixed monomer after it
// and is materialized in reverse; a run not ending at the chain terminus must
// reconnect to the first fixed monomer after it.
inline std::vector<GenDigit> build_digits(const Conformation& conf,
                                          const std::vector<int>& indices) {
    std::vector<GenDigit> digits;
    const int n = conf.size();
    std::size_t k = 0;
    while (k < indices.size()) {
        std::size_t e = k;
        while (e + 1 < indices.size() && indices[e + 1] == indices[e] + 1) ++e;
        const int a = indices[k], b = indices[e];
        if (a == 0) {
            digits.push_back({b, -1, conf.position(b + 1), -1, {}});
            for (int m = b - 1; m >= a; --m)
                digits.push_back({m, static_cast<int>(digits.size()) - 1, {}, -1, {}});
        } else {
            digits.push_back({a, -1, conf.position(a - 1), -1, {}});
            for (int m = a + 1; m <= b; ++m)
                digits.push_back({m, static_cast<int>(digits.size()) - 1, {}, -1, {}});
            if (b < n - 1) {
                const Vec3 close_to = conf.position(b + 1);
                for (int m = a; m <= b; ++m) {
                    GenDigit& g = digits[digits.size() - static_cast<std::size_t>(b - m) - 1];
                    g.close_steps = b - m;
                    g.close_to = close_to;
                }
            }
        }
        k = e + 1;
    }
    return digits;
}

}  // namespace detail

// Enumerates every feasible simultaneous repositioning of the selected
// monomers, all others fixed, and calls emit(move) for each; emit returns
// false to stop early. The generator assigns one direction per selected
// position; a candidate is abandoned the moment a partial placement hits an
// occupied point (skip pruning) or drifts beyond reach of its segment's
// rejoin point, and an interior segment must reconnect to the first fixed
// monomer after it. The identity placement is not emitted, and moves list
// only the monomers whose position actually changes.
//
// start_digits rotates the enumeration order (the counter starts there and
// wraps around); the emitted set is unchanged. Callers that cap evaluation
// use this so truncated scans are not biased toward low direction indices.
template <typename F>
void for_each_segment_move(const Conformation& conf, const SegmentSelection& sel, F&& emit,
                           const std::vector<int>* start_digits = nullptr) {
    const int total = static_cast<int>(sel.indices.size());
    if (total == 0 || total == conf.size()) return;  // nothing movable without a fixed anchor
    assert(std::is_sorted(sel.indices.begin(), sel.indices.end()));

    const auto selected = [&](int monomer) {
        for (int i : sel.indices)
            if (i == monomer) return true;
        return false;
    };

    const std::vector<detail::GenDigit> digits = detail::build_digits(conf, sel.indices);
    const int k = static_cast<int>(digits.size());
    std::vector<int> digit(static_cast<std::size_t>(k), 0);
    std::vector<int> start(static_cast<std::size_t>(k), 0);
    if (start_digits) {
        assert(static_cast<int>(start_digits->size()) == k);
        digit = *start_digits;
        start = *start_digits;
    }
    const bool rotated = digit != std::vector<int>(static_cast<std::size_t>(k), 0);
    bool wrapped = !rotated;  // zero start needs a single pass only
    std::vector<Vec3> placed(static_cast<std::size_t>(k));
    Move move;

    int t = 0;  // next digit to materialize
    while (true) {
        bool pruned = false;
        for (; t < k; ++t) {
            const detail::GenDigit& g = digits[static_cast<std::size_t>(t)];
            const Vec3 src = g.src_digit >= 0 ? placed[static_cast<std::size_t>(g.src_digit)] : g.anchor;
            const Vec3 r = src + kBasisVectors[static_cast<std::size_t>(digit[static_cast<std::size_t>(t)])];
            const int occ = conf.occupant(r);
            bool bad = occ >= 0 && !selected(occ);
            for (int u = 0; !bad && u < t; ++u)
                if (placed[static_cast<std::size_t>(u)] == r) bad = true;
            // the rest of the run must still be able to rejoin the chain
            if (!bad && g.close_steps == 0 && !is_neighbor(r, g.close_to)) bad = true;
            if (!bad && g.close_steps > 0 &&
                step_distance_lower_bound(g.close_to - r) > g.close_steps + 1)
                bad = true;
            if (bad) {
                pruned = true;
                break;
            }
            placed[static_cast<std::size_t>(t)] = r;
        }

        if (!pruned) {
            move.changes.clear();
            for (int u = 0; u < k; ++u) {
                const int m = digits[static_cast<std::size_t>(u)].monomer;
                if (placed[static_cast<std::size_t>(u)] != conf.position(m))
                    move.changes.push_back({m, placed[static_cast<std::size_t>(u)]});
            }
            if (!move.changes.empty()) {
                std::sort(move.changes.begin(), move.changes.end(),
                          [](const Move::Change& a, const Move::Change& b) { return a.index < b.index; });
                if (!emit(static_cast<const Move&>(move))) return;
            }
            t = k - 1;
        }

        // advance the counter at digit t; lower-order digits restart at zero
        while (t >= 0) {
            int& d = digit[static_cast<std::size_t>(t)];
            if (++d < kNumDirections) break;
            d = 0;
            --t;
        }
        if (t < 0) {
            if (wrapped) return;
            wrapped = true;  // second pass: from all-zeros up to the start state
            std::fill(digit.begin(), digit.end(), 0);
            t = 0;
        } else {
            for (int u = t + 1; u < k; ++u) digit[static_cast<std::size_t>(u)] = 0;
        }
        if (wrapped && rotated && !std::lexicographical_compare(digit.begin(), digit.end(),
                                                                start.begin(), start.end()))
            return;  // back at (or past) the start state
    }
}

// The complete feasible move set for a selection, materialized.
inline std::vector<Move> generate_moves(const Conformation& conf, const SegmentSelection& sel) {
    std::vector<Move> out;
    for_each_segment_move(conf, sel, [&](const Move& m) {
        out.push_back(m);
        return true;
    });
    return out;
}

// Feasible self-avoiding walk grown by randomized depth-first extension with
// backtracking. Deterministic for a given rng state.
inline Conformation random_walk_conformation(const HPSequence& seq, Rng& rng) {
    const int n = seq.size();
    std::vector<Vec3> pos;
    pos.reserve(static_cast<std::size_t>(n));
    pos.push_back({0, 0, 0});
    if (n == 1) return Conformation(std::move(pos));

    OccupancyIndex occ;
    occ.reserve(static_cast<std::size_t>(n));
    occ.insert({0, 0, 0}, 0);

    std::vector<std::vector<int>> order(static_cast<std::size_t>(n));
    std::vector<int> cursor(static_cast<std::size_t>(n), 0);
    const auto enter_level = [&](int d) {
        std::vector<int>& o = order[static_cast<std::size_t>(d)];
        o.resize(12);
        for (int i = 0; i < 12; ++i) o[static_cast<std::size_t>(i)] = i;
        rng.shuffle(o);
        cursor[static_cast<std::size_t>(d)] = 0;
    };

    int depth = 1;
    enter_level(depth);
    while (depth < n) {
        bool extended = false;
        int& c = cursor[static_cast<std::size_t>(depth)];
        while (c < 12) {
            const Vec3 r = pos.back() + kBasisVectors[static_cast<std::size_t>(
                                            order[static_cast<std::size_t>(depth)][static_cast<std::size_t>(c)])];
            ++c;
            if (!occ.contains(r)) {
                occ.insert(r, depth);
                pos.push_back(r);
                ++depth;
                if (depth < n) enter_level(depth);
                extended = true;
                break;
            }
        }
        if (!extended) {
            if (depth == 1) throw InitializationFailedError("walk construction exhausted all extensions");
            occ.erase(pos.back());
            pos.pop_back();
            --depth;
        }
    }
    return Conformation(std::move(pos));
}

struct TraceRecord {
    long long iteration = 0;
    long long elapsed_ms = 0;
    long long current_energy = 0;
    long long best_energy = 0;
};

struct SearchState {
    Conformation conf;
    HeuristicState heur;
    TabuList tabu;
    long long iteration = 0;
    StagnationSchedule schedule;
    long long best_energy = 0;
    std::vector<Vec3> best_positions;
    std::vector<TraceRecord> trace;
};

struct RunResult {
    long long best_energy = 0;
    std::vector<Vec3> best_positions;
    std::vector<TraceRecord> trace;
    long long iterations = 0;
    double wall_ms = 0;
};

class Search {
public:
    Search(HPSequence seq, SearchParams params)
        : seq_(std::move(seq)), params_(params), rng_(params.rng_seed) {
        init();
    }

    // One iteration of the main loop (not counting escalation, which run()
    // applies between steps).
    void step() { step_impl(StepPolicy{}); }

    RunResult run() {
        while (state_.iteration < params_.max_iterations) {
            if (params_.wall_clock_budget.count() > 0 && elapsed() >= params_.wall_clock_budget)
                break;
            if (params_.target_energy && state_.best_energy <= *params_.target_energy) break;
            step();
            if (state_.schedule.escalation_due()) state_.schedule.escalate();
        }
        RunResult r;
        r.best_energy = state_.best_energy;
        r.best_positions = state_.best_positions;
        r.trace = state_.trace;
        r.iterations = state_.iteration;
        r.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - start_).count();
        return r;
    }

    const SearchState& state() const { return state_; }
    const HPSequence& sequence() const { return seq_; }

private:
    using clock = std::chrono::steady_clock;

    struct StepPolicy {
        bool warmup = false;  // pin single/size-1/H1, leave schedule and trace alone
    };

    void init() {
        start_ = clock::now();
        state_.conf = random_walk_conformation(seq_, rng_);
        state_.heur = recompute(state_.conf, seq_);
        state_.tabu = TabuList(seq_.size());
        state_.schedule.initial_segment_size = params_.initial_segment_size;
        state_.schedule.initial_max_stable = params_.initial_max_stable;
        state_.schedule.factor = params_.stable_factor;
        state_.schedule.reset();
        state_.best_energy = state_.heur.contact_energy;
        state_.best_positions = state_.conf.positions();

        for (long long w = 0; w < params_.warmup_iterations; ++w) step_impl(StepPolicy{true});
        if (params_.warmup_iterations > 0) {
            state_.iteration = 0;
            state_.tabu.clear();
            state_.schedule.reset();
        }
        state_.trace.push_back({0, 0, state_.heur.contact_energy, state_.best_energy});
    }

    void step_impl(const StepPolicy& pol) {
        const long long it = ++state_.iteration;
        const int n = seq_.size();

        const SegmentSelection::Kind kind =
            pol.warmup ? SegmentSelection::Kind::Single : select_segment_type(rng_);
        const int seg_size = pol.warmup ? 1 : state_.schedule.segment_size;
        const std::optional<SegmentSelection> sel =
            select_segment_variables(n, state_.tabu, it, kind, seg_size, params_, rng_);
        if (!sel) {
            if (!pol.warmup) state_.schedule.note_stable_step();
            return;
        }

        const HeuristicKind guide = pol.warmup ? HeuristicKind::H1Contacts
                                               : select_heuristic(rng_, params_.pinned_heuristic);

        std::vector<int> start(sel->indices.size());
        for (int& d : start) d = rng_.uniform_int(0, kNumDirections - 1);

        long long best_delta = LLONG_MAX;
        Move best_move;
        int ties = 0;
        long long budget = params_.max_candidates_per_iteration;
        for_each_segment_move(
            state_.conf, *sel,
            [&](const Move& m) {
                const HeuristicDeltas d = simulate(state_.heur, state_.conf, seq_, m);
                const long long key = d.of(guide);
                if (ties == 0 || key < best_delta) {
                    best_delta = key;
                    best_move = m;
                    ties = 1;
                } else if (key == best_delta) {
                    ++ties;
                    if (rng_.uniform_int(0, ties - 1) == 0) best_move = m;
                }
                return budget <= 0 || --budget > 0;
            },
            &start);
        if (ties == 0) {
            if (!pol.warmup) state_.schedule.note_stable_step();
            return;
        }

        execute(state_.heur, state_.conf, seq_, best_move);

        const int tenure_hi = std::max(params_.tenure_min, n / params_.tenure_max_divisor);
        for (const Move::Change& c : best_move.changes)
            state_.tabu.add(c.index, it + rng_.uniform_int(params_.tenure_min, tenure_hi));

        const long long e = state_.heur.contact_energy;
        if (e < state_.best_energy) {
            state_.best_energy = e;
            state_.best_positions = state_.conf.positions();
            if (!pol.warmup) {
                state_.schedule.note_improvement();
                state_.trace.push_back({it, elapsed().count(), e, e});
            }
        } else if (!pol.warmup) {
            state_.schedule.note_stable_step();
        }

        audit(it);
    }

    std::chrono::milliseconds elapsed() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - start_);
    }

    void audit(long long it) const {
        bool due = params_.validate_each_step;
#ifndef NDEBUG
        due = true;
#endif
        if (!due && params_.validate_stride > 0 && it % params_.validate_stride == 0) due = true;
        if (!due) return;
        const ValidationReport report = validate(state_.conf);
        if (!report.ok())
            throw Error("feasibility violated at iteration " + std::to_string(it));
        if (recompute(state_.conf, seq_) != state_.heur)
            throw Error("heuristic accumulators diverged at iteration " + std::to_string(it));
    }

    HPSequence seq_;
    SearchParams params_;
    Rng rng_;
    SearchState state_;
    clock::time_point start_;
};

// Builds a feasible starting conformation; with warmup_iterations > 0 it is
// additionally polished by greedy single-residue search on the energy.
inline Conformation initialize_conformation(const HPSequence& seq, Rng& rng,
                                            long long warmup_iterations = 0) {
    if (warmup_iterations <= 0) return random_walk_conformation(seq, rng);
    SearchParams params;
    params.rng_seed = rng.next_u64();
    params.warmup_iterations = warmup_iterations;
    params.max_iterations = 0;
    Search search(seq, params);
    return search.state().conf;
}

inline RunResult lws_run(const HPSequence& seq, const SearchParams& params) {
    Search search(seq, params);
    return search.run();
}

}  // namespace lws
