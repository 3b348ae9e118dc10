#include <catch2/catch.hpp>

#include <set>

#include "helpers.hpp"
#include "lws/oracle.hpp"
#include "lws/search.hpp"

using namespace lws;

TEST_CASE("tabu list expiry semantics") {
    TabuList tabu(10);
    CHECK_FALSE(tabu.is_tabu(3, 1));
    tabu.add(3, 7);  // tabu through iteration 7
    CHECK(tabu.is_tabu(3, 7));
    CHECK_FALSE(tabu.is_tabu(3, 8));
    tabu.add(3, 5);  // never shortens
    CHECK(tabu.is_tabu(3, 7));
    tabu.clear();
    CHECK_FALSE(tabu.is_tabu(3, 1));
}

TEST_CASE("stagnation schedule escalates and resets") {
    StagnationSchedule s;
    s.reset();
    CHECK(s.max_stable == 1000);
    CHECK(s.segment_size == 1);

    const long long expected_thresholds[] = {1000, 1200, 1440, 1728};
    for (int round = 0; round < 4; ++round) {
        CHECK(s.max_stable == expected_thresholds[round]);
        CHECK(s.segment_size == round + 1);
        while (!s.escalation_due()) s.note_stable_step();
        s.escalate();
    }
    CHECK(s.max_stable == 2073);  // floor(1728 * 1.2)
    CHECK(s.segment_size == 5);

    s.note_improvement();
    CHECK(s.max_stable == 1000);
    CHECK(s.segment_size == 1);
    CHECK(s.steps_since_improvement == 0);

    StagnationSchedule tiny;
    tiny.initial_max_stable = 4;
    tiny.reset();
    tiny.escalate();
    CHECK(tiny.max_stable == 5);  // growth of at least one
}

TEST_CASE("segment type and heuristic draws") {
    Rng a(123), b(123);
    for (int i = 0; i < 50; ++i) CHECK(select_segment_type(a) == select_segment_type(b));

    Rng rng(9);
    int singles = 0;
    for (int i = 0; i < 10000; ++i)
        if (select_segment_type(rng) == SegmentSelection::Kind::Single) ++singles;
    CHECK(singles > 4500);
    CHECK(singles < 5500);

    int counts[3] = {0, 0, 0};
    for (int i = 0; i < 10000; ++i)
        counts[static_cast<int>(select_heuristic(rng))]++;
    for (int c : counts) {
        CHECK(c > 3000);
        CHECK(c < 3700);
    }
    CHECK(select_heuristic(rng, HeuristicKind::H2AllPairDist) == HeuristicKind::H2AllPairDist);
}

TEST_CASE("single segment window selection") {
    const int n = 48;
    SearchParams params;
    TabuList tabu(n);

    // find a seed whose first draw lands the window center on index 10
    std::uint64_t seed = 0;
    for (;; ++seed) {
        Rng probe(seed);
        if (probe.uniform_int(0, n - 1) == 10) break;
    }
    Rng rng(seed);
    const auto sel = select_segment_variables(n, tabu, 1, SegmentSelection::Kind::Single, 6,
                                              params, rng);
    REQUIRE(sel.has_value());
    CHECK(sel->indices == std::vector<int>{8, 9, 10, 11, 12, 13});

    // clamping at the ends, fixed width
    Rng many(31337);
    std::set<int> starts;
    for (int i = 0; i < 500; ++i) {
        const auto s = select_segment_variables(n, tabu, 1, SegmentSelection::Kind::Single, 6,
                                                params, many);
        REQUIRE(s.has_value());
        REQUIRE(s->indices.size() == 6);
        CHECK(s->indices.front() >= 0);
        CHECK(s->indices.back() <= n - 1);
        CHECK(s->indices.back() - s->indices.front() == 5);
        starts.insert(s->indices.front());
    }
    CHECK(starts.count(0) == 1);
    CHECK(starts.count(n - 6) == 1);

    // a fully tabu chain yields no selection
    TabuList blocked(n);
    for (int i = 0; i < n; ++i) blocked.add(i, 100);
    Rng r2(7);
    CHECK_FALSE(select_segment_variables(n, blocked, 1, SegmentSelection::Kind::Single, 6, params, r2)
                    .has_value());
    CHECK_FALSE(
        select_segment_variables(n, blocked, 1, SegmentSelection::Kind::Multiple, 3, params, r2)
            .has_value());
}

TEST_CASE("size-1 selections coincide across segment types") {
    SearchParams params;
    TabuList tabu(16);
    Rng rng(4);
    for (int i = 0; i < 100; ++i) {
        const auto single = select_segment_variables(16, tabu, 1, SegmentSelection::Kind::Single,
                                                     1, params, rng);
        const auto multiple = select_segment_variables(
            16, tabu, 1, SegmentSelection::Kind::Multiple, 1, params, rng);
        REQUIRE(single.has_value());
        REQUIRE(multiple.has_value());
        CHECK(single->indices.size() == 1);
        CHECK(multiple->indices.size() == 1);
    }
}

TEST_CASE("multiple segment selection keeps positions apart") {
    const int n = 48;
    SearchParams params;
    TabuList tabu(n);
    tabu.add(5, 100);
    tabu.add(6, 100);
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const auto sel = select_segment_variables(n, tabu, 1, SegmentSelection::Kind::Multiple, 3,
                                                  params, rng);
        REQUIRE(sel.has_value());
        REQUIRE(sel->indices.size() == 3);
        for (std::size_t k = 0; k < sel->indices.size(); ++k) {
            CHECK_FALSE(tabu.is_tabu(sel->indices[k], 1));
            if (k > 0) CHECK(sel->indices[k] - sel->indices[k - 1] >= 2);
        }
    }
}

TEST_CASE("interior single-monomer moves are the free common neighbors") {
    Rng rng(2);
    const HPSequence seq = testing::random_sequence(rng, 10);
    const Conformation conf = random_walk_conformation(seq, rng);

    SegmentSelection sel;
    sel.kind = SegmentSelection::Kind::Single;
    sel.indices = {4};
    const std::vector<Move> moves = generate_moves(conf, sel);

    std::set<Vec3> expected;
    for (Vec3 r : common_neighbors(conf.position(3), conf.position(5)))
        if (!conf.occupied(r)) expected.insert(r);
    expected.erase(conf.position(4));

    std::set<Vec3> got;
    for (const Move& m : moves) {
        REQUIRE(m.changes.size() == 1);
        CHECK(m.changes[0].index == 4);
        got.insert(m.changes[0].to);
    }
    CHECK(got == expected);
}

TEST_CASE("terminus of a two-monomer chain has eleven moves") {
    const Conformation conf({{0, 0, 0}, {1, 1, 0}});
    SegmentSelection tail;
    tail.kind = SegmentSelection::Kind::Single;
    tail.indices = {1};
    CHECK(generate_moves(conf, tail).size() == 11);

    SegmentSelection head;
    head.kind = SegmentSelection::Kind::Single;
    head.indices = {0};
    CHECK(generate_moves(conf, head).size() == 11);
}

TEST_CASE("whole-chain selections produce no moves") {
    const Conformation conf({{0, 0, 0}, {1, 1, 0}});
    SegmentSelection all;
    all.kind = SegmentSelection::Kind::Single;
    all.indices = {0, 1};
    CHECK(generate_moves(conf, all).empty());
}

TEST_CASE("generator equals the placement oracle on random cases") {
    Rng rng(314);
    for (int trial = 0; trial < 60; ++trial) {
        const HPSequence seq = testing::random_sequence(rng, rng.uniform_int(8, 24));
        const Conformation conf = random_walk_conformation(seq, rng);
        const SegmentSelection sel = testing::random_selection(rng, conf, 3);
        const auto got = testing::sorted_moves(generate_moves(conf, sel));
        const auto want = testing::sorted_moves(neighborhood_oracle(conf, sel));
        REQUIRE(got == want);
    }
}

TEST_CASE("rotated generator start emits the same move set") {
    Rng rng(555);
    for (int scenario = 0; scenario < 8; ++scenario) {
        const HPSequence seq = testing::random_sequence(rng, 14);
        const Conformation conf = random_walk_conformation(seq, rng);
        const SegmentSelection sel = testing::random_selection(rng, conf, 3);

        const auto base = testing::sorted_moves(generate_moves(conf, sel));
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<int> start(sel.indices.size());
            for (int& d : start) d = rng.uniform_int(0, kNumDirections - 1);
            std::vector<Move> rotated;
            for_each_segment_move(
                conf, sel,
                [&](const Move& m) {
                    rotated.push_back(m);
                    return true;
                },
                &start);
            CHECK(testing::sorted_moves(std::move(rotated)) == base);
        }
    }
}

TEST_CASE("random walk construction") {
    Rng rng(1);
    const HPSequence one = HPSequence::parse("H");
    CHECK(random_walk_conformation(one, rng).positions() ==
          std::vector<Vec3>{{0, 0, 0}});

    const HPSequence seq = testing::random_sequence(rng, 100);
    Rng a(42), b(42), c(43);
    const Conformation ca = random_walk_conformation(seq, a);
    const Conformation cb = random_walk_conformation(seq, b);
    const Conformation cc = random_walk_conformation(seq, c);
    CHECK(validate(ca).ok());
    CHECK(ca.positions() == cb.positions());
    CHECK(ca.positions() != cc.positions());
}

TEST_CASE("zero-iteration run returns the initial conformation") {
    SearchParams params;
    params.max_iterations = 0;
    params.rng_seed = 8;
    const HPSequence seq = HPSequence::parse("HPHPHPHH");
    const RunResult r = lws_run(seq, params);
    REQUIRE(r.trace.size() == 1);
    CHECK(r.trace[0].iteration == 0);
    CHECK(r.best_energy == r.trace[0].best_energy);
    CHECK(r.iterations == 0);
    CHECK(validate(Conformation(r.best_positions)).ok());
    CHECK(energy(Conformation(r.best_positions), seq) == r.best_energy);
}

TEST_CASE("runs are deterministic given seed and params") {
    SearchParams params;
    params.max_iterations = 3000;
    params.rng_seed = 17;
    const HPSequence seq = HPSequence::parse("HPPHHPHPHPPHHPHHPHPH");

    const RunResult r1 = lws_run(seq, params);
    const RunResult r2 = lws_run(seq, params);
    CHECK(r1.best_energy == r2.best_energy);
    CHECK(r1.best_positions == r2.best_positions);
    CHECK(r1.iterations == r2.iterations);
    REQUIRE(r1.trace.size() == r2.trace.size());
    for (std::size_t i = 0; i < r1.trace.size(); ++i) {
        CHECK(r1.trace[i].iteration == r2.trace[i].iteration);
        CHECK(r1.trace[i].current_energy == r2.trace[i].current_energy);
        CHECK(r1.trace[i].best_energy == r2.trace[i].best_energy);
    }

    SearchParams other = params;
    other.rng_seed = 18;
    CHECK(lws_run(seq, other).best_positions != r1.best_positions);
}

TEST_CASE("run bookkeeping invariants") {
    SearchParams params;
    params.max_iterations = 2500;
    params.rng_seed = 5;
    const HPSequence seq = HPSequence::parse("HHPPHHPHPHHPPHHPPHPH");
    const RunResult r = lws_run(seq, params);

    CHECK(r.best_energy <= 0);
    CHECK(validate(Conformation(r.best_positions)).ok());
    CHECK(energy(Conformation(r.best_positions), seq) == r.best_energy);

    long long prev_it = -1;
    long long best = 0;
    for (const TraceRecord& t : r.trace) {
        CHECK(t.iteration > prev_it);  // strictly increasing
        prev_it = t.iteration;
        CHECK(t.best_energy <= best);  // monotone best
        best = t.best_energy;
        CHECK(t.best_energy <= t.current_energy);
    }
    CHECK(best == r.best_energy);
}

TEST_CASE("executed moves become tabu") {
    SearchParams params;
    params.rng_seed = 21;
    const HPSequence seq = HPSequence::parse("HPHPHHPHPPHHPHPH");
    Search search(seq, params);

    for (int i = 0; i < 50; ++i) {
        const std::vector<Vec3> before = search.state().conf.positions();
        search.step();
        const std::vector<Vec3>& after = search.state().conf.positions();
        const long long it = search.state().iteration;
        for (std::size_t k = 0; k < before.size(); ++k)
            if (before[k] != after[k]) {
                CHECK(search.state().tabu.is_tabu(static_cast<int>(k), it + 1));
                CHECK(search.state().tabu.is_tabu(static_cast<int>(k), it + 4));
            }
    }
}

TEST_CASE("target energy stops the run early") {
    SearchParams params;
    params.max_iterations = 1000000;
    params.target_energy = 0;  // satisfied immediately
    params.rng_seed = 3;
    const RunResult r = lws_run(HPSequence::parse("HPHPHPHP"), params);
    CHECK(r.iterations == 0);
}

TEST_CASE("candidate cap keeps iterations bounded but functional") {
    SearchParams params;
    params.max_iterations = 400;
    params.max_candidates_per_iteration = 1;
    params.rng_seed = 12;
    const HPSequence seq = HPSequence::parse("HHHHPPHHHH");
    const RunResult r = lws_run(seq, params);
    CHECK(r.iterations == 400);
    CHECK(validate(Conformation(r.best_positions)).ok());
}

TEST_CASE("warm-up polishes the initial conformation deterministically") {
    Rng a(9), b(9);
    const HPSequence seq = HPSequence::parse("HHHHHHPPHHHHHH");
    const Conformation w1 = initialize_conformation(seq, a, 200);
    const Conformation w2 = initialize_conformation(seq, b, 200);
    CHECK(w1.positions() == w2.positions());
    CHECK(validate(w1).ok());

    Rng c(9);
    const Conformation raw = initialize_conformation(seq, c);
    CHECK(energy(w1, seq) <= energy(raw, seq));
}
