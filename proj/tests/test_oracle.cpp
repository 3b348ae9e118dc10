#include <catch2/catch.hpp>

#include "helpers.hpp"
#include "lws/oracle.hpp"

using namespace lws;

TEST_CASE("exhaustive optima for tiny chains") {
    CHECK(enumerate_optimal(HPSequence::parse("HH")).optimal_energy == 0);
    CHECK(enumerate_optimal(HPSequence::parse("HHH")).optimal_energy == -1);
    CHECK(enumerate_optimal(HPSequence::parse("PPPPP")).optimal_energy == 0);
    CHECK(enumerate_optimal(HPSequence::parse("H")).optimal_energy == 0);

    // first step pinned: a 3-mer has 11 extensions, 4 canonical classes
    const OracleResult full = enumerate_optimal(HPSequence::parse("HHH"), false);
    CHECK(full.enumerated == 11);
    const OracleResult reduced = enumerate_optimal(HPSequence::parse("HHH"), true);
    CHECK(reduced.enumerated == 4);
    CHECK(full.optimal_energy == reduced.optimal_energy);
}

TEST_CASE("length bound is enforced") {
    CHECK_NOTHROW(enumerate_optimal(HPSequence::parse("HHHHHHHHH")));  // 9 is fine
    CHECK_THROWS_AS(enumerate_optimal(HPSequence::parse("HHHHHHHHHH")), TooLongError);
}

TEST_CASE("symmetry reduction never changes the optimum") {
    Rng rng(606);
    for (int trial = 0; trial < 10; ++trial) {
        const HPSequence seq = testing::random_sequence(rng, rng.uniform_int(4, 7));
        const OracleResult with = enumerate_optimal(seq, true);
        const OracleResult without = enumerate_optimal(seq, false);
        CHECK(with.optimal_energy == without.optimal_energy);
        CHECK(with.enumerated <= without.enumerated);
        CHECK(with.optimizer_count >= 1);
    }
}

TEST_CASE("oracle optimum bounds search results") {
    Rng rng(40);
    for (int trial = 0; trial < 4; ++trial) {
        const HPSequence seq = testing::random_sequence(rng, 7);
        const OracleResult exact = enumerate_optimal(seq);
        SearchParams params;
        params.max_iterations = 4000;
        params.rng_seed = 1000 + static_cast<std::uint64_t>(trial);
        params.target_energy = exact.optimal_energy;
        const RunResult run = lws_run(seq, params);
        CHECK(run.best_energy >= exact.optimal_energy);
    }
}

TEST_CASE("placement oracle matches the common-neighbor picture") {
    Rng rng(8);
    const HPSequence seq = testing::random_sequence(rng, 12);
    const Conformation conf = random_walk_conformation(seq, rng);

    SegmentSelection sel;
    sel.kind = SegmentSelection::Kind::Single;
    sel.indices = {6};
    const auto moves = neighborhood_oracle(conf, sel);
    for (const Move& m : moves) {
        REQUIRE(m.changes.size() == 1);
        const Vec3 to = m.changes[0].to;
        CHECK(is_neighbor(to, conf.position(5)));
        CHECK(is_neighbor(to, conf.position(7)));
        CHECK_FALSE(conf.occupied(to));
    }

    // every oracle move keeps the conformation feasible
    for (const Move& m : moves) {
        Conformation copy = conf;
        copy.apply(m);
        CHECK(validate(copy).ok());
    }
}

TEST_CASE("dense cores can have empty neighborhoods") {
    // compact an H-rich chain, then check generator/oracle agreement on every
    // interior position; packed interiors commonly have nowhere to move
    SearchParams params;
    params.max_iterations = 4000;
    params.rng_seed = 13;
    const HPSequence seq = HPSequence::parse("HHHHHHHHHHHHHHHHHHHHHHHH");
    const RunResult run = lws_run(seq, params);
    const Conformation conf(run.best_positions);

    int empty_seen = 0;
    for (int i = 1; i + 1 < conf.size(); ++i) {
        SegmentSelection sel;
        sel.kind = SegmentSelection::Kind::Single;
        sel.indices = {i};
        const auto got = testing::sorted_moves(generate_moves(conf, sel));
        const auto want = testing::sorted_moves(neighborhood_oracle(conf, sel));
        CHECK(got == want);
        if (got.empty()) ++empty_seen;
    }
    CHECK(empty_seen > 0);
}

TEST_CASE("placement oracle enforces its size bound") {
    const Conformation conf({{0, 0, 0}, {1, 1, 0}, {2, 2, 0}, {3, 3, 0}, {4, 4, 0}, {5, 5, 0}, {6, 6, 0}});
    SegmentSelection sel;
    sel.kind = SegmentSelection::Kind::Single;
    sel.indices = {1, 2, 3, 4, 5};
    CHECK_THROWS_AS(neighborhood_oracle(conf, sel), std::invalid_argument);
}
