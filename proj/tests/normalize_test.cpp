#include <linrem/instances.hpp>
#include <linrem/normalize.hpp>

#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

namespace {

using namespace linrem;
using testsupport::exhaustive_count;
using testsupport::exhaustive_solutions;
using testsupport::make;

const NormalizedSystem& as_normalized(const NormalizeOutcome& out) {
    const auto* ns = std::get_if<NormalizedSystem>(&out);
    if (!ns) throw std::runtime_error("expected a normalized outcome");
    return *ns;
}

const Degenerate& as_degenerate(const NormalizeOutcome& out) {
    const auto* deg = std::get_if<Degenerate>(&out);
    if (!deg) throw std::runtime_error("expected a degenerate outcome");
    return *deg;
}

bool systems_equal(const LinSystem& a, const LinSystem& b) {
    return a.a == b.a && a.b == b.b && a.sets == b.sets;
}

TEST(Normalize, InconsistentPairDetected) {
    auto f = make_field(5);
    EltSet full{0, 1, 2, 3, 4};
    LinSystem s = make(f, {{1, 1, 1}, {2, 2, 2}}, {0, 1}, {full, full, full});
    ASSERT_EQ(exhaustive_count(s), 0u);
    auto out = normalize(s);
    EXPECT_EQ(as_degenerate(out).kind, DegenerateKind::Inconsistent);
}

TEST(Normalize, RedundantRowDropped) {
    auto f = make_field(5);
    EltSet full{0, 1, 2, 3, 4};
    LinSystem s = make(f, {{1, 1, 1}, {2, 2, 2}}, {0, 0}, {full, full, {0, 1}});
    auto out = normalize(s);
    const auto& ns = as_normalized(out);
    EXPECT_EQ(ns.sys.k(), 1);
    EXPECT_EQ(ns.sys.m(), 3);
    ASSERT_EQ(ns.transcript.size(), 1u);
    EXPECT_TRUE(std::holds_alternative<RowOpsRec>(ns.transcript[0]));
    EXPECT_EQ(exhaustive_count(ns.sys), exhaustive_count(s));
}

TEST(Normalize, PivotColumnSwapRecorded) {
    auto f = make_field(5);
    LinSystem s = make(f, {{0, 1, 1, 1}}, {0}, {{0, 1}, {2, 3}, {0, 4}, {1}});
    auto out = normalize(s);
    const auto& ns = as_normalized(out);
    ASSERT_EQ(ns.transcript.size(), 1u);
    const auto* perm = std::get_if<ColPermuteRec>(&ns.transcript[0]);
    ASSERT_NE(perm, nullptr);
    EXPECT_EQ(perm->perm, (std::vector<int>{1, 0, 2, 3}));
    EXPECT_EQ(ns.sys.a.row(0), (std::vector<Elt>{1, 0, 1, 1}));
    EXPECT_EQ(ns.sys.sets[0], (EltSet{2, 3}));  // old X2 leads after the swap
    EXPECT_EQ(ns.sys.sets[1], (EltSet{0, 1}));
    EXPECT_EQ(exhaustive_count(ns.sys), exhaustive_count(s));
}

TEST(Normalize, HomogenizeShiftsThePivotSet) {
    auto f = make_field(7);
    LinSystem s = make(f, {{2, 4, 6}}, {3}, {{5, 6}, {0, 1, 2}, {0, 3}});
    // rref scales the row to (1 2 3 | 5); the shift moves X1 by -5
    auto out = normalize(s);
    const auto& ns = as_normalized(out);
    EXPECT_EQ(ns.sys.b, (std::vector<Elt>{0}));
    EXPECT_EQ(ns.sys.a.row(0), (std::vector<Elt>{1, 2, 3}));
    EXPECT_EQ(ns.sys.sets[0], (EltSet{0, 1}));
    ASSERT_EQ(ns.transcript.size(), 2u);
    EXPECT_TRUE(std::holds_alternative<RowOpsRec>(ns.transcript[0]));
    const auto* shift = std::get_if<ShiftSetRec>(&ns.transcript[1]);
    ASSERT_NE(shift, nullptr);
    EXPECT_EQ(shift->row, 0);
    EXPECT_EQ(shift->c, 5);
    EXPECT_EQ(exhaustive_count(ns.sys), exhaustive_count(s));
}

TEST(Normalize, ThinRowsCollapseToAllFree) {
    auto f = make_field(5);
    LinSystem s = make(f, {{1, 0, 1, 0}, {0, 1, 0, 1}}, {0, 0},
                       {{0, 1}, {0, 2}, {1, 2, 3}, {0, 1}});
    auto out = normalize(s);
    const auto& deg = as_degenerate(out);
    EXPECT_EQ(deg.kind, DegenerateKind::AllFree);
    EXPECT_EQ(deg.residual.k(), 0);
    EXPECT_EQ(deg.residual.m(), 2);
    EXPECT_EQ(deg.transcript.size(), 4u);  // two intersect/merge pairs
    EXPECT_EQ(exhaustive_count(deg.residual), exhaustive_count(s));
}

TEST(Normalize, ProportionalRowsMerge) {
    auto f = make_field(5);
    LinSystem s = make(f, {{1, 0, 1, 1}, {0, 1, 2, 2}}, {0, 0},
                       {{0, 1, 2}, {0, 1, 2, 3}, {1, 4}, {0, 2, 3}});
    auto out = normalize(s);
    const auto& ns = as_normalized(out);
    EXPECT_EQ(ns.sys.k(), 1);
    EXPECT_EQ(ns.sys.m(), 3);
    EXPECT_EQ(ns.sys.a.row(0), (std::vector<Elt>{1, 1, 1}));
    ASSERT_EQ(ns.transcript.size(), 2u);
    const auto* isec = std::get_if<IntersectSetRec>(&ns.transcript[0]);
    const auto* merge = std::get_if<MergeVariablesRec>(&ns.transcript[1]);
    ASSERT_NE(isec, nullptr);
    ASSERT_NE(merge, nullptr);
    // B row 2 = 2 * B row 1, so x2 = 2 x1: survivor 1, eliminated 2
    EXPECT_EQ(merge->survivor, 0);
    EXPECT_EQ(merge->eliminated, 1);
    EXPECT_EQ(merge->lambda, 2);
    EXPECT_EQ(isec->survivor, 0);
    EXPECT_EQ(isec->source, 1);
    EXPECT_EQ(isec->scale, f->inv(2));
    // X1' = X1 ∩ inv(2)·X2 = {0,1,2} ∩ 3·{0,1,2,3} = {0,1,2} ∩ {0,3,1,4}
    EXPECT_EQ(ns.sys.sets[0], (EltSet{0, 1}));
    EXPECT_EQ(exhaustive_count(ns.sys), exhaustive_count(s));
}

TEST(Normalize, ForcedZeroVariableWithoutZeroIsSolutionFree) {
    auto f = make_field(5);
    LinSystem s = make(f, {{1, 0, 0}, {0, 1, 1}}, {0, 0}, {{1, 2}, {0, 1}, {0, 4}});
    ASSERT_EQ(exhaustive_count(s), 0u);
    auto out = normalize(s);
    EXPECT_EQ(as_degenerate(out).kind, DegenerateKind::SolutionFree);
}

TEST(Normalize, ForcedZeroVariableWithZeroIsDropped) {
    auto f = make_field(5);
    LinSystem s = make(f, {{1, 0, 0}, {0, 1, 1}}, {0, 0}, {{0, 2}, {0, 1}, {0, 4}});
    auto out = normalize(s);
    const auto& deg = as_degenerate(out);
    // after the forced zero, the surviving row x1 + x2 = 0 is thin and merges
    EXPECT_EQ(deg.kind, DegenerateKind::AllFree);
    EXPECT_EQ(deg.residual.m(), 1);
    ASSERT_GE(deg.transcript.size(), 1u);
    EXPECT_TRUE(std::holds_alternative<ForceZeroRec>(deg.transcript[0]));
    EXPECT_EQ(exhaustive_count(deg.residual), exhaustive_count(s));
}

TEST(Normalize, PredicatesRejectEachViolation) {
    auto f = make_field(5);
    EltSet full{0, 1, 2, 3, 4};
    // nonzero b
    EXPECT_TRUE(normal_form_violation(
                    make(f, {{1, 1, 1}}, {2}, {full, full, full}))
                    .has_value());
    // left block not the identity
    EXPECT_TRUE(normal_form_violation(
                    make(f, {{2, 1, 1}}, {0}, {full, full, full}))
                    .has_value());
    // thin right-block row
    EXPECT_TRUE(normal_form_violation(
                    make(f, {{1, 0, 1}}, {0}, {full, full, full}))
                    .has_value());
    // proportional right-block rows
    EXPECT_TRUE(normal_form_violation(make(f, {{1, 0, 1, 1}, {0, 1, 2, 2}}, {0, 0},
                                           {full, full, full, full}))
                    .has_value());
    // and a clean normal form passes
    EXPECT_FALSE(normal_form_violation(make(f, {{1, 0, 1, 1}, {0, 1, 2, 3}}, {0, 0},
                                            {full, full, full, full}))
                     .has_value());
}

// One fixed menu of small instances reused by the property tests below.
std::vector<LinSystem> property_instances() {
    std::vector<LinSystem> out;
    struct Params {
        std::uint32_t p, n;
        int k, m;
        std::uint64_t seed;
        double density;
        int plant;
    };
    const Params grid[] = {
        {2, 1, 1, 3, 11, 0.7, 1}, {2, 1, 2, 4, 12, 0.6, 2}, {2, 2, 1, 4, 13, 0.5, 1},
        {3, 1, 1, 3, 14, 0.6, 0}, {3, 1, 2, 4, 15, 0.5, 2}, {3, 1, 3, 5, 16, 0.5, 1},
        {5, 1, 1, 3, 17, 0.5, 1}, {5, 1, 2, 4, 18, 0.4, 1}, {5, 1, 2, 5, 19, 0.6, 2},
        {7, 1, 1, 3, 20, 0.4, 1}, {7, 1, 2, 4, 21, 0.3, 2}, {2, 2, 2, 4, 22, 0.6, 1},
    };
    for (const auto& g : grid)
        out.push_back(random_system(make_field(g.p, g.n), g.k, g.m, g.seed, g.density, g.plant));
    // hand-built degenerates and merge-heavy shapes
    auto f5 = make_field(5);
    out.push_back(make(f5, {{1, 2, 3}, {2, 4, 1}}, {1, 2}, {{0, 1, 2}, {1, 3}, {0, 2, 4}}));
    out.push_back(make(f5, {{1, 2, 3}, {2, 4, 1}}, {1, 3}, {{0, 1, 2}, {1, 3}, {0, 2, 4}}));
    out.push_back(make(f5, {{1, 0, 1, 0}, {0, 1, 0, 2}}, {1, 2},
                       {{0, 1, 2}, {1, 3, 4}, {0, 2, 4}, {0, 1, 3}}));
    out.push_back(make(f5, {{0, 0, 1}, {1, 1, 0}}, {0, 3}, {{0, 1, 2, 3}, {1, 2}, {0, 1}}));
    return out;
}

TEST(Normalize, CountsPreservedAfterEveryRecord) {
    for (const auto& s : property_instances()) {
        const std::uint64_t expected = exhaustive_count(s);
        auto out = normalize(s);
        const Transcript& tr = std::holds_alternative<NormalizedSystem>(out)
                                   ? std::get<NormalizedSystem>(out).transcript
                                   : std::get<Degenerate>(out).transcript;
        if (std::holds_alternative<Degenerate>(out) &&
            std::get<Degenerate>(out).kind != DegenerateKind::AllFree) {
            EXPECT_EQ(expected, 0u) << emit_instance(s);
            continue;
        }
        LinSystem cur = s;
        for (const Record& rec : tr) {
            cur = apply_record(cur, rec);
            EXPECT_EQ(exhaustive_count(cur), expected) << emit_instance(s);
        }
    }
}

TEST(Normalize, ReplayReproducesTheOutcome) {
    for (const auto& s : property_instances()) {
        auto out = normalize(s);
        if (std::holds_alternative<NormalizedSystem>(out)) {
            const auto& ns = std::get<NormalizedSystem>(out);
            EXPECT_TRUE(systems_equal(replay(s, ns.transcript), ns.sys)) << emit_instance(s);
        } else {
            const auto& deg = std::get<Degenerate>(out);
            if (deg.kind == DegenerateKind::Inconsistent) continue;  // residual = input
            EXPECT_TRUE(systems_equal(replay(s, deg.transcript), deg.residual))
                << emit_instance(s);
        }
    }
}

TEST(Normalize, SolutionMapsAreInverseBijections) {
    for (const auto& s : property_instances()) {
        auto out = normalize(s);
        const LinSystem* reduced = nullptr;
        const Transcript* tr = nullptr;
        if (const auto* ns = std::get_if<NormalizedSystem>(&out)) {
            reduced = &ns->sys;
            tr = &ns->transcript;
        } else {
            const auto& deg = std::get<Degenerate>(out);
            if (deg.kind != DegenerateKind::AllFree) continue;
            reduced = &deg.residual;
            tr = &deg.transcript;
        }
        const Field& f = *s.field;
        auto original = exhaustive_solutions(s);
        auto image = exhaustive_solutions(*reduced);
        std::set<std::vector<Elt>> image_set(image.begin(), image.end());
        std::set<std::vector<Elt>> pushed_set;
        for (const auto& x : original) {
            auto y = push_solution(f, *tr, x);
            EXPECT_TRUE(image_set.count(y)) << emit_instance(s);
            EXPECT_EQ(lift_solution(f, *tr, y), x) << emit_instance(s);
            pushed_set.insert(std::move(y));
        }
        EXPECT_EQ(pushed_set.size(), original.size());
        for (const auto& y : image) {
            auto x = lift_solution(f, *tr, y);
            EXPECT_TRUE(is_solution(s, x)) << emit_instance(s);
        }
    }
}

TEST(Normalize, IsIdempotent) {
    for (const auto& s : property_instances()) {
        auto out = normalize(s);
        const auto* ns = std::get_if<NormalizedSystem>(&out);
        if (!ns) continue;
        EXPECT_FALSE(normal_form_violation(ns->sys).has_value()) << emit_instance(s);
        auto again = normalize(ns->sys);
        const auto& ns2 = as_normalized(again);
        EXPECT_TRUE(ns2.transcript.empty()) << emit_instance(s);
        EXPECT_TRUE(systems_equal(ns2.sys, ns->sys)) << emit_instance(s);
    }
}

TEST(Normalize, PulledBackRemovalsPreserveThePrunedCount) {
    for (const auto& s : property_instances()) {
        auto out = normalize(s);
        const auto* ns = std::get_if<NormalizedSystem>(&out);
        if (!ns) continue;
        const Field& f = *s.field;
        for (int i = 0; i < ns->sys.m(); ++i) {
            for (Elt v : ns->sys.sets[i]) {
                std::vector<Removal> removals{{i, v}};
                LinSystem pruned_norm = ns->sys;
                pruned_norm.sets = apply_removals(pruned_norm.sets, removals);
                LinSystem pruned_orig = s;
                pruned_orig.sets = apply_removals(
                    pruned_orig.sets, pull_back_removals(f, ns->transcript, removals));
                EXPECT_EQ(exhaustive_count(pruned_orig), exhaustive_count(pruned_norm))
                    << emit_instance(s) << "removal X" << i + 1 << ": " << v;
            }
        }
        // emptying one normalized set must kill every original solution
        std::vector<Removal> all;
        for (Elt v : ns->sys.sets[0]) all.push_back({0, v});
        LinSystem pruned = s;
        pruned.sets = apply_removals(pruned.sets, pull_back_removals(f, ns->transcript, all));
        EXPECT_EQ(exhaustive_count(pruned), 0u) << emit_instance(s);
    }
}

TEST(Normalize, NormalizedGeneratorOutputsAreFixedPoints) {
    for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
        LinSystem s = random_normalized_system(make_field(5), 2, 5, seed, 0.5, 1);
        EXPECT_FALSE(normal_form_violation(s).has_value());
        auto out = normalize(s);
        const auto& ns = as_normalized(out);
        EXPECT_TRUE(ns.transcript.empty());
        EXPECT_TRUE(systems_equal(ns.sys, s));
    }
}

}  // namespace
