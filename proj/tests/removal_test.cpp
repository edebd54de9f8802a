#include <linrem/instances.hpp>
#include <linrem/removal.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "support.hpp"

namespace {

using namespace linrem;
using testsupport::exhaustive_count;
using testsupport::exhaustive_solutions;
using testsupport::make;
using testsupport::worked_instance;

TEST(Removal, CountSolutionsMatchesTheExhaustiveOracle) {
    std::vector<LinSystem> inputs;
    inputs.push_back(worked_instance());
    auto f5 = make_field(5);
    inputs.push_back(make(f5, {{1, 2, 3}, {0, 1, 4}}, {1, 2},
                          {{0, 1, 2}, {1, 3}, {0, 2, 4}}));
    struct Params {
        std::uint32_t p, n;
        int k, m;
        std::uint64_t seed;
    };
    const Params grid[] = {
        {2, 1, 1, 4, 301}, {2, 1, 2, 5, 302}, {3, 1, 2, 5, 303}, {2, 2, 1, 4, 304},
        {5, 1, 2, 4, 305}, {7, 1, 1, 3, 306}, {3, 2, 1, 3, 307}, {5, 1, 3, 5, 308},
    };
    for (const auto& gp : grid)
        inputs.push_back(random_system(make_field(gp.p, gp.n), gp.k, gp.m, gp.seed, 0.6, 0));
    for (const LinSystem& s : inputs) {
        SolutionCount sc = count_solutions(s, 100'000'000);
        auto expected = exhaustive_solutions(s);
        EXPECT_EQ(sc.count, expected.size()) << emit_instance(s);
        ASSERT_TRUE(sc.collected);
        std::set<std::vector<Elt>> lhs(sc.solutions.begin(), sc.solutions.end());
        std::set<std::vector<Elt>> rhs(expected.begin(), expected.end());
        EXPECT_EQ(lhs, rhs);
    }
}

TEST(Removal, CountSolutionsEnforcesItsBudget) {
    // one equation in three variables: q^2 = 25 parametrized assignments
    try {
        count_solutions(worked_instance(), 10);
        FAIL() << "expected a budget error";
    } catch (const BudgetError& e) {
        EXPECT_EQ(e.required, 25u);
        EXPECT_EQ(e.budget, 10u);
    }
    EXPECT_EQ(count_solutions(worked_instance(), 25).count, 2u);
}

TEST(Removal, MinHittingSetSolvesSmallCases) {
    EXPECT_TRUE(min_hitting_set({}).empty());
    EXPECT_EQ(min_hitting_set({{5}}), (std::vector<std::uint64_t>{5}));
    {
        std::vector<std::vector<std::uint64_t>> sets{{1, 2}, {2, 3}, {3, 4}};
        auto hit = min_hitting_set(sets);
        EXPECT_EQ(hit.size(), 2u);
        for (const auto& s : sets)
            EXPECT_TRUE(std::any_of(s.begin(), s.end(), [&](std::uint64_t v) {
                return std::find(hit.begin(), hit.end(), v) != hit.end();
            }));
    }
    {
        // one shared element beats picking per-set
        std::vector<std::vector<std::uint64_t>> sets{{1, 9}, {2, 9}, {3, 9}, {4, 9}};
        EXPECT_EQ(min_hitting_set(sets), (std::vector<std::uint64_t>{9}));
    }
}

TEST(Removal, HittingStrategiesAreOrderedBySize) {
    LinSystem s = worked_instance();
    KernelCertificate cert = build_certificate(s.a);
    BigHypergraph kk(s.field, cert.c, cert.s, s.sets, 1);
    auto solutions = exhaustive_solutions(s);
    ASSERT_EQ(solutions.size(), 2u);

    auto exact = hitting_edge_set(kk, solutions, HitStrategy::Exact);
    auto greedy = hitting_edge_set(kk, solutions, HitStrategy::Greedy);
    auto all = hitting_edge_set(kk, solutions, HitStrategy::AllCopyEdges);
    EXPECT_LE(exact.size(), greedy.size());
    EXPECT_LE(greedy.size(), all.size());
    // both solutions share the label 3 at color 1, so their copies partition
    // the same 5-edge pool there: 10 + 5 + 10 distinct keys in the union
    EXPECT_EQ(all.size(), 25u);

    // every choice hits every copy
    for (const auto& chosen : {exact, greedy, all}) {
        EXPECT_TRUE(std::is_sorted(chosen.begin(), chosen.end()));
        EXPECT_EQ(kk.count_copies(1'000'000, 1, &chosen), 0u);
    }
}

TEST(Removal, HittingBudgetsAreEnforced) {
    LinSystem s = worked_instance();
    KernelCertificate cert = build_certificate(s.a);
    BigHypergraph kk(s.field, cert.c, cert.s, s.sets, 1);
    auto solutions = exhaustive_solutions(s);

    HitBudgets tiny_edges;
    tiny_edges.materialize_cap = 10;  // 25 edges exist
    EXPECT_THROW(hitting_edge_set(kk, solutions, HitStrategy::Greedy, tiny_edges), BudgetError);

    HitBudgets tiny_copies;
    tiny_copies.exact_copy_cap = 5;  // 10 copies
    EXPECT_THROW(hitting_edge_set(kk, solutions, HitStrategy::Exact, tiny_copies), BudgetError);
    EXPECT_NO_THROW(hitting_edge_set(kk, solutions, HitStrategy::Greedy, tiny_copies));
}

TEST(Removal, PigeonholeConvertsSaturatedPools) {
    LinSystem s = worked_instance();
    KernelCertificate cert = build_certificate(s.a);
    BigHypergraph kk(s.field, cert.c, cert.s, s.sets, 1);
    auto all_keys = kk.materialize(100);
    std::vector<std::uint64_t> pool01;
    for (std::uint64_t key : all_keys) {
        auto e = kk.decode_edge(key);
        if (e.color == 0 && e.label == 1) pool01.push_back(key);
    }
    ASSERT_EQ(pool01.size(), 5u);

    // a full pool: m*count = 15 >= q^k = 5, so (set 0, element 1) is removed
    EXPECT_EQ(pigeonhole_elements(kk, pool01),
              (std::vector<Removal>{{0, 1}}));
    // two edges: 3*2 >= 5 still clears the q^k/m threshold
    EXPECT_EQ(pigeonhole_elements(kk, {pool01[0], pool01[1]}),
              (std::vector<Removal>{{0, 1}}));
    // one edge: 3*1 < 5 does not
    EXPECT_TRUE(pigeonhole_elements(kk, {pool01[0]}).empty());
    EXPECT_TRUE(pigeonhole_elements(kk, {}).empty());
}

TEST(Removal, PipelineOnTheWorkedInstance) {
    RemovalReport rep = removal_pipeline(worked_instance());
    EXPECT_EQ(rep.status, "ok");
    EXPECT_EQ(rep.strategy, "greedy");
    EXPECT_EQ(rep.p, 5u);
    EXPECT_EQ(rep.q, 5u);
    EXPECT_EQ(rep.cert_k, 1);
    EXPECT_EQ(rep.cert_m, 3);
    EXPECT_EQ(rep.threshold_num, 5u);
    EXPECT_EQ(rep.threshold_den, 3);
    EXPECT_EQ(rep.solutions_before, 2u);
    EXPECT_EQ(rep.copies_before, 10u);
    EXPECT_GE(rep.edge_set_size, 2u);  // two edge-disjoint solutions need >= 2 hits
    EXPECT_TRUE(rep.h_free);
    EXPECT_TRUE(rep.normalized_solution_free);
    EXPECT_TRUE(rep.original_solution_free);
    EXPECT_TRUE(rep.pigeonhole_bound_ok);
    EXPECT_TRUE(rep.counting_identity_ok);
    EXPECT_EQ(rep.final_solutions, 0u);
    EXPECT_NE(rep.certificate_digest, 0u);
    EXPECT_FALSE(rep.removed_original.empty());

    // the independent oracle: one deletion suffices here (X2 = {3} hits both
    // solutions), and the pipeline can never beat the optimum
    EXPECT_EQ(min_element_removal_bruteforce(worked_instance()), 1u);
    EXPECT_GE(rep.removed_original.size(), 1u);

    // applying the reported removals to the original really kills everything
    LinSystem pruned = worked_instance();
    pruned.sets = apply_removals(std::move(pruned.sets), rep.removed_original);
    EXPECT_EQ(exhaustive_count(pruned), 0u);
}

TEST(Removal, PipelineReportsSolutionFreeInputsAsOkWithNothingToDo) {
    auto f = make_field(5);
    LinSystem s = make(f, {{1, 1, 1}}, {0}, {{1, 2}, {3}, {4}});
    ASSERT_EQ(exhaustive_count(s), 0u);
    RemovalReport rep = removal_pipeline(s);
    EXPECT_EQ(rep.status, "ok");
    EXPECT_EQ(rep.solutions_before, 0u);
    EXPECT_EQ(rep.copies_before, 0u);
    EXPECT_EQ(rep.edge_set_size, 0u);
    EXPECT_EQ(rep.removed_pairs, 0u);
    EXPECT_TRUE(rep.h_free);
    EXPECT_TRUE(rep.original_solution_free);
    EXPECT_EQ(rep.final_solutions, 0u);
}

TEST(Removal, PipelineClassifiesDegenerateInputs) {
    auto f = make_field(5);
    {
        LinSystem s = make(f, {{1, 1, 1}, {2, 2, 2}}, {0, 1},
                           {{0, 1}, {0, 1}, {0, 1}});
        RemovalReport rep = removal_pipeline(s);
        EXPECT_EQ(rep.status, "inconsistent");
        EXPECT_EQ(rep.solutions_before, 0u);
        EXPECT_EQ(rep.final_solutions, 0u);
        EXPECT_TRUE(rep.original_solution_free);
    }
    {
        // every row is too thin to certify; the pipeline empties the cheapest set
        LinSystem s = make(f, {{1, 0, 1, 0}, {0, 1, 0, 1}}, {0, 0},
                           {{0, 1, 2}, {0, 4}, {0, 1, 2, 3}, {0, 1}});
        RemovalReport rep = removal_pipeline(s);
        EXPECT_EQ(rep.status, "all-free");
        EXPECT_EQ(rep.cert_k, 0);
        EXPECT_GT(rep.removed_pairs, 0u);
        EXPECT_TRUE(rep.original_solution_free);
        EXPECT_EQ(rep.final_solutions, 0u);
        LinSystem pruned = s;
        pruned.sets = apply_removals(std::move(pruned.sets), rep.removed_original);
        EXPECT_EQ(exhaustive_count(pruned), 0u);
    }
    {
        // x = 0 is forced and allowed; the empty residual system keeps its
        // empty solution no matter what is deleted
        LinSystem s = make(f, {{1}}, {0}, {{0, 2}});
        RemovalReport rep = removal_pipeline(s);
        EXPECT_EQ(rep.status, "unremovable-empty");
        EXPECT_EQ(rep.solutions_before, 1u);
        EXPECT_EQ(rep.final_solutions, 1u);
        EXPECT_TRUE(rep.removed_original.empty());
    }
}

TEST(Removal, PipelineNeverBeatsTheExactOracle) {
    struct Params {
        std::uint32_t p, n;
        int k, m;
        std::uint64_t seed;
        double density;
    };
    const Params grid[] = {
        {2, 1, 1, 4, 401, 0.8}, {2, 1, 2, 4, 402, 0.7}, {3, 1, 1, 3, 403, 0.8},
        {3, 1, 1, 4, 404, 0.6}, {2, 2, 1, 3, 405, 0.7}, {5, 1, 1, 3, 406, 0.6},
        {2, 1, 1, 5, 407, 0.7}, {3, 1, 2, 4, 408, 0.6}, {5, 1, 2, 4, 409, 0.5},
        {7, 1, 1, 3, 410, 0.5},
    };
    int compared = 0;
    for (const auto& gp : grid) {
        LinSystem s = random_system(make_field(gp.p, gp.n), gp.k, gp.m, gp.seed, gp.density, 1);
        for (HitStrategy strategy : {HitStrategy::Greedy, HitStrategy::Exact}) {
            RemovalOptions opts;
            opts.strategy = strategy;
            RemovalReport rep = removal_pipeline(s, opts);
            if (rep.status == "unremovable-empty") continue;
            EXPECT_EQ(rep.final_solutions, 0u) << emit_instance(s);
            const std::uint64_t optimum = min_element_removal_bruteforce(s);
            EXPECT_GE(rep.removed_original.size(), optimum)
                << to_string(strategy) << " on\n" << emit_instance(s);
            ++compared;
        }
    }
    EXPECT_GE(compared, 16);
}

TEST(Removal, ReportFormatting) {
    EXPECT_EQ(format_removals({{1, 3}, {4, 0}, {4, 2}}), "X2: 3; X5: 0 2");
    EXPECT_EQ(format_removals({}), "");
    RemovalReport rep = removal_pipeline(worked_instance());
    const std::string text = emit_report_text(rep);
    EXPECT_NE(text.find("status: ok\n"), std::string::npos);
    EXPECT_NE(text.find("field: 5\n"), std::string::npos);
    EXPECT_NE(text.find("threshold: 5/3\n"), std::string::npos);
    EXPECT_NE(text.find("final_solutions: 0\n"), std::string::npos);
    EXPECT_NE(text.find("certificate_digest: "), std::string::npos);
}

TEST(Removal, OracleBudgetsAreEnforced) {
    // 2 + 1 + 2 elements: tiny universe, the oracle runs regardless of count
    EXPECT_EQ(min_element_removal_bruteforce(worked_instance()), 1u);
    // enumeration budget still applies
    EXPECT_THROW(min_element_removal_bruteforce(worked_instance(), 10), BudgetError);
}

}  // namespace
