#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cbsim/events.hpp"
#include "cbsim/hard_family.hpp"
#include "cbsim/likelihood.hpp"
#include "cbsim/projection.hpp"
#include "cbsim/experiment.hpp"

using namespace cbsim;

TEST_CASE("hard family construction") {
    SUBCASE("smallest family: L = 1") {
        auto fam = make_hard_family(1, 4);
        CHECK(fam.L == 1);
        CHECK(fam.degenerate());
        CHECK(fam.input(1, +1).arms[0].mean == doctest::Approx(0.75));
        CHECK(fam.input(1, +1).arms[1].mean == doctest::Approx(0.25));
        CHECK(fam.input(1, -1).arms[0].mean == doctest::Approx(0.25));
        CHECK(fam.input(1, -1).star_index == 1);  // sign flip makes arm 2 optimal
    }

    SUBCASE("K=4, T=2^14 gives 4 levels") {
        auto fam = make_hard_family(4, 1 << 14);
        CHECK(fam.L == 4);
        CHECK(fam.gap(4) == doctest::Approx(0.0078125));
        CHECK(fam.input(4, +1).arms[0].mean == doctest::Approx(0.5 + 1.0 / 256.0));
    }

    SUBCASE("parameter validation") {
        CHECK_THROWS(make_hard_family(1, 1));     // 4KT < 16
        CHECK_THROWS(make_hard_family(4, 1024, 1.5));  // means leave (0,1)
    }

    SUBCASE("suffix sets shrink by two per level") {
        auto fam = make_hard_family(4, 1 << 14);
        for (int ell = 1; ell <= fam.L; ++ell)
            CHECK(fam.suffix_members(ell).size() == 2 * (fam.L - ell + 1));
    }
}

TEST_CASE("transcript likelihood") {
    auto fam = make_hard_family(4, 1 << 14);
    const Instance& i1p = fam.input(1, +1);
    const Instance& i2m = fam.input(2, -1);

    Transcript single;
    single.append(0, 1.0);
    CHECK(transcript_likelihood(i1p, single) == doctest::Approx(0.75));

    Transcript two;
    two.append(0, 1.0);
    two.append(1, 1.0);
    CHECK(transcript_likelihood(i1p, two) == doctest::Approx(0.1875));

    Transcript three;
    three.append(0, 0.0);
    three.append(0, 0.0);
    three.append(1, 1.0);
    CHECK(transcript_likelihood(i2m, three) ==
          doctest::Approx((1.0 - 0.4375) * (1.0 - 0.4375) * 0.5625));

    Transcript off_support;
    off_support.append(0, 0.5);
    CHECK(transcript_log_likelihood(i1p, off_support).zero);
    CHECK(transcript_likelihood(i1p, off_support) == 0.0);
}

TEST_CASE("log-likelihood consistency with the per-step factors") {
    auto fam = make_hard_family(4, 1 << 14);
    const Instance& inst = fam.input(2, +1);
    Transcript t = uniform_play(inst, 10000, {404, 0, 0});
    double stepwise = 0.0;
    for (const auto& e : t.entries) stepwise += std::log(inst.arms[e.arm].prob_of(e.reward));
    const auto ll = transcript_log_likelihood(inst, t);
    CHECK_FALSE(ll.zero);
    CHECK(ll.log_value == doctest::Approx(stepwise).epsilon(1e-9));
}

TEST_CASE("llr trace") {
    auto fam = make_hard_family(4, 1 << 14);
    const Instance& A = fam.input(1, +1);
    const Instance& B = fam.input(1, -1);

    SUBCASE("identical inputs: zero ratio, pure drift compensation") {
        Transcript t = uniform_play(A, 20, {77, 0, 0});
        auto trace = llr_trace(A, A, t, 1);
        for (double s : trace.steps) CHECK(s == 0.0);
        for (std::size_t i = 0; i < trace.z.size(); ++i)
            CHECK(trace.z[i] == doctest::Approx(-(11.0 / 16.0) * static_cast<double>(i)));
    }

    SUBCASE("single step ln 3 is within the per-step bound") {
        Transcript t;
        t.append(0, 1.0);
        auto trace = llr_trace(A, B, t, 1);
        CHECK(trace.steps[0] == doctest::Approx(std::log(3.0)));
        CHECK(trace.step_bound == doctest::Approx(1.25));
        CHECK(trace.step_bound_ok);
    }

    SUBCASE("oracle: the worst cell at level 1 is exactly ln 3") {
        double worst = 0.0;
        for (int arm = 0; arm < 2; ++arm)
            for (double o : {0.0, 1.0})
                worst = std::max(worst, std::abs(std::log(A.arms[arm].prob_of(o)) -
                                                 std::log(B.arms[arm].prob_of(o))));
        CHECK(worst == doctest::Approx(std::log(3.0)));
    }

    SUBCASE("opposite outcomes cancel") {
        Transcript t;
        t.append(0, 1.0);
        t.append(0, 0.0);
        auto trace = llr_trace(A, B, t, 1);
        CHECK(trace.llr.back() == doctest::Approx(0.0));
    }

    SUBCASE("zero-likelihood step throws") {
        Transcript t;
        t.append(0, 0.5);
        CHECK_THROWS_AS(llr_trace(A, B, t, 1), std::domain_error);
    }
}

TEST_CASE("conditional drift bound") {
    auto fam = make_hard_family(4, 1 << 22);  // L = 6
    REQUIRE(fam.L == 6);

    SUBCASE("A = B gives zero drift") {
        const Instance& A = fam.input(2, +1);
        auto report = drift_bound_check(A, A, fam.input(3, -1), 2);
        for (const auto& pa : report.arms) CHECK(pa.drift == doctest::Approx(0.0));
    }

    SUBCASE("worked value at level 1") {
        const Instance& A = fam.input(1, +1);
        const Instance& B = fam.input(1, -1);
        auto report = drift_bound_check(A, B, A, 1);
        CHECK(report.arms[0].drift == doctest::Approx(0.5 * std::log(3.0)));
        CHECK(report.arms[0].bound == doctest::Approx(11.0 / 16.0));
        CHECK(report.all_ok);
    }

    SUBCASE("exhaustive over levels 1..6 against a long-double oracle") {
        for (int ell = 1; ell <= 6; ++ell) {
            const double bound = 11.0 / std::pow(4.0, 2 * ell);
            const auto members = fam.suffix_members(ell);
            for (const auto& [la, sa] : members)
                for (const auto& [lb, sb] : members)
                    for (const auto& [li, si] : members) {
                        const Instance& A = fam.input(la, sa);
                        const Instance& B = fam.input(lb, sb);
                        const Instance& I = fam.input(li, si);
                        auto report = drift_bound_check(A, B, I, ell);
                        REQUIRE(report.all_ok);
                        for (std::size_t j = 0; j < 2; ++j) {
                            const long double dA = static_cast<long double>(A.arms[j].mean) - 0.5L;
                            const long double dB = static_cast<long double>(B.arms[j].mean) - 0.5L;
                            const long double dI = static_cast<long double>(I.arms[j].mean) - 0.5L;
                            const long double exact =
                                (0.5L + dI) * logl((1.0L + 2.0L * dA) / (1.0L + 2.0L * dB)) +
                                (0.5L - dI) * logl((1.0L - 2.0L * dA) / (1.0L - 2.0L * dB));
                            CHECK(report.arms[j].drift ==
                                  doctest::Approx(static_cast<double>(exact)).epsilon(1e-12));
                            REQUIRE(static_cast<double>(exact) <= bound);
                        }
                    }
        }
    }

    SUBCASE("inputs outside the suffix are rejected") {
        const Instance& A = fam.input(1, +1);
        CHECK_THROWS(drift_bound_check(A, A, A, 3));  // level-1 means too far from 1/2
    }
}

TEST_CASE("event E check") {
    auto fam = make_hard_family(4, 1 << 14, 4.0, 0.1, 0.1);  // scaled analysis mode

    SUBCASE("empty transcript passes") {
        CHECK(event_E_check(fam, Transcript{}).pass);
    }

    SUBCASE("overlong transcript is a vacuous pass") {
        Transcript t = uniform_play(fam.input(1, +1),
                                    max_qualifying_length(fam) + 1, {3, 0, 0});
        auto res = event_E_check(fam, t);
        CHECK(res.pass);
    }

    SUBCASE("degenerate family flag") {
        auto tiny = make_hard_family(1, 4);
        Transcript t;
        t.append(0, 1.0);
        auto res = event_E_check(tiny, t);
        CHECK(res.pass);
        CHECK(res.degenerate_family);
    }

    SUBCASE("a lopsided transcript within the window fails with a witness") {
        // many arm-1 successes make I_1^+ far more likely than I_1^-
        Transcript t;
        for (int i = 0; i < 10; ++i) t.append(0, 1.0);
        auto res = event_E_check(fam, t);
        CHECK_FALSE(res.pass);
        REQUIRE(res.witness.has_value());
        CHECK(res.witness->llr > 2.0 * fam.eps);
    }
}

TEST_CASE("statistical indistinguishability under a fixed test event") {
    // scaled constants so that n = 30 qualifies at level 2
    auto fam = make_hard_family(1, 64, 4.0, 0.1, 0.25);  // L = 2
    REQUIRE(fam.L == 2);
    const int ell = 2;
    const long long n = 30;
    REQUIRE(fam.lambda_lb * std::pow(4.0, 2 * ell) / std::log2(2.0) >= n);

    const Instance& A = fam.input(2, +1);
    const Instance& B = fam.input(2, -1);
    const long long M = 40000;
    // G: arm 1 pulled at least 2n/3 times (deterministic function of gamma);
    // algorithm = uniform play, identical on both inputs by construction
    auto run_side = [&](const Instance& I, std::uint64_t salt) {
        long long hits = 0;
        for (long long i = 0; i < M; ++i) {
            Transcript t = uniform_play(I, n, {salt, static_cast<std::uint64_t>(i), 0});
            long long arm1 = 0;
            for (const auto& e : t.entries) arm1 += e.arm == 0;
            const bool G = arm1 >= 2 * n / 3;
            if (G && event_E_check(fam, t).pass) ++hits;
        }
        return static_cast<double>(hits) / static_cast<double>(M);
    };
    const double pa = run_side(A, 1111);
    const double pb = run_side(B, 1111);
    const double slack = 3.0 * std::sqrt(0.25 / static_cast<double>(M)) * 2.0;
    CHECK(pa <= std::exp(2.0 * fam.eps) * pb + slack);
}

TEST_CASE("round index report") {
    auto fam = make_hard_family(2, 64, 4.0, 0.1, 0.25);  // alpha = 2

    SUBCASE("geometric boundaries put F_1 first") {
        CollabRun run;
        run.K = 2;
        run.round_boundaries = {2, 8, 32, 128};  // every ratio = threshold
        run.per_agent.resize(2);
        auto report = round_index_report(run, fam, 4);
        CHECK(report.r == 1);
    }

    SUBCASE("worked example K=2, T=64, R=2") {
        CollabRun run;
        run.K = 2;
        run.round_boundaries = {4, 64};
        run.per_agent.resize(2);
        auto report = round_index_report(run, fam, 2);
        CHECK(report.r == 2);  // 8 < sqrt(128) <= 16
        CHECK(report.m_r == 60);
        // ell from t_{r-1} = 4: the unique l with 16^{l-1} <= alpha K t < 16^l
        const double x = fam.alpha * 2.0 * 4.0;
        int expected = 0;
        for (int l = 1; l <= 8; ++l)
            if (std::pow(16.0, l - 1) <= x && x < std::pow(16.0, l)) expected = l;
        CHECK(report.ell_raw == expected);
    }

    SUBCASE("partition: the reported round is the unique first qualifier") {
        const Instance inst = Instance::bernoulli({0.75, 0.25});
        for (std::uint64_t trial = 0; trial < 30; ++trial) {
            CollabConfig cc;
            cc.K = 2;
            cc.horizon_T = 1024;
            cc.inner.lambda_grid = 4.0;
            auto run = reduce_batched_to_collab(inst, cc, {88, trial, 0});
            auto report = round_index_report(run, fam, run.rounds());
            const auto& t = run.round_boundaries;
            const double thr = std::pow(2.0 * static_cast<double>(t.back()),
                                        1.0 / run.rounds());
            int first = 0;
            for (int r = 1; r <= run.rounds() && first == 0; ++r) {
                const double prev = r == 1 ? 0.5 : static_cast<double>(t[r - 2]);
                if (static_cast<double>(t[r - 1]) / prev >= thr - 1e-9) first = r;
            }
            CHECK(report.r == first);
        }
    }
}

TEST_CASE("projection and paired regret") {
    auto fam = make_hard_family(2, 64, 4.0, 0.1, 0.25);  // alpha = 2, L = 2

    // hand-built run: K=2, round 1 of length 8 per agent, round 2 of length 16
    CollabRun run;
    run.K = 2;
    run.round_boundaries = {8, 24};
    run.per_agent.resize(2);
    for (int k = 0; k < 2; ++k) {
        for (int i = 0; i < 8; ++i)
            run.per_agent[k].append(static_cast<std::uint32_t>(i % 2), 1.0, k, 1);
        for (int i = 0; i < 16; ++i)
            run.per_agent[k].append(static_cast<std::uint32_t>(k), 0.0, k, 2);
    }

    // level 2 has tau = 2: alpha K t_0 = 2 < 16 but alpha K t_1 = 32 in [16, 256)
    auto [tau, exact] = tau_for_level(run, fam, 2);
    CHECK(tau == 2);
    CHECK(exact);

    const int R = 2;
    const double zeta = zeta_of(fam, 2, R);
    CHECK(zeta == doctest::Approx(8.0));  // (256/2) * 4^0 / (8*2)
    const long long zl = static_cast<long long>(std::floor(zeta));
    REQUIRE(zl >= 1);

    std::vector<Transcript> lasts;
    for (int k = 0; k < 2; ++k) {
        auto proj = project_transcript(run, k, 2, fam, R);
        CHECK(proj.tau == 2);
        const std::size_t expect_last =
            std::min<std::size_t>(static_cast<std::size_t>(zl), 16);
        CHECK(proj.last.size() == expect_last);
        CHECK(proj.proj.size() == 16 + expect_last);  // 2 agents x 8 entries, then the tail
        lasts.push_back(proj.last);
    }

    // Last_k segments are disjoint: agent k's round-2 entries pull arm k only
    for (const auto& e : lasts[0].entries) CHECK(e.agent == 0);
    for (const auto& e : lasts[1].entries) CHECK(e.agent == 1);

    // agent 0 always pulls arm 1 in round 2: U = 0 under I_2^+, V pays the gap
    auto pr0 = paired_regret_lower({&lasts[0], 1}, fam, 2, zl);
    CHECK(pr0.U == doctest::Approx(0.0));
    // agent 1 always pulls arm 2: mirror
    auto pr1 = paired_regret_lower({&lasts[1], 1}, fam, 2, zl);
    CHECK(pr1.V == doctest::Approx(0.0));

    auto both = paired_regret_lower(lasts, fam, 2, zl);
    CHECK(both.meets_bound);
    CHECK(both.bound == doctest::Approx(fam.gap(2) * static_cast<double>(zl) * 2.0));

    // alternating pulls meet the bound with equality
    Transcript alt;
    for (long long i = 0; i < zl; ++i)
        alt.append(static_cast<std::uint32_t>(i % 2), 0.0);
    auto pra = paired_regret_lower({&alt, 1}, fam, 2, zl);
    if (zl % 2 == 0) CHECK(pra.U == doctest::Approx(pra.V));
    CHECK(pra.U + pra.V == doctest::Approx(fam.gap(2) * static_cast<double>(zl)));
    CHECK(pra.meets_bound);
}

TEST_CASE("zeta collapse at asymptotic-scale constants is flagged") {
    auto fam = make_hard_family(4, 1 << 14);  // lambda_lb = 1e-6
    CollabRun run;
    run.K = 4;
    run.round_boundaries = {4, 16384};
    run.per_agent.resize(4);
    for (int k = 0; k < 4; ++k) {
        run.per_agent[k].append(0, 1.0, k, 1);
        run.per_agent[k].append(0, 1.0, k, 2);
    }
    auto proj = project_transcript(run, 0, 1, fam, 4);
    CHECK(proj.zeta_collapsed);
    CHECK(proj.last.empty());
}
