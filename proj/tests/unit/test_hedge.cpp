#include <cmath>

#include <gtest/gtest.h>

#include "phyn/hedge.hpp"
#include "phyn/mathcore.hpp"

using namespace phyn;

namespace {
PriceSpec reference_spec() { return PriceSpec{100, 100, 0.05, 0.2, 0, 1}; }
} // namespace

TEST(DeltaHedge, DeterministicPathReplicatesExactly) {
    auto s = reference_spec();
    s.sigma = 0.0;
    for (auto kind : {OptionKind::Call, OptionKind::Put}) {
        s.k = kind == OptionKind::Call ? 90 : 110;
        const auto h = run_delta_hedge(kind, s, 16, default_seed, 5);
        EXPECT_NEAR(h.max_error, 0.0, 1e-10);
        EXPECT_NEAR(h.min_error, 0.0, 1e-10);
    }
}

TEST(DeltaHedge, ErrorIsUnbiased) {
    for (auto kind : {OptionKind::Call, OptionKind::Put}) {
        const auto h = run_delta_hedge(kind, reference_spec(), 64, RngSeed{9}, 4000);
        EXPECT_TRUE(h.mean_error.within(0.0)) << h.mean_error.z_score(0.0);
    }
}

TEST(DeltaHedge, RealWorldDriftDoesNotMatter) {
    HedgeOptions opt;
    opt.mu = 0.15;
    const auto h = run_delta_hedge(OptionKind::Call, reference_spec(), 64, RngSeed{10}, 4000, opt);
    EXPECT_TRUE(h.mean_error.within(0.0)) << h.mean_error.z_score(0.0);
}

TEST(DeltaHedge, ErrorShrinksLikeInverseSqrtRebalances) {
    std::vector<double> x, y;
    for (std::size_t n : {16u, 64u, 256u}) {
        const auto h = run_delta_hedge(OptionKind::Call, reference_spec(), n, RngSeed{11}, 3000);
        x.push_back(std::log(static_cast<double>(n)));
        y.push_back(std::log(h.std_error));
    }
    const double xm = (x[0] + x[1] + x[2]) / 3, ym = (y[0] + y[1] + y[2]) / 3;
    double num = 0, den = 0;
    for (int i = 0; i < 3; ++i) {
        num += (x[i] - xm) * (y[i] - ym);
        den += (x[i] - xm) * (x[i] - xm);
    }
    EXPECT_NEAR(num / den, -0.5, 0.125);
    EXPECT_NEAR(std::exp(y[0] - y[2]), 4.0, 1.0);
}

TEST(DeltaHedge, BinaryPinnedAtStrikeIsFlagged) {
    HedgeOptions opt;
    opt.pinned_terminal = 100.0;
    const auto b = run_delta_hedge(OptionKind::Binary, reference_spec(), 256, RngSeed{12}, 500, opt);
    EXPECT_TRUE(b.pathology);
    EXPECT_LT(b.phi_slope, -0.4);
    EXPECT_GT(b.phi_slope, -0.7);
    const auto c = run_delta_hedge(OptionKind::Call, reference_spec(), 256, RngSeed{12}, 500, opt);
    EXPECT_FALSE(c.pathology);
    EXPECT_LE(c.max_abs_phi, 1.0);
}

TEST(DeltaHedge, LedgerIsSelfFinancing) {
    HedgeOptions opt;
    opt.keep_ledger = true;
    const auto h = run_delta_hedge(OptionKind::Put, reference_spec(), 32, RngSeed{13}, 3, opt);
    ASSERT_TRUE(h.ledger);
    const auto& L = *h.ledger;
    ASSERT_EQ(L.size(), 33u);
    EXPECT_NEAR(L.front().cash_flow, h.price, 1e-12);
    EXPECT_NEAR(L.front().value, h.price, 1e-12);
    for (std::size_t k = 1; k < L.size(); ++k) {
        EXPECT_EQ(L[k].cash_flow, 0.0);
        // yesterday's holdings at today's prices equal today's value
        const double carried = L[k - 1].phi * L[k].stock + L[k - 1].psi * std::exp(0.05 * L[k].t);
        EXPECT_NEAR(carried, L[k].value, 1e-10);
    }
    EXPECT_NEAR(L.back().value - std::max(100.0 - L.back().stock, 0.0), h.errors.front(), 1e-12);
}

TEST(DeltaHedge, DeterministicAcrossWorkerCounts) {
    HedgeOptions one, four;
    one.workers = 1;
    four.workers = 4;
    const auto a = run_delta_hedge(OptionKind::Call, reference_spec(), 32, RngSeed{14}, 200, one);
    const auto b = run_delta_hedge(OptionKind::Call, reference_spec(), 32, RngSeed{14}, 200, four);
    EXPECT_EQ(a.errors, b.errors);
}

TEST(DeltaHedge, Validation) {
    EXPECT_THROW(run_delta_hedge(OptionKind::Call, reference_spec(), 0, default_seed, 1), parameter_error);
    auto s = reference_spec();
    s.sigma = -1;
    EXPECT_THROW(run_delta_hedge(OptionKind::Call, s, 4, default_seed, 1), parameter_error);
}

TEST(EarlyExercise, SuboptimalHolderLeavesIssuerSurplus) {
    const auto spec = reference_spec();
    const auto s = early_exercise_surplus(spec, 0.5, 500, RngSeed{15}, 2000);
    const auto rep = run_delta_hedge(OptionKind::Call, spec, 500, RngSeed{15}, 2000);
    EXPECT_GT(s.n_exercised, 500u);
    // exercised early: the hedge holds at least the intrinsic value plus the interest on the strike
    EXPECT_GT(s.min_exercised_surplus, 0.0);
    EXPECT_GE(s.min_surplus, -8 * rep.std_error);
    EXPECT_GT(s.mean_surplus, 0.0);
}

TEST(Rollup, Examples) {
    const auto flat = DiscountCurve::flat(0.04, 10);
    EXPECT_NEAR(rollup_payments({{2.5, 5.0}}, flat, 5.0), 2.5, 1e-14);
    EXPECT_NEAR(rollup_payments({{1, 1.0}, {1, 3.0}}, flat, 5.0), std::exp(0.04 * 4) + std::exp(0.04 * 2), 1e-13);
    EXPECT_THROW(rollup_payments({{1, 6.0}}, flat, 5.0), domain_error);
}

TEST(Rollup, PresentValueMatchesPerPaymentValuation) {
    Rng rng(RngSeed{16});
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> ts, ps;
        double t = 0, lp = 0;
        for (int i = 0; i < 8; ++i) {
            t += 0.2 + rng.uniform();
            lp -= (0.0 + 0.08 * rng.uniform()) * t;
            ts.push_back(t);
            ps.push_back(std::exp(lp));
        }
        const DiscountCurve c(ts, ps);
        std::vector<Payment> pay;
        double pv = 0;
        for (int i = 0; i < 6; ++i) {
            const Payment p{rng.uniform() * 3, rng.uniform() * c.horizon() * 0.9};
            pay.push_back(p);
            pv += p.amount * c.discount(p.time);
        }
        const double T = c.horizon() * 0.95;
        EXPECT_NEAR(c.discount(T) * rollup_payments(pay, c, T), pv, 1e-12 * std::max(1.0, pv));
    }
}
