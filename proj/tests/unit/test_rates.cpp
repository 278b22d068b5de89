#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "phyn/mathcore.hpp"
#include "phyn/rates.hpp"

using namespace phyn;

namespace {

DiscountCurve sample_curve() {
    return DiscountCurve({0.5, 1, 2, 3, 5, 7, 10}, {0.985, 0.968, 0.935, 0.9, 0.83, 0.765, 0.68});
}

// P(0,T) rebuilt by integrating the forward curve segment by segment.
double reconstruct(const DiscountCurve& c, double T) {
    double s = 0;
    const auto& ts = c.maturities();
    for (std::size_t i = 0; i + 1 < ts.size() && ts[i] < T; ++i) {
        s += integrate([&](double u) { return c.forward(u); }, ts[i], std::min(T, ts[i + 1]));
    }
    return std::exp(-s);
}

// Closed-form CIR B for constant coefficients.
double cir_b_closed(double rho, double alpha, double tau) {
    const double g = std::sqrt(alpha * alpha + 2 * rho * rho), e = std::expm1(g * tau);
    return 2 * e / ((g + alpha) * e + 2 * g);
}

} // namespace

// ---------- curve ----------

TEST(Curve, FlatViews) {
    const auto c = DiscountCurve::flat(0.05, 10);
    for (double T : {0.0, 0.3, 1.0, 4.7, 10.0}) {
        const auto v = curve_views(c, T);
        EXPECT_NEAR(v.yield, 0.05, 1e-14);
        EXPECT_NEAR(v.forward, 0.05, 1e-14);
        EXPECT_NEAR(c.discount(T), std::exp(-0.05 * T), 1e-15);
    }
    EXPECT_NEAR(c.short_rate(), 0.05, 1e-14);
    const DiscountCurve one({1.0}, {0.95});
    EXPECT_NEAR(one.zero_yield(1.0), -std::log(0.95), 1e-15);
}

TEST(Curve, RoundTripThroughForwards) {
    const auto c = sample_curve();
    for (double T = 0.05; T <= 10; T += 0.37) {
        EXPECT_NEAR(reconstruct(c, T), c.discount(T), 1e-8) << T;
        // f = R + T ∂_T R away from nodes
        const double h = 1e-6, dR = (c.zero_yield(T + h) - c.zero_yield(T - h)) / (2 * h);
        if (std::abs(T - std::round(T)) > 1e-3 && std::abs(T - 0.5) > 1e-3)
            EXPECT_NEAR(c.forward(T), c.zero_yield(T) + T * dR, 1e-7) << T;
    }
}

TEST(Curve, Validation) {
    EXPECT_THROW(DiscountCurve({1, 2}, {0.95, -0.1}), arbitrage_error);
    EXPECT_THROW(DiscountCurve({1, 1}, {0.95, 0.9}), arbitrage_error);
    EXPECT_THROW(DiscountCurve({1, 2}, {0.95, 0.97}, {.nonnegative_forwards = true}), arbitrage_error);
    EXPECT_NO_THROW(DiscountCurve({1, 2}, {0.95, 0.97}));
    EXPECT_THROW(sample_curve().discount(10.5), domain_error);
    EXPECT_EQ(sample_curve().discount(0.0), 1.0);
}

TEST(CurveCsv, FlatYieldFile) {
    std::istringstream in("maturity_years,zero_yield\n1,0.05\n2,0.05\n5,0.05\n");
    const auto c = read_curve_csv(in);
    for (double T : {1.0, 2.0, 5.0}) EXPECT_NEAR(c.discount(T), std::exp(-0.05 * T), 1e-15);
    EXPECT_EQ(c.maturities().front(), 0.0);
}

TEST(CurveCsv, DiscountFactorFileRoundTrips) {
    std::istringstream in("maturity_years,discount_factor\n0.5,0.985\n1,0.968\n2,0.935\n");
    const auto c = read_curve_csv(in);
    EXPECT_NEAR(c.discount(1.0), 0.968, 1e-15);
    EXPECT_NEAR(reconstruct(c, 1.7), c.discount(1.7), 1e-8);
}

TEST(CurveCsv, ErrorsNameTheRow) {
    auto msg = [](const std::string& text) {
        std::istringstream in(text);
        try {
            read_curve_csv(in);
        } catch (const validation_error& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_NE(msg("maturity_years,discount_factor\n1,0.95\n2,abc\n").find("row 2"), std::string::npos);
    EXPECT_NE(msg("maturity_years,discount_factor\n1,0.95\n2,-0.3\n").find("row 2"), std::string::npos);
    EXPECT_NE(msg("maturity_years,discount_factor\n1,0.95\n0.5,0.97\n").find("row 2"), std::string::npos);
    EXPECT_NE(msg("maturity_years,discount_factor\n1,0.95,3\n").find("row 1"), std::string::npos);
    EXPECT_NE(msg("maturity,df\n1,0.95\n").find("header"), std::string::npos);
}

// ---------- short-rate closed forms ----------

TEST(ShortRate, TrivialLimits) {
    const std::vector<ShortRateModel> models{HoLee{0.01, 0.002}, Vasicek{0.01, 0.01, 0.2}, Cir{0.05, 0.01, 0.2}};
    for (const auto& m : models) EXPECT_NEAR(short_rate_bond_price(m, 0.04, 1.5, 1.5), 1.0, 1e-15) << model_name(m);
    EXPECT_NEAR(short_rate_bond_price(HoLee{0.0, 0.0}, 0.03, 0.5, 4), std::exp(-0.03 * 3.5), 1e-15);
    EXPECT_THROW(short_rate_bond_price(BlackKarasinski{0.2, 0.1, 0.3}, 0.03, 0, 1), unsupported_error);
    EXPECT_THROW(short_rate_bond_price(Cir{0.05, 0.01, 0.2}, -0.01, 0, 1), domain_error);
}

TEST(ShortRate, GeneralCoefficientsMatchConstantClosedForms) {
    auto c = [](double v) { return TimeFn([v](double) { return v; }); };
    EXPECT_NEAR(ho_lee_g(HoLee{c(0.012), c(0.003)}, 0.04, 0.3, 4.0), ho_lee_g(HoLee{0.012, 0.003}, 0.04, 0.3, 4.0), 1e-12);
    EXPECT_NEAR(vasicek_g(Vasicek{c(0.015), c(0.01), c(0.3)}, 0.04, 0.3, 4.0),
                vasicek_g(Vasicek{0.015, 0.01, 0.3}, 0.04, 0.3, 4.0), 1e-10);
}

TEST(ShortRate, VasicekMatchesMonteCarlo) {
    const Vasicek m{0.02, 0.015, 0.3};
    const double x = 0.03, T = 3.0;
    const auto est = short_rate_discount_mc(m, x, 0, T, 100000, 1);
    EXPECT_TRUE(est.within(short_rate_bond_price(m, x, 0, T))) << est.z_score(short_rate_bond_price(m, x, 0, T));
}

TEST(ShortRate, HoLeeMatchesMonteCarlo) {
    const HoLee m{0.015, 0.004};
    const double x = 0.03, T = 4.0;
    const auto est = short_rate_discount_mc(m, x, 0, T, 100000, 1);
    EXPECT_TRUE(est.within(short_rate_bond_price(m, x, 0, T))) << est.z_score(short_rate_bond_price(m, x, 0, T));
}

TEST(ShortRate, TimeDependentEulerPathConverges) {
    const HoLee m{TimeFn([](double t) { return 0.01 + 0.005 * t; }), TimeFn([](double t) { return 0.002 * t; })};
    const auto est = short_rate_discount_mc(m, 0.03, 0, 2, 40000, 200);
    EXPECT_TRUE(est.within(short_rate_bond_price(m, 0.03, 0, 2))) << est.z_score(short_rate_bond_price(m, 0.03, 0, 2));
}

TEST(ShortRate, CirRiccatiMatchesClosedFormAndStepHalving) {
    const Cir m{0.1, 0.01, 0.25};
    for (double tau : {0.5, 2.0, 10.0}) {
        const auto a = cir_riccati(m, 0, tau, 0.0, 1000), b = cir_riccati(m, 0, tau, 0.0, 2000);
        EXPECT_NEAR(a.B, cir_b_closed(0.1, 0.25, tau), 1e-9);
        EXPECT_NEAR(a.B, b.B, 1e-9);
        EXPECT_NEAR(a.nu_int, b.nu_int, 1e-9);
    }
}

TEST(ShortRate, CirRiccatiSatisfiesPricingPde) {
    // [ν − αx]∂_x g + ∂_t g + ½xρ²[∂²_x g − (∂_x g)²] + x = 0
    const Cir m{0.12, 0.012, 0.3};
    const double T = 3.0, h = 1e-4;
    for (double t : {0.0, 0.8, 2.0})
        for (double x : {0.01, 0.05, 0.1}) {
            auto g = [&](double xx, double tt) { return cir_g(m, xx, tt, T); };
            const double gx = (g(x + h, t) - g(x - h, t)) / (2 * h);
            const double gxx = (g(x + h, t) - 2 * g(x, t) + g(x - h, t)) / (h * h);
            const double gt = (g(x, t + h) - g(x, t - (t > 0 ? h : 0))) / (t > 0 ? 2 * h : h);
            const double res = (0.012 - 0.3 * x) * gx + gt + 0.5 * x * 0.0144 * (gxx - gx * gx) + x;
            EXPECT_NEAR(res, 0.0, 1e-5) << t << " " << x;
        }
}

TEST(ShortRate, CirMonteCarloArbitratesTerminalCondition) {
    const Cir m{0.1, 0.02, 0.4};
    const double x = 0.04, T = 2.0;
    const auto est = short_rate_discount_mc(m, x, 0, T, 40000, 400);
    const double standard = std::exp(-cir_g(m, x, 0, T, 0.0));
    const double alternative = std::exp(-cir_g(m, x, 0, T, 1.0));
    EXPECT_TRUE(est.within(standard)) << est.z_score(standard);
    EXPECT_FALSE(est.within(alternative, 10));
}

TEST(ShortRate, BlackKarasinskiBySimulationOnly) {
    const BlackKarasinski m{0.2, -3.5 * 0.3, 0.3};
    const auto est = short_rate_discount_mc(m, 0.03, 0, 1, 5000, 50);
    EXPECT_GT(est.mean, 0.9);
    EXPECT_LT(est.mean, 1.0);
}

TEST(ShortRate, HoLeeVolatilityIndependentOfMaturity) {
    const HoLee m{0.013, 0.002};
    const Vasicek v{0.013, 0.002, 0.5};
    const double h = 1e-4, t = 0.5, x = 0.03;
    auto sigma = [&](const ShortRateModel& mdl, double T) {
        auto g = [&](double xx, double TT) { return short_rate_g(mdl, xx, t, TT); };
        return 0.013 * ((g(x + h, T + h) - g(x - h, T + h)) - (g(x + h, T - h) - g(x - h, T - h))) / (4 * h * h);
    };
    for (double T : {1.0, 2.0, 5.0, 9.0}) {
        EXPECT_NEAR(sigma(m, T), 0.013, 1e-7);
        EXPECT_NEAR(sigma(v, T), 0.013 * std::exp(-0.5 * (T - t)), 1e-7);
    }
}

// ---------- HJM ----------

TEST(Hjm, ZeroVolatilityFreezesCurve) {
    const auto c = sample_curve();
    const HjmModel model({c, {[](double, double) { return 0.0; }}}, 0.25, 40);
    const auto p = hjm_simulate(model, 20, default_seed);
    for (std::size_t k : {0u, 5u, 20u})
        for (std::size_t j = k; j <= 40; j += 7) EXPECT_NEAR(p.bond(k, j), c.discount(0.25 * k, 0.25 * j), 1e-12);
}

TEST(Hjm, HoLeeForwardsMatchContinuousSolution) {
    const double rho = 0.01, d = 0.05;
    const HjmModel model(HjmSurface::ho_lee(DiscountCurve::flat(0.05, 4), rho), d, 80);
    const auto p = hjm_simulate(model, 40, default_seed);
    for (std::size_t k : {1u, 10u, 40u})
        for (std::size_t l = k; l < 80; l += 9) {
            const double t = d * k, T = d * l;
            EXPECT_NEAR(p.f[k][l], 0.05 + rho * p.brownian[k][0] + 0.5 * rho * rho * t * (2 * T - t), 1e-14);
        }
}

TEST(Hjm, HoLeeClosedFormPathwise) {
    // P(t,T) = P(0,T)/P(0,t)·exp(−ρ(T−t)W_t − ½ρ²tT(T−t)); the grid sums a linear-in-u forward by the
    // left-point rule, which is off by ½ρ²tΔ(T−t) in the exponent.
    const double rho = 0.012, d = 0.02;
    const auto c = DiscountCurve::flat(0.04, 4);
    const HjmModel model(HjmSurface::ho_lee(c, rho), d, 200);
    const auto p = hjm_simulate(model, 100, RngSeed{5});
    for (std::size_t k : {10u, 50u, 100u})
        for (std::size_t j = k; j <= 200; j += 25) {
            const double t = d * k, T = d * j, W = p.brownian[k][0];
            const double closed = c.discount(t, T) * std::exp(-rho * (T - t) * W - 0.5 * rho * rho * t * T * (T - t));
            const double quad_err = 0.5 * rho * rho * t * d * (T - t);
            EXPECT_NEAR(std::log(p.bond(k, j)), std::log(closed), quad_err * 1.0001 + 1e-13);
        }
}

TEST(Hjm, DiscountedBondsAreMartingales) {
    const auto c = sample_curve();
    HjmSurface s{c, {[](double t, double T) { return 0.008 * std::exp(-0.4 * (T - t)); },
                     [](double, double T) { return 0.006 + 0.001 * T; }}};
    const HjmModel model(s, 0.25, 40);
    const std::size_t n = 10000;
    for (std::size_t k : {4u, 12u, 20u})
        for (std::size_t j : {20u, 28u, 40u}) {
            const auto est = monte_carlo(n, RngSeed{77}, [&](Rng& rng) { return model.simulate(k, rng).discounted_bond(k, j); });
            EXPECT_TRUE(est.within(c.discount(0.25 * j))) << k << " " << j << " z=" << est.z_score(c.discount(0.25 * j));
        }
}

TEST(Hjm, BeyondSurfaceIsAnError) {
    EXPECT_THROW(HjmModel(HjmSurface::ho_lee(DiscountCurve::flat(0.05, 2), 0.01), 0.1, 30), domain_error);
    const HjmModel model(HjmSurface::ho_lee(DiscountCurve::flat(0.05, 2), 0.01), 0.1, 20);
    EXPECT_THROW(hjm_simulate(model, 21, default_seed), domain_error);
}

TEST(ForwardMeasure, ShiftValues) {
    const auto zero = forward_measure_shift({DiscountCurve::flat(0.05, 5), {[](double, double) { return 0.0; }}}, 0.5, 3);
    EXPECT_EQ(zero.brownian[0], 0.0);
    EXPECT_EQ(zero.forward_drift, 0.0);
    const double rho = 0.01;
    const auto s = forward_measure_shift(HjmSurface::ho_lee(DiscountCurve::flat(0.05, 5), rho), 0.5, 3);
    EXPECT_NEAR(s.brownian[0], -rho * 2.5, 1e-14);
    EXPECT_NEAR(s.forward_drift, -rho * rho * 2.5, 1e-16);
    // Ŵ_t = W_t + ρ(τt − ½t²): derivative in t is −Σ(t,τ)
    const double tau = 3, t = 0.5, h = 1e-5;
    auto shift = [&](double u) { return rho * (tau * u - 0.5 * u * u); };
    EXPECT_NEAR((shift(t + h) - shift(t - h)) / (2 * h), -s.brownian[0], 1e-10);
}

TEST(ForwardMeasure, ForwardRateAndForwardPriceAreMartingales) {
    const auto c = sample_curve();
    const HjmModel model({c, {[](double t, double T) { return 0.01 * std::exp(-0.3 * (T - t)); }}}, 0.1, 50);
    const std::size_t J = 30, k = 20, T_idx = 50;
    const auto df = monte_carlo(10000, RngSeed{3}, [&](Rng& rng) {
        const auto p = model.simulate(k, rng, J);
        return p.f[k][J] - p.f[0][J];
    });
    EXPECT_TRUE(df.within(0.0)) << df.z_score(0.0);
    const double F0 = c.discount(5.0) / c.discount(3.0);
    const auto fp = monte_carlo(10000, RngSeed{4}, [&](Rng& rng) {
        const auto p = model.simulate(k, rng, J);
        return p.bond(k, T_idx) / p.bond(k, J);
    });
    EXPECT_TRUE(fp.within(F0)) << fp.z_score(F0);
}

// ---------- bond options ----------

TEST(BondOption, DeterministicLimit) {
    const HoLee m{0.0, 0.0};
    const double x = 0.05, F = std::exp(-x);
    EXPECT_NEAR(bond_option(m, OptionKind::Call, x, 0, 1, 2, 0.9), std::exp(-x) * (F - 0.9), 1e-14);
    EXPECT_NEAR(bond_option(m, OptionKind::Put, x, 0, 1, 2, 0.9), 0.0, 1e-14);
}

TEST(BondOption, VasicekVarianceFactorizes) {
    for (double a : {0.05, 0.3, 1.2})
        for (auto [t, tau, T] : {std::tuple{0.0, 1.0, 2.0}, {0.5, 3.0, 10.0}, {0.0, 0.25, 0.5}}) {
            const Vasicek m{TimeFn([](double) { return 0.015; }), 0.0, TimeFn([a](double) { return a; })};
            EXPECT_NEAR(vasicek_option_variance(m, t, tau, T), vasicek_option_variance_closed(0.015, a, t, tau, T), 1e-10);
        }
}

TEST(BondOption, PutCallParityAndErrors) {
    const Vasicek m{0.02, 0.01, 0.3};
    const double x = 0.04, t = 0.2, tau = 1.5, T = 4, k = 0.88;
    const double c = bond_option(m, OptionKind::Call, x, t, tau, T, k), p = bond_option(m, OptionKind::Put, x, t, tau, T, k);
    EXPECT_NEAR(c - p, short_rate_bond_price(m, x, t, T) - k * short_rate_bond_price(m, x, t, tau), 1e-14);
    EXPECT_THROW(bond_option(m, OptionKind::Call, x, 0, 3, 2, k), domain_error);
    EXPECT_THROW(bond_option(Cir{0.1, 0.01, 0.2}, OptionKind::Call, x, 0, 1, 2, k), unsupported_error);
}

TEST(BondOption, HoLeeMatchesHjmMonteCarloUnderBothMeasures) {
    const double rho = 0.01, d = 0.05, k = 0.95;
    const auto c = DiscountCurve::flat(0.05, 2);
    const HjmModel model(HjmSurface::ho_lee(c, rho), d, 40);
    const double closed = bond_option(c, HoLee{rho, 0.0}, OptionKind::Call, 1.0, 2.0, k);
    const auto q = monte_carlo(100000, RngSeed{21}, [&](Rng& rng) {
        const auto p = model.simulate(20, rng);
        return std::max(p.bond(20, 40) - k, 0.0) / p.bank[20];
    });
    EXPECT_TRUE(q.within(closed)) << q.z_score(closed);
    const auto fwd = monte_carlo(100000, RngSeed{22}, [&](Rng& rng) {
        const auto p = model.simulate(20, rng, 20);
        return c.discount(1.0) * std::max(p.bond(20, 40) - k, 0.0);
    });
    EXPECT_TRUE(fwd.within(closed)) << fwd.z_score(closed);
}

TEST(BondOption, VasicekMatchesShortRateMonteCarlo) {
    const Vasicek m{0.02, 0.012, 0.25};
    const double x = 0.04, tau = 1.0, T = 3.0;
    const double k = short_rate_bond_price(m, x, 0, T) / short_rate_bond_price(m, x, 0, tau);
    for (auto kind : {OptionKind::Call, OptionKind::Put}) {
        const double closed = bond_option(m, kind, x, 0, tau, T, k);
        const auto est = monte_carlo(100000, RngSeed{8}, [&](Rng& rng) {
            const auto s = simulate_short_rate(m, x, 0, tau, 1, rng);
            return std::exp(-s.integral) * payoff(kind, short_rate_bond_price(m, s.r, tau, T), k);
        });
        EXPECT_TRUE(est.within(closed)) << est.z_score(closed);
    }
}

// ---------- products ----------

TEST(Products, CouponBondAndParRate) {
    const auto c = sample_curve();
    const Schedule s{1.0, 0.5, 8};
    EXPECT_NEAR(coupon_bond_price(c, s, 0.0, 5.0), c.discount(1, 5), 1e-15);
    EXPECT_NEAR(coupon_bond_price(c, s, par_coupon_rate(c, s, 5.0), 5.0), 1.0, 1e-12);
    const auto flat = DiscountCurve::flat(0.04, 3);
    const Schedule one{0.0, 1.0, 1};
    const double P = std::exp(-0.04);
    EXPECT_NEAR(par_coupon_rate(flat, one, 1.0), (1 - P) / P, 1e-14);
    EXPECT_THROW(coupon_bond_price(c, s, 0.03, 4.0), domain_error);
}

TEST(Products, FloatingBond) {
    const auto c = sample_curve();
    const Schedule s{0.5, 0.25, 12};
    EXPECT_NEAR(floating_bond_value(c, s, s.last()), 1.0, 1e-12);
    double sum = 0;
    for (std::size_t i = 1; i <= s.n; ++i) sum += floating_coupon_value(c, s, i);
    EXPECT_NEAR(sum, 1.0 - c.discount(0.5, s.last()), 1e-14);
    EXPECT_NEAR(floating_bond_value(c, s, 7.0), 1.0 + c.discount(0.5, 7.0) - c.discount(0.5, s.last()), 1e-15);
}

TEST(Products, FloatingCouponMatchesHjmMonteCarlo) {
    const auto c = sample_curve();
    const HjmModel model(HjmSurface::vasicek(c, 0.01, 0.2), 0.25, 20);
    const Schedule s{0.0, 0.5, 8};
    for (std::size_t i : {2u, 5u, 8u}) {
        const std::size_t prev = 2 * (i - 1), pay = 2 * i;
        const auto est = monte_carlo(10000, RngSeed{31}, [&](Rng& rng) {
            const auto p = model.simulate(pay, rng);
            return (1.0 / p.bond(prev, pay) - 1.0) / p.bank[pay];
        });
        EXPECT_TRUE(est.within(floating_coupon_value(c, s, i))) << i << " z=" << est.z_score(floating_coupon_value(c, s, i));
    }
}

TEST(Products, SwapIdentities) {
    const auto c = sample_curve();
    const Schedule s{1.0, 0.5, 10};
    const double k = swap_rate(c, s);
    // fixed leg minus floating leg, each valued directly
    double fixed = 0, floating = 0;
    for (std::size_t i = 1; i <= s.n; ++i) {
        fixed += k * s.delta * c.discount(1.0, s.payment(i));
        floating += c.discount(1.0, s.payment(i - 1)) - c.discount(1.0, s.payment(i));
    }
    EXPECT_NEAR(fixed - floating, 0.0, 1e-12);
    EXPECT_NEAR(swap_value(c, 1.0, s, k), 0.0, 1e-12);
    EXPECT_NEAR(swap_value(c, 0.0, s, forward_swap_rate(c, 0.0, s)), 0.0, 1e-12);
    EXPECT_NEAR(forward_swap_rate(c, s.T0, s), k, 1e-14);
    const auto flat = DiscountCurve::flat(0.05, 10);
    for (double d : {0.1, 0.01, 0.001}) {
        const Schedule fs{0.0, d, static_cast<std::size_t>(std::llround(5 / d))};
        EXPECT_NEAR(swap_rate(flat, fs), 0.05, 0.05 * d);
    }
}

TEST(Products, CapletRoutesAndParity) {
    const auto c = sample_curve();
    const HoLee m{0.01, 0.0};
    const double tp = 2.0, ti = 2.5, k = 0.04;
    const double cap_a = caplet_bond_route(c, m, tp, ti, k), floor_a = caplet_bond_route(c, m, tp, ti, k, OptionKind::Put);
    EXPECT_NEAR(floor_a - cap_a, floor_cap_parity(c, 0, tp, ti, k), 1e-12);
    EXPECT_NEAR(caplet_bond_route(c, m, tp, ti, 50.0), 0.0, 1e-12);
    const BgmVolatility g{{0, 1, 2}, {{0.2, 0.25}, {0.05, 0.1}}};
    EXPECT_NEAR(g.zeta(0.5, 2.0), 0.04 * 0.5 + 0.0625 + 0.0025 * 0.5 + 0.01, 1e-15);
    const double cap_b = caplet_bgm(c, 0, tp, ti, k, g), floor_b = caplet_bgm(c, 0, tp, ti, k, g, OptionKind::Put);
    EXPECT_NEAR(floor_b - cap_b, floor_cap_parity(c, 0, tp, ti, k), 1e-12);
    EXPECT_NEAR(caplet_bgm(c, 0, tp, ti, 50.0, g), 0.0, 1e-12);
    EXPECT_THROW(caplet_bgm(c, 0, tp, ti, k, std::nullopt), parameter_error);
    EXPECT_THROW(caplet_bgm(c, 0, tp, 3.0, k, BgmVolatility{{0, 1}, {{0.2}}}), domain_error);
}

TEST(Products, CapletBondRouteMatchesHjmMonteCarlo) {
    const double rho = 0.01, d = 0.05;
    const auto c = DiscountCurve::flat(0.05, 3);
    const HjmModel model(HjmSurface::ho_lee(c, rho), d, 60);
    const std::size_t prev = 40, pay = 50;
    const double delta = 0.5, k = 0.05;
    const double closed = caplet_bond_route(c, HoLee{rho, 0.0}, 2.0, 2.5, k);
    const auto est = monte_carlo(50000, RngSeed{41}, [&](Rng& rng) {
        const auto p = model.simulate(pay, rng);
        const double L = (1.0 / p.bond(prev, pay) - 1.0) / delta;
        return delta * std::max(L - k, 0.0) / p.bank[pay];
    });
    EXPECT_TRUE(est.within(closed)) << est.z_score(closed);
}

TEST(Jamshidian, SingleCashFlowReducesToBondOption) {
    const Vasicek m{0.02, 0.012, 0.25};
    const Schedule s{1.0, 1.0, 1};
    const double x = 0.04;
    EXPECT_NEAR(coupon_bond_option(m, OptionKind::Call, x, 0, 1.5, s, 0.0, 3.0, 0.9),
                bond_option(m, OptionKind::Call, x, 0, 1.5, 3.0, 0.9), 1e-14);
}

TEST(Jamshidian, StrikesReproduceCouponBondStrike) {
    const Vasicek m{0.02, 0.012, 0.25};
    const Schedule s{0.0, 0.5, 6};
    const double kappa = 0.05, T = 3.0, k = 1.0, tau = 1.0;
    const auto j = jamshidian_strikes(m, s, kappa, T, k, tau);
    double sum = 0;
    for (std::size_t i = 0; i < j.strikes.size(); ++i) sum += j.flows.amounts[i] * j.strikes[i];
    EXPECT_NEAR(sum, k, 1e-12);
    EXPECT_EQ(j.flows.times.size(), 4u);
    // dense grid scan oracle for r*
    auto pc = [&](double r) {
        double v = 0;
        for (std::size_t i = 0; i < j.flows.times.size(); ++i) v += j.flows.amounts[i] * short_rate_bond_price(m, r, tau, j.flows.times[i]);
        return v - k;
    };
    double prev_r = -0.5, prev_v = pc(prev_r), scan = NAN;
    for (int i = 1; i <= 200000; ++i) {
        const double r = -0.5 + 2.0 * i / 200000, v = pc(r);
        if (prev_v * v <= 0) {
            scan = prev_r + (r - prev_r) * prev_v / (prev_v - v);
            break;
        }
        prev_r = r;
        prev_v = v;
    }
    EXPECT_NEAR(j.r_star, scan, 1e-8);
    EXPECT_THROW(jamshidian_strikes(m, s, kappa, T, 5.0, tau), bracket_error);
    EXPECT_THROW(jamshidian_strikes(Cir{0.1, 0.01, 0.2}, s, kappa, T, k, tau), unsupported_error);
}

TEST(Jamshidian, CouponBondOptionMatchesMonteCarlo) {
    const Vasicek m{0.02, 0.012, 0.25};
    const Schedule s{1.0, 1.0, 2};
    const double x = 0.04, kappa = 0.05, T = 3.0, tau = 1.0, k = 1.0;
    const double closed = coupon_bond_option(m, OptionKind::Call, x, 0, tau, s, kappa, T, k);
    const auto flows = coupon_cash_flows(s, kappa, T, tau);
    const auto est = monte_carlo(100000, RngSeed{51}, [&](Rng& rng) {
        const auto st = simulate_short_rate(m, x, 0, tau, 1, rng);
        double pc = 0;
        for (std::size_t i = 0; i < flows.times.size(); ++i) pc += flows.amounts[i] * short_rate_bond_price(m, st.r, tau, flows.times[i]);
        return std::exp(-st.integral) * std::max(pc - k, 0.0);
    });
    EXPECT_TRUE(est.within(closed)) << est.z_score(closed);
    EXPECT_GT(closed, 0.0);
}

TEST(Jamshidian, SwaptionIsCouponBondCallAtPar) {
    const Vasicek m{0.015, 0.012, 0.25};
    const Schedule s{1.0, 0.5, 4};
    const double x = 0.04, k = 0.045;
    EXPECT_NEAR(swaption_price(m, x, 0, s, k), coupon_bond_option(m, OptionKind::Call, x, 0, 1.0, s, k, 3.0, 1.0), 1e-15);
    EXPECT_GT(swaption_price(m, x, 0, s, k), 0.0);
}
