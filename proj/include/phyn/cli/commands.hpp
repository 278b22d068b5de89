#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "phyn/analytic.hpp"
#include "phyn/cli/io.hpp"
#include "phyn/hedge.hpp"
#include "phyn/lattice.hpp"
#include "phyn/mathcore.hpp"
#include "phyn/pde.hpp"
#include "phyn/processes.hpp"
#include "phyn/quizoracle.hpp"
#include "phyn/rates.hpp"

namespace phyn::cli {

struct Io {
    std::ostream& out;
    std::ostream& err;
};

/// Shared vanilla-option inputs.
struct OptionArgs {
    std::string kind = "call";
    double spot = 100.0, strike = 100.0, rate = 0.05, sigma = 0.2, t = 0.0, maturity = 1.0;

    void bind(Binder& b) {
        b.add("kind", kind, "call, put or binary");
        b.add("spot", spot, "spot price");
        b.add("strike", strike, "strike");
        b.add("rate", rate, "continuously compounded rate (1/year)");
        b.add("sigma", sigma, "volatility (1/sqrt(year))");
        b.add("t", t, "valuation time (years)");
        b.add("maturity", maturity, "maturity (years)");
    }
    PriceSpec spec() const {
        PriceSpec s{spot, strike, rate, sigma, t, maturity};
        s.validate();
        return s;
    }
    json inputs() const {
        return json{{"kind", kind},        {"spot", spot}, {"strike", strike}, {"rate", rate},
                    {"sigma", sigma},      {"t", t},       {"maturity", maturity}};
    }
};

/// Discounted terminal payoff under exact risk-neutral GBM sampling.
inline Estimate mc_option_price(OptionKind kind, const PriceSpec& s, std::size_t n_paths, RngSeed seed) {
    const double tau = s.tau(), disc = std::exp(-s.r * tau);
    const double drift = (s.r - 0.5 * s.sigma * s.sigma) * tau, sd = s.sigma * std::sqrt(tau);
    return monte_carlo(n_paths, seed, [&](Rng& rng) { return disc * payoff(kind, s.z * std::exp(drift + sd * rng.normal()), s.k); });
}

struct PriceCommand {
    OptionArgs opt;
    std::size_t mc_paths = 0;
    std::uint64_t seed = default_seed.value;

    void bind(Binder& b) {
        opt.bind(b);
        b.add("mc_paths", mc_paths, "Monte Carlo paths for a simulated cross-check (0: none)");
        b.add("seed", seed, "Monte Carlo seed");
    }

    json run() const {
        const auto kind = parse_option_kind(opt.kind);
        const auto s = opt.spec();
        json j{{"command", "price"}, {"inputs", opt.inputs()}};
        j["value"] = tagged(bs_price(kind, s), "currency");
        if (s.tau() > 0.0) {
            const auto g = bs_greeks(kind, s);
            j["greeks"] = json{{"delta", tagged(g.delta, "currency per unit spot")},
                               {"gamma", tagged(g.gamma, "currency per unit spot squared")},
                               {"vega", tagged(g.vega, "currency per unit volatility")},
                               {"theta", tagged(g.theta, "currency per year")},
                               {"rho", tagged(g.rho, "currency per unit rate")}};
        }
        if (mc_paths > 0) {
            j["monte_carlo"] = tagged(mc_option_price(kind, s, mc_paths, RngSeed{seed}), "currency");
            j["seed"] = seed;
        }
        return j;
    }
};

struct TreeCommand {
    OptionArgs opt;
    std::size_t steps = 1024;
    std::string ledger_csv;

    void bind(Binder& b) {
        opt.bind(b);
        b.add("steps", steps, "binomial steps");
        b.add("ledger_csv", ledger_csv, "write the European replication ledger to this CSV");
    }

    json run() const {
        const auto kind = parse_option_kind(opt.kind);
        const auto s = opt.spec();
        if (!(s.tau() > 0.0)) throw parameter_error("tree: maturity must be after the valuation time");
        const auto tree = BinomialTree::crr(s.z, s.r, s.sigma, s.tau(), steps);
        const double k = s.k;
        const auto f = [kind, k](double x) { return payoff(kind, x, k); };
        const auto eu = price_european(tree, TreeClaim::terminal(f));
        const double am = price_american(tree, TreeClaim::terminal(f, Exercise::American));
        if (!ledger_csv.empty()) {
            std::ostringstream os;
            write_ledger_csv(os, eu.ledger);
            emit(os.str(), ledger_csv, std::cout);
        }
        json j{{"command", "tree"}, {"inputs", opt.inputs()}, {"steps", steps}};
        j["european"] = tagged(eu.value, "currency");
        j["american"] = tagged(am, "currency");
        j["early_exercise_premium"] = tagged(am - eu.value, "currency");
        j["analytic_european"] = tagged(bs_price(kind, s), "currency");
        j["self_financing_residual"] = tagged(self_financing_residual(eu.ledger), "currency");
        return j;
    }
};

struct PdeCommand {
    OptionArgs opt;
    std::string scheme = "cn";
    std::size_t nx = 400, nt = 400;
    double width = 6.0;

    void bind(Binder& b) {
        opt.bind(b);
        b.add("scheme", scheme, "ftcs or cn");
        b.add("nx", nx, "space nodes");
        b.add("nt", nt, "time steps");
        b.add("width", width, "grid half-width in standard deviations");
    }

    json run() const {
        const auto kind = parse_option_kind(opt.kind);
        const auto sch = parse_scheme(scheme);
        const auto s = opt.spec();
        const double k = s.k;
        const auto problem = transform_bs_to_diffusion(s.sigma, s.r, [kind, k](double y) { return payoff(kind, y, k); },
                                                       s.t, s.T);
        const auto grid = bs_grid(s.z, s.sigma, s.r, s.tau(), nx, nt, width);
        const auto surface = solve_pde(problem, grid, sch);
        const double v = surface.price(s.z), a = bs_price(kind, s);
        json j{{"command", "pde"}, {"inputs", opt.inputs()}, {"scheme", sch == Scheme::Ftcs ? "ftcs" : "crank_nicolson"}};
        j["grid"] = json{{"nx", nx}, {"nt", nt}, {"dx", tagged(grid.dx(), "currency")},
                         {"dt", tagged(s.tau() / static_cast<double>(nt), "years")}};
        j["value"] = tagged(v, "currency");
        j["analytic"] = tagged(a, "currency");
        j["abs_error"] = tagged(std::abs(v - a), "currency");
        return j;
    }
};

struct RatesCommand {
    std::string curve, curve_kind;
    bool nonnegative_forwards = false;
    std::vector<double> at;
    double swap_start = 0.0, swap_period = 0.5;
    std::size_t swap_payments = 0;
    std::string model = "none", option_kind = "call";
    double model_rho = 0.01, model_alpha = 0.1, option_expiry = 1.0, bond_maturity = 2.0, option_strike = 0.9;

    void bind(Binder& b) {
        b.add("curve", curve, "curve CSV (maturity_years plus discount_factor or zero_yield)")->required();
        b.add("nonnegative_forwards", nonnegative_forwards, "reject curves with negative forward rates");
        b.add("at", at, "maturities to report (default: the curve nodes)");
        b.add("swap_start", swap_start, "swap start T0 (years)");
        b.add("swap_period", swap_period, "swap period (years)");
        b.add("swap_payments", swap_payments, "number of swap payments (0: no swap)");
        b.add("model", model, "none, ho_lee or vasicek for a zero-bond option");
        b.add("model_rho", model_rho, "short-rate volatility");
        b.add("model_alpha", model_alpha, "Vasicek mean reversion (1/year)");
        b.add("option_kind", option_kind, "call or put on the zero bond");
        b.add("option_expiry", option_expiry, "option expiry (years)");
        b.add("bond_maturity", bond_maturity, "underlying bond maturity (years)");
        b.add("option_strike", option_strike, "strike in bond price units");
    }

    json run() const {
        const auto c = load_curve(curve, CurveOptions{nonnegative_forwards});
        std::vector<double> ts = at;
        if (ts.empty()) ts.assign(c.maturities().begin() + 1, c.maturities().end());
        json views = json::array();
        for (double T : ts) {
            const auto v = curve_views(c, T);
            views.push_back(json{{"maturity", tagged(T, "years")},
                                 {"discount_factor", tagged(c.discount(T), "currency per unit face")},
                                 {"zero_yield", tagged(v.yield, "1/year")},
                                 {"forward", tagged(v.forward, "1/year")}});
        }
        json j{{"command", "rates"}, {"curve", curve}};
        j["short_rate"] = tagged(c.short_rate(), "1/year");
        j["horizon"] = tagged(c.horizon(), "years");
        j["views"] = views;
        if (swap_payments > 0) {
            const Schedule s{swap_start, swap_period, swap_payments};
            s.validate();
            j["swap"] = json{{"start", tagged(swap_start, "years")},
                             {"period", tagged(swap_period, "years")},
                             {"payments", swap_payments},
                             {"swap_rate", tagged(swap_rate(c, s), "1/year")}};
        }
        if (model != "none") {
            ShortRateModel m;
            if (model == "ho_lee") m = HoLee{model_rho, 0.0};
            else if (model == "vasicek") m = Vasicek{model_rho, 0.0, model_alpha};
            else throw parameter_error("unknown model '" + model + "' (expected none, ho_lee or vasicek)");
            const auto kind = parse_option_kind(option_kind);
            j["bond_option"] = json{{"model", model_name(m)},
                                    {"kind", option_kind},
                                    {"expiry", tagged(option_expiry, "years")},
                                    {"bond_maturity", tagged(bond_maturity, "years")},
                                    {"strike", option_strike},
                                    {"value", tagged(bond_option(c, m, kind, option_expiry, bond_maturity, option_strike),
                                                     "currency per unit face")}};
        }
        return j;
    }
};

struct SimulateCommand {
    std::string process = "gbm", format = "json";
    double x0 = 100.0, sigma = 0.2, drift = 0.05, alpha = 1.0, maturity = 1.0;
    std::size_t steps = 252, paths = 10000;
    std::uint64_t seed = default_seed.value;

    void bind(Binder& b) {
        b.add("process", process, "brownian, gbm, ou or cir");
        b.add("format", format, "json summary or csv paths");
        b.add("x0", x0, "initial value (spot for gbm, short rate for ou/cir)");
        b.add("sigma", sigma, "volatility");
        b.add("drift", drift, "gbm log-drift mu, or ou/cir level nu");
        b.add("alpha", alpha, "mean reversion (1/year)");
        b.add("maturity", maturity, "horizon (years)");
        b.add("steps", steps, "time steps");
        b.add("paths", paths, "number of paths");
        b.add("seed", seed, "seed");
    }

    /// Paths plus the units of the state and of its square.
    struct Units {
        const char* level;
        const char* squared;
    };

    std::pair<SamplePath, Units> path(std::size_t i) const {
        const TimeGrid g{0.0, maturity, steps};
        const RngSeed s{seed};
        if (process == "brownian") return {simulate_brownian(g, s, i), {"sqrt(year)", "year"}};
        if (process == "gbm") return {simulate_gbm(GbmParams{x0, sigma, drift}, g, s, nullptr, i), {"currency", "currency^2"}};
        if (process == "ou") return {simulate_ou(OuParams{x0, sigma, drift, alpha}, g, s, i), {"1/year", "1/year^2"}};
        if (process == "cir") return {simulate_cir(CirParams{x0, sigma, drift, alpha}, g, s, i), {"1/year", "1/year^2"}};
        throw parameter_error("unknown process '" + process + "' (expected brownian, gbm, ou or cir)");
    }

    std::string run() const {
        if (paths < 1) throw parameter_error("simulate: need at least one path");
        if (format == "csv") {
            std::ostringstream os;
            for (std::size_t i = 0; i < paths; ++i) write_path_csv(os, path(i).first, i == 0, static_cast<long>(i));
            return os.str();
        }
        if (format != "json") throw parameter_error("unknown format '" + format + "' (expected json or csv)");
        const Units units = path(0).second;
        const auto terminal = parallel_map<double>(paths, [&](std::size_t i) { return path(i).first.state.back(); });
        Moments m;
        for (double x : terminal) m.add(x);
        json j{{"command", "simulate"}, {"process", process}, {"seed", seed}, {"paths", paths}, {"steps", steps},
               {"maturity", tagged(maturity, "years")}};
        j["terminal_mean"] = tagged(m.mean_estimate(), units.level);
        j["terminal_variance"] = tagged(m.variance_estimate(), units.squared);
        if (process == "ou") {
            const auto mo = ou_moments(OuParams{x0, sigma, drift, alpha}, maturity);
            j["theory"] = json{{"mean", tagged(mo.mean, units.level)}, {"variance", tagged(mo.variance, units.squared)}};
        }
        return to_text(j);
    }
};

struct HedgeCommand {
    OptionArgs opt;
    std::size_t rebalances = 64, paths = 2000;
    std::uint64_t seed = default_seed.value;
    std::optional<double> mu, pin;
    std::string ledger_csv;

    void bind(Binder& b) {
        opt.bind(b);
        b.add("rebalances", rebalances, "rebalancing dates");
        b.add("paths", paths, "simulated paths");
        b.add("seed", seed, "seed");
        b.add("mu", mu, "real-world drift (default: the rate)");
        b.add("pin", pin, "condition every path on this terminal spot");
        b.add("ledger_csv", ledger_csv, "write the hedge ledger of path 0 to this CSV");
    }

    json run() const {
        const auto kind = parse_option_kind(opt.kind);
        HedgeOptions ho;
        ho.mu = mu;
        ho.pinned_terminal = pin;
        ho.keep_ledger = !ledger_csv.empty();
        const auto h = run_delta_hedge(kind, opt.spec(), rebalances, RngSeed{seed}, paths, ho);
        if (h.ledger) {
            std::ostringstream os;
            os.precision(17);
            os << "t,stock,phi,psi,value,cash_flow\n";
            for (const auto& s : *h.ledger)
                os << s.t << ',' << s.stock << ',' << s.phi << ',' << s.psi << ',' << s.value << ',' << s.cash_flow << '\n';
            emit(os.str(), ledger_csv, std::cout);
        }
        json j{{"command", "hedge"}, {"inputs", opt.inputs()}, {"seed", seed}, {"rebalances", rebalances}, {"paths", paths}};
        j["price"] = tagged(h.price, "currency");
        j["mean_error"] = tagged(h.mean_error, "currency");
        j["error_std"] = tagged(h.std_error, "currency");
        j["min_error"] = tagged(h.min_error, "currency");
        j["max_error"] = tagged(h.max_error, "currency");
        j["max_abs_phi"] = tagged(h.max_abs_phi, "shares");
        j["phi_slope"] = tagged(h.phi_slope, "log-log slope");
        j["clipped"] = h.clipped;
        j["pathology"] = h.pathology;
        return j;
    }
};

struct QuizCommand {
    std::string format = "table";
    std::uint64_t seed = default_seed.value;
    std::size_t samples = 1000000;

    void bind(Binder& b) {
        b.add("format", format, "table or json");
        b.add("seed", seed, "seed for the Monte Carlo verifiers");
        b.add("samples", samples, "Monte Carlo samples per verifier");
    }

    std::pair<std::string, bool> run() const {
        const auto rows = run_quiz_suite(QuizOptions{RngSeed{seed}, samples});
        bool all = true;
        for (const auto& r : rows) all = all && r.pass();
        if (format == "json") {
            json arr = json::array();
            for (const auto& r : rows) {
                json x{{"name", r.name}, {"closed_form", r.closed_form}};
                if (!r.closed_form_text.empty()) x["exact"] = r.closed_form_text;
                x["verifier"] = r.verifier;
                x["verifier_estimate"] = r.verifier_estimate;
                x[r.statistical ? "verifier_std_error" : "tolerance"] = r.verifier_error;
                x["pass"] = r.pass();
                arr.push_back(x);
            }
            return {to_text(json{{"command", "quiz"}, {"seed", seed}, {"samples", samples}, {"results", arr}}), all};
        }
        if (format != "table") throw parameter_error("unknown format '" + format + "' (expected table or json)");
        std::ostringstream os;
        os.precision(12);
        os << "seed " << seed << ", " << samples << " samples per Monte Carlo verifier\n";
        os << std::left;
        for (const auto& r : rows) {
            os.width(32);
            os << r.name << ' ';
            os.width(20);
            os << (r.closed_form_text.empty() ? std::to_string(r.closed_form) : r.closed_form_text) << ' ';
            os.width(20);
            os << r.verifier_estimate << ' ';
            os << (r.statistical ? "se  " : "tol ");
            os.width(20);
            os << r.verifier_error << ' ' << (r.pass() ? "PASS" : "FAIL") << '\n';
        }
        return {os.str(), all};
    }
};

} // namespace phyn::cli
