// Command-line driver for the K-theoretic instanton partition function
// engine: plane and blow-up series tables, identity checks, the recursion
// solver, eps -> 0 limit extractions, and the first-instanton wall-crossing
// example.  Exit codes: 0 success, 1 identity failure, 2 configuration
// error, 3 cache error.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>

#include "kinst/cache.hpp"
#include "kinst/identities.hpp"
#include "kinst/wallcross.hpp"

using namespace kinst;

namespace {

struct GlobalOpts {
    int threads = 1;
    std::string format = "text";
    std::string cache_dir;
    std::string tau_convention = "scalar";
    std::vector<std::string> directions;
    bool machine() const { return format == "machine"; }
};

Rat parse_rat(const std::string& s) {
    Rat q(s);
    q.canonicalize();
    return q;
}

std::vector<Rat> limit_directions(const GlobalOpts& g) {
    if (g.directions.empty()) return {Rat(-2), rat(-1, 2), Rat(3)};
    std::vector<Rat> out;
    for (const auto& s : g.directions) out.push_back(parse_rat(s));
    return out;
}

TauConvention tau_conv(const GlobalOpts& g) {
    if (g.tau_convention == "tau=scalar" || g.tau_convention == "scalar")
        return TauConvention::Scalar;
    if (g.tau_convention == "tau=adams" || g.tau_convention == "adams")
        return TauConvention::AdamsScaled;
    throw ConfigError("unknown convention: " + g.tau_convention);
}

std::string series_table(const LamSeries& s) {
    std::ostringstream os;
    for (const auto& [n, grades] : s.c) {
        for (const auto& [g, v] : grades) {
            RatFrac f = v.to_rat_frac();
            os << "Lambda^" << n << "  [" << g.str() << "]\n";
            os << "  num: " << f.num.str() << "\n";
            os << "  den: " << f.den.str() << "\n";
        }
    }
    return os.str();
}

// Computes or replays a cached series, then prints it.
int emit_series(const GlobalOpts& g, const std::string& key,
                const std::function<LamSeries()>& compute) {
    std::string payload;
    bool hit = false;
    if (!g.cache_dir.empty()) {
        auto cached = cache_load(g.cache_dir, key);
        if (cached) {
            payload = *cached;
            hit = true;
        }
    }
    if (!hit) {
        payload = serialize_series(compute());
        if (!g.cache_dir.empty()) cache_store(g.cache_dir, key, payload);
    }
    if (g.machine()) {
        std::cout << payload;
    } else {
        std::cout << series_table(parse_series(payload));
    }
    return 0;
}

int emit_report(const GlobalOpts& g, const CheckReport& rep) {
    std::cout << (g.machine() ? rep.machine() : rep.table());
    return rep.all_hold() ? 0 : 1;
}

std::string limits_text(const GlobalOpts& g, const std::string& name, const LimitSeries& ls) {
    std::ostringstream os;
    for (const auto& [n, v] : ls.values) {
        RatFrac f = v.to_rat_frac();
        if (g.machine())
            os << name << " L=" << n << " N=" << f.num.str() << " D=" << f.den.str() << "\n";
        else
            os << name << "  Lambda^" << n << ":  (" << f.num.str() << ") / (" << f.den.str()
               << ")\n";
    }
    return os.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact K-theoretic Nekrasov partition functions on the plane and its blow-up"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    GlobalOpts g;
    if (const char* env = std::getenv("KINST_CACHE")) g.cache_dir = env;
    app.add_option("--threads", g.threads, "worker threads for fixed-point sweeps");
    app.add_option("--format", g.format, "output format: text | machine")
        ->check(CLI::IsMember({"text", "machine"}));
    app.add_option("--cache", g.cache_dir, "cache directory (overrides KINST_CACHE)");
    app.add_option("--convention", g.tau_convention,
                   "tau patch-substitution convention: tau=scalar | tau=adams");
    app.add_option("--direction", g.directions,
                   "eps2/eps1 directions for eps -> 0 limits (rational, repeatable)");

    int rank = 1, d = 0, max_order = 2, tau_degree = 1, nf = 0;
    long cs = 0, kk = 0;
    int p = 1;
    std::vector<int> taus;
    std::vector<int> dpair;

    auto* z_cmd = app.add_subcommand("z", "plane instanton partition function table");
    z_cmd->add_option("--rank", rank)->required();
    z_cmd->add_option("--cs", cs);
    z_cmd->add_option("--max-order", max_order);
    z_cmd->add_option("--tau-degree", tau_degree);
    z_cmd->add_option("--tau", taus, "activate tau_p at linear order (repeatable)");

    auto* zhat_cmd = app.add_subcommand("zhat", "blow-up partition function table");
    zhat_cmd->add_option("--rank", rank)->required();
    zhat_cmd->add_option("--cs", cs);
    zhat_cmd->add_option("-d", d);
    zhat_cmd->add_option("-k", kk);
    zhat_cmd->add_option("--max-order", max_order);
    zhat_cmd->add_option("--tau-degree", tau_degree);
    zhat_cmd->add_option("--tau", taus);

    auto* check_cmd = app.add_subcommand("check", "verify an identity");
    std::string which;
    check_cmd->add_option("identity", which, "blowup | vanish-t | vanish-k | sym")->required();
    check_cmd->add_option("--rank", rank)->required();
    check_cmd->add_option("--cs", cs);
    check_cmd->add_option("-d", d);
    check_cmd->add_option("-k", kk);
    check_cmd->add_option("-p", p);
    check_cmd->add_option("--max-order", max_order);

    auto* solve_cmd =
        app.add_subcommand("solve", "recover coefficients from the blow-up relations");
    solve_cmd->add_option("--rank", rank)->required();
    solve_cmd->add_option("--cs", cs);
    solve_cmd->add_option("-d", dpair, "the two d values (give twice)")->expected(2);
    solve_cmd->add_option("--max-order", max_order);

    auto* f0_cmd = app.add_subcommand("f0-tau", "eps->0 limit of eps1 eps2 dlogZ/dtau_p");
    f0_cmd->add_option("--rank", rank)->required();
    f0_cmd->add_option("--cs", cs);
    f0_cmd->add_option("-p", p);
    f0_cmd->add_option("--max-order", max_order);

    auto* up_cmd = app.add_subcommand("sw-up", "Seiberg-Witten coefficient series U_p");
    up_cmd->add_option("--rank", rank)->required();
    up_cmd->add_option("--cs", cs);
    up_cmd->add_option("-p", p);
    up_cmd->add_option("--max-order", max_order);

    auto* wc_cmd = app.add_subcommand("wallcross-example", "first-instanton blow-up coefficient");
    wc_cmd->add_option("--rank", rank)->required();
    wc_cmd->add_option("--nf", nf, "number of flavors");

    CLI11_PARSE(app, argc, argv);

    try {
        thread_count() = std::max(1, g.threads);

        if (z_cmd->parsed()) {
            InsertionSpec spec;
            spec.cs_level = cs;
            spec.tau_orders = taus;
            std::ostringstream key;
            key << "z r=" << rank << " l=" << cs << " N=" << max_order << " tdeg=" << tau_degree
                << " tau=";
            for (int t : taus) key << t << ",";
            return emit_series(g, key.str(),
                               [&] { return z_inst(rank, spec, max_order, tau_degree); });
        }
        if (zhat_cmd->parsed()) {
            InsertionSpec spec;
            spec.cs_level = cs;
            spec.tau_orders = taus;
            BlowupOptions opt;
            opt.tau_conv = tau_conv(g);
            std::ostringstream key;
            key << "zhat r=" << rank << " l=" << cs << " k=" << kk << " d=" << d
                << " N=" << max_order << " tdeg=" << tau_degree
                << " conv=" << (opt.tau_conv == TauConvention::Scalar ? "scalar" : "adams")
                << " tau=";
            for (int t : taus) key << t << ",";
            return emit_series(g, key.str(), [&] {
                return zhat_inst(rank, cs, kk, d, max_order, spec, tau_degree, opt);
            });
        }
        if (check_cmd->parsed()) {
            CheckReport rep;
            if (which == "blowup")
                rep = check_blowup_eq(rank, cs, d, max_order);
            else if (which == "vanish-t")
                rep = check_vanish_t(rank, cs, d, p, max_order);
            else if (which == "vanish-k")
                rep = check_vanish_k(rank, cs, d, kk == 0 ? 1 : kk, max_order);
            else if (which == "sym")
                rep = check_sym(rank, cs, max_order);
            else
                throw ConfigError("unknown identity: " + which);
            return emit_report(g, rep);
        }
        if (solve_cmd->parsed()) {
            if (dpair.size() != 2) throw ConfigError("solve needs -d given twice");
            SolveResult res = solve_recursive(rank, cs, dpair[0], dpair[1], max_order);
            if (g.machine()) {
                std::cout << "SOLVE matches_direct=" << (res.matches_direct ? 1 : 0) << "\n";
                std::cout << serialize_series(res.recovered);
            } else {
                std::cout << "recovered coefficients "
                          << (res.matches_direct ? "match" : "DO NOT match")
                          << " the direct fixed-point sums\n";
                std::cout << series_table(res.recovered);
            }
            return res.matches_direct ? 0 : 1;
        }
        if (f0_cmd->parsed()) {
            LimitSeries ls = f0_tau_derivative(rank, cs, p, max_order, limit_directions(g));
            std::cout << limits_text(g, "dF0/dtau", ls);
            return 0;
        }
        if (up_cmd->parsed()) {
            LimitSeries ls = extract_up(rank, cs, p, max_order, limit_directions(g));
            std::cout << limits_text(g, "U_p", ls);
            return 0;
        }
        if (wc_cmd->parsed()) {
            Rat v = example_blowup_coeff(rank, nf);
            if (g.machine())
                std::cout << "WALLCROSS r=" << rank << " nf=" << nf << " value=" << v.get_str()
                          << "\n";
            else
                std::cout << v.get_str() << "\n";
            return 0;
        }
        throw ConfigError("no subcommand");
    } catch (const CacheCorrupt& e) {
        std::cerr << "cache error: " << e.what() << "\n";
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const RangeViolation& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
