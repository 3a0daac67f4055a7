#include "cm/cli.hpp"

#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cm/engine.hpp"

namespace cm {

namespace {

using nlohmann::json;

json json_poly(const std::vector<Int>& coeffs) {
    json arr = json::array();
    for (const Int& c : coeffs)
        arr.push_back(c.get_str());
    return arr;
}

std::string skind_str(SKind k) {
    switch (k) {
    case SKind::e1:
        return "e1";
    case SKind::minus_e1:
        return "-e1";
    default:
        return "random";
    }
}

json result_json(const CMResult& r) {
    json out;
    out["D"] = r.D.get_str();
    out["q"] = r.q.get_str();
    out["h"] = r.h;
    out["m"] = r.m;
    out["n"] = r.n;
    out["subgroup"] = {{"d", r.G.d}, {"e", r.G.e}, {"n", r.G.n}, {"m", r.G.m}};
    out["s"] = skind_str(r.s_kind);
    if (r.s_kind == SKind::random_s)
        out["s_coeffs"] = json_poly(r.s_coeffs);
    out["height_bits"] = r.height_bits;
    out["V"] = json_poly(r.V);
    if (!r.W.empty()) {
        json w = json::array();
        for (const auto& row : r.W)
            w.push_back(json_poly(row));
        out["W"] = w;
    }
    if (!r.wvals.empty())
        out["w"] = json_poly(r.wvals);
    out["k_list"] = r.k_list;
    out["y"] = r.y.get_str();
    out["U"] = json_poly(r.U);
    out["x"] = r.x.get_str();
    out["t"] = r.t.get_str();
    out["v"] = r.v.get_str();
    out["order"] = r.N.get_str();
    out["curve"] = {{"a", r.a.get_str()}, {"b", r.b.get_str()}};
    out["stats"] = {{"primes", r.stats.n_primes},
                    {"retries", r.stats.retries},
                    {"t_find_ms", r.stats.t_find_ms},
                    {"t_enum_ms", r.stats.t_enum_ms},
                    {"t_build_ms", r.stats.t_build_ms},
                    {"t_crt_ms", r.stats.t_crt_ms},
                    {"t_root_ms", r.stats.t_root_ms},
                    {"acc_peak_stage1", r.stats.acc_peak_stage1},
                    {"acc_peak_stage2", r.stats.acc_peak_stage2},
                    {"crt_mi_entries", r.stats.crt_mi_entries}};
    return out;
}

std::string poly_text(const std::vector<Int>& c, const std::string& var) {
    std::string s;
    for (size_t i = c.size(); i-- > 0;) {
        if (c[i] == 0 && c.size() > 1)
            continue;
        Int a = c[i];
        if (!s.empty()) {
            s += a < 0 ? " - " : " + ";
            if (a < 0)
                a = -a;
        }
        if (i == 0 || a != 1)
            s += a.get_str();
        if (i >= 1) {
            if (a != 1)
                s += "*";
            s += var;
            if (i >= 2)
                s += "^" + std::to_string(i);
        }
    }
    return s.empty() ? "0" : s;
}

} // namespace

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"CM method toolkit: roots of Hilbert class polynomials mod q via "
                 "class-field decomposition and the explicit CRT"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable output");

    std::string disc_str, q_str;
    unsigned long order = 0;
    bool all_orders = false;
    long bits = 0;
    unsigned long max_v = 0;
    std::string alg = "1", s_policy = "e1", modpoly_dir;
    uint64_t seed = 1;
    unsigned threads = 1;
    std::string a_str, b_str, n_str, mod_str;

    auto* c_cg = app.add_subcommand("classgroup", "class number, polycyclic presentation, "
                                                  "and condition-(8) subgroup candidates");
    c_cg->add_option("--disc", disc_str, "negative discriminant")->required();

    auto* c_h = app.add_subcommand("heights", "height bounds for subgroup choices");
    c_h->add_option("--disc", disc_str)->required();
    c_h->add_option("--order", order, "subgroup order (0 = best)");
    c_h->add_flag("--all", all_orders, "list every candidate");

    auto* c_fp = app.add_subcommand("find-primes", "CRT prime set for a bit bound");
    c_fp->add_option("--disc", disc_str)->required();
    c_fp->add_option("--bits", bits, "height bound in bits")->required();
    c_fp->add_option("--max-v", max_v, "admit norm-equation v up to this (default auto)");

    auto* c_hil = app.add_subcommand("hilbert", "Hilbert class polynomial over Z or mod q");
    c_hil->add_option("--disc", disc_str)->required();
    c_hil->add_option("--mod", mod_str, "compute H_D modulo this prime");
    c_hil->add_option("--seed", seed);
    c_hil->add_option("--modpoly-dir", modpoly_dir);

    auto* c_con = app.add_subcommand("construct", "construct a CM curve over F_q");
    c_con->add_option("--disc", disc_str)->required();
    c_con->add_option("--q", q_str)->required();
    c_con->add_option("--alg", alg, "1, 2, or 2L");
    c_con->add_option("--order", order, "subgroup order (0 = auto)");
    c_con->add_option("--s", s_policy, "e1, -e1, or random");
    c_con->add_option("--seed", seed);
    c_con->add_option("--threads", threads);
    c_con->add_option("--modpoly-dir", modpoly_dir);
    c_con->add_option("--max-v", max_v);

    auto* c_ver = app.add_subcommand("verify", "verify a constructed curve order");
    c_ver->add_option("--q", q_str)->required();
    c_ver->add_option("--a", a_str)->required();
    c_ver->add_option("--b", b_str)->required();
    c_ver->add_option("--order", n_str)->required();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (c_cg->parsed()) {
            Discriminant D((Int(disc_str)));
            Presentation P = Presentation::build(D);
            json out;
            out["D"] = D.value().get_str();
            out["h"] = P.h();
            json gens = json::array();
            for (const auto& g : P.generators())
                gens.push_back({{"norm", g.norm},
                                {"rel_order", g.rel_order},
                                {"relation", g.relation}});
            out["presentation"] = gens;
            json cands = json::array();
            for (const auto& c : subgroup_candidates(P))
                cands.push_back({{"d", c.d}, {"e", c.e}, {"n", c.n}, {"m", c.m}});
            out["subgroups"] = cands;
            if (as_json) {
                std::cout << out.dump(2) << "\n";
            } else {
                std::cout << "D = " << disc_str << ", h = " << P.h() << "\n";
                for (const auto& g : P.generators())
                    std::cout << "  generator norm " << g.norm << " relative order "
                              << g.rel_order << "\n";
                std::cout << "subgroup orders:";
                for (const auto& c : subgroup_candidates(P))
                    std::cout << " " << c.n;
                std::cout << "\n";
            }
            return 0;
        }
        if (c_h->parsed()) {
            Discriminant D((Int(disc_str)));
            Presentation P = Presentation::build(D);
            auto cands = subgroup_candidates(P);
            json rows = json::array();
            long printed = -1;
            for (const auto& c : cands) {
                long b = height_bound_opt(D, decompose(P, c));
                if (all_orders || (order != 0 && c.n == order))
                    rows.push_back({{"n", c.n}, {"bits", b}});
                if (order != 0 && c.n == order)
                    printed = b;
            }
            if (order != 0 && printed < 0)
                throw Error("no condition-(8) subgroup of order " + std::to_string(order));
            if (order == 0 && !all_orders) {
                auto [g, b] = best_subgroup(D, P, cands);
                rows.push_back({{"n", g.n}, {"bits", b}});
                printed = b;
            }
            if (as_json)
                std::cout << json{{"D", disc_str}, {"heights", rows}}.dump(2) << "\n";
            else if (all_orders)
                for (const auto& r : rows)
                    std::cout << "n = " << r["n"] << ": " << r["bits"] << " bits\n";
            else
                std::cout << printed << "\n";
            return 0;
        }
        if (c_fp->parsed()) {
            Discriminant D((Int(disc_str)));
            SelectOptions opts;
            opts.max_v = max_v ? max_v : required_v(D.value());
            PrimeSet S = select_primes(D, bits, opts);
            if (as_json) {
                json arr = json::array();
                for (const auto& sp : S.primes)
                    arr.push_back({{"p", sp.p}, {"t", sp.t}, {"v", sp.v}});
                std::cout << json{{"D", disc_str},
                                  {"count", S.primes.size()},
                                  {"product_bits", S.product_bits},
                                  {"primes", arr}}
                                 .dump(2)
                          << "\n";
            } else {
                std::cout << "|S| = " << S.primes.size() << ", product bits "
                          << S.product_bits << "\n";
                for (const auto& sp : S.primes)
                    std::cout << sp.p << " (t=" << sp.t << ", v=" << sp.v << ")\n";
            }
            return 0;
        }
        if (c_hil->parsed()) {
            Int D(disc_str);
            std::vector<Int> H = mod_str.empty()
                                     ? hilbert_over_Z(D, seed, modpoly_dir)
                                     : hilbert_mod_q(D, Int(mod_str), seed, modpoly_dir);
            if (as_json)
                std::cout << json{{"D", disc_str}, {"H", json_poly(H)}}.dump(2) << "\n";
            else
                std::cout << poly_text(H, "X") << "\n";
            return 0;
        }
        if (c_con->parsed()) {
            RunConfig cfg;
            cfg.D = Int(disc_str);
            cfg.q = Int(q_str);
            if (alg == "1")
                cfg.alg = Algorithm::A1;
            else if (alg == "2")
                cfg.alg = Algorithm::A2;
            else if (alg == "2L" || alg == "2l")
                cfg.alg = Algorithm::A2L;
            else
                throw CLI::ValidationError("--alg", "must be 1, 2, or 2L");
            cfg.subgroup_order = order;
            if (s_policy == "e1")
                cfg.s_policy = SPolicy::e1;
            else if (s_policy == "-e1")
                cfg.s_policy = SPolicy::minus_e1;
            else if (s_policy == "random")
                cfg.s_policy = SPolicy::random_first;
            else
                throw CLI::ValidationError("--s", "must be e1, -e1, or random");
            cfg.seed = seed;
            cfg.threads = threads;
            cfg.modpoly_dir = modpoly_dir;
            cfg.max_v = max_v;
            CMResult r = run_cm(cfg);
            std::cout << result_json(r).dump(2) << "\n";
            return 0;
        }
        if (c_ver->parsed()) {
            Int q(q_str), a(a_str), b(b_str), N(n_str);
            Int twin = 2 * (q + 1) - N;
            bool ok = verify_curve_order(q, a, b, N, twin);
            if (as_json)
                std::cout << json{{"ok", ok}}.dump() << "\n";
            else
                std::cout << (ok ? "order verified" : "order mismatch") << "\n";
            return ok ? 0 : 1;
        }
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace cm
