#include "cmrad/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>

#include "CLI11.hpp"

#include "cmrad/chowla.hpp"
#include "cmrad/common.hpp"
#include "cmrad/exactpoly.hpp"
#include "cmrad/invariants.hpp"
#include "cmrad/latrel.hpp"
#include "cmrad/polybuild.hpp"
#include "cmrad/quadforms.hpp"

namespace cmrad::cli {

namespace {

namespace fs = std::filesystem;
using io::json;

struct Options {
    std::string N = "0";
    long prec = 38;
    bool disc4 = false;
    bool text = false;
    std::string which;    // polys
    std::string fixture;  // radical
    std::string suite = "paper";
    std::string out;
    std::string checkpoint;
    int conjecture = 0;
    long from = 0, to = 0;

    mpz_class n() const { return mpz_class(N); }
    ap::PrecisionContext ctx() const {
        return ap::PrecisionContext::from_digits(prec);
    }
};

double mag_threshold(long digits, long slack) {
    // log2 of 10^-(digits - slack)
    return -double(digits - slack) * 3.3219280948873623;
}

// ------------------------------------------------------------- handlers

json do_classgroup(const Options& o, int&) {
    mpz_class disc = o.disc4 ? mpz_class(-4 * o.n()) : mpz_class(-o.n());
    return io::to_json(qf::enumerate(disc));
}

json do_invariant(const Options& o, int&) {
    inv::InvariantBundle b = inv::fg_pair(o.n(), o.ctx());
    json j = io::to_json(b, o.prec);
    // integer class invariants (h = 1) are reported exactly
    for (auto [key, val] : {std::pair<const char*, const ap::Real*>{"f", &b.f},
                            {"g", &b.g},
                            {"gamma2", &b.gamma2},
                            {"j", &b.j}}) {
        if (val->err_log2() < -24 && val->distance_to_int() < 1e-6)
            j[std::string(key) + "_rounded"] = val->round_to_int().get_str();
    }
    return j;
}

json do_polys(const Options& o, int&) {
    if (o.which == "hilbert") {
        return {{"which", "hilbert"}, {"poly", io::to_json(pb::hilbert_poly(o.n()))}};
    }
    if (o.which == "weber") {
        // minimal polynomial of the Broker roots over disc -4N
        qf::ClassGroup grp = qf::enumerate(mpz_class(-4 * o.n()));
        long digits = std::max<long>(o.prec, 40 + 12 * long(grp.h));
        for (int attempt = 0;; ++attempt) {
            ap::PrecisionContext ctx = ap::PrecisionContext::from_digits(digits);
            std::vector<ap::Complex> roots;
            for (const qf::Form& f : grp.classes)
                roots.push_back(inv::broker_root(f, o.n(), ctx));
            try {
                auto [p, cert] = pb::poly_from_roots(roots, ctx);
                return {{"which", "weber"}, {"poly", io::to_json(p, cert)}};
            } catch (const precision_error&) {
                if (attempt >= 3) throw;
                digits *= 2;
            }
        }
    }
    pb::InvariantPolys ip = pb::invariant_polys(o.n());
    const pb::IntPoly& p = o.which == "F" ? ip.F : ip.G;
    json j = {{"which", o.which}, {"poly", io::to_json(p, ip.cert)}};
    if (o.which == "G" && p.degree() % 2 == 1) {
        try {
            j["index"] = pb::poly_index(p, o.n()).get_str();
        } catch (const assumption_error&) {
            // index undefined when disc/( -N)^((h-1)/2) is not a square
        }
    }
    return j;
}

json do_lambda(const Options& o, int& code) {
    lr::UnitTestReport rep = lr::unit_test_lambda(o.n());
    if (!rep.recognized) code = 2;
    return io::to_json(rep);
}

json do_kn(const Options& o, int&) {
    return {{"k_N", io::to_json(cs::singular_k(o.n(), o.ctx()), o.prec)}};
}

json do_KN(const Options& o, int&) {
    return {{"K_N", io::to_json(cs::elliptic_K(o.n(), o.ctx()), o.prec)}};
}

json do_modrel(const Options&, int&) {
    xp::MultiPoly phi = xp::derive_modular_relation();
    return {{"vars", phi.vars},
            {"degree_g", phi.degree_in("g")},
            {"degree_J", phi.degree_in("J")},
            {"terms", io::to_json(phi)}};
}

json do_radical(const Options& o, int&) {
    json fx = io::read_file(o.fixture);
    xp::ResolventData data = io::resolvent_from_json(fx);
    pb::IntPoly q = io::intpoly_from_json(fx.at("poly"));
    ap::PrecisionContext ctx = o.ctx();
    ap::Real root = xp::radical_eval(data, q, ctx);
    ap::Real resid = q.eval(root);
    return {{"root", io::to_json(root, o.prec)},
            {"residual_log2", resid.is_zero() ? -1e9 : resid.mag()},
            {"resolvents", io::to_json(data)}};
}

json verify_2317723_extras(json& checks) {
    json polys = io::read_file(std::string(CMRAD_DATA_DIR) + "/subfield_polys.json");
    pb::IntPoly Q3 = io::intpoly_from_json(polys.at("Q3"));
    pb::IntPoly Q5 = io::intpoly_from_json(polys.at("Q5"));
    pb::IntPoly Q7 = io::intpoly_from_json(polys.at("Q7"));
    mpz_class N("2317723");
    mpz_class f5 = mpz_class(16) * 3 * 25 * 11 * 17 * 47;
    mpz_class f7 = mpz_class(1024) * 9 * 361 * 61 * f5;
    checks.push_back({{"name", "subfield_indices"},
                      {"pass", xp::discriminant(Q3) == -N &&
                                   xp::discriminant(Q5) == f5 * f5 * N * N &&
                                   xp::discriminant(Q7) == -f7 * f7 * N * N * N}});

    json rj = io::read_file(std::string(CMRAD_DATA_DIR) + "/resolvents.json");
    ap::PrecisionContext ctx = ap::PrecisionContext::from_digits(38);
    bool res_ok = true;
    for (auto [key, q] : {std::pair<const char*, pb::IntPoly*>{"quintic", &Q5},
                          {"septic", &Q7}}) {
        json sub = rj.at(key);
        sub["N"] = rj.at("N");
        xp::ResolventData d = io::resolvent_from_json(sub);
        ap::Real root = xp::radical_eval(d, *q, ctx);
        ap::Real resid = q->eval(root);
        if (!resid.is_zero() && resid.mag() > mag_threshold(38, 8)) res_ok = false;
    }
    checks.push_back({{"name", "resolvent_evaluation"}, {"pass", res_ok}});
    return checks;
}

json do_verify(const Options& o, int& code) {
    if (o.suite != "paper") throw domain_error("unknown suite: " + o.suite);
    mpz_class N = o.n();
    ap::PrecisionContext ctx = o.ctx();
    json checks = json::array();

    if (N % 4 == 3 && qf::is_squarefree(N) && N > 3) {
        unsigned long h = qf::enumerate(-N).h;
        checks.push_back({{"name", "class_number_kronecker"},
                          {"pass", h == qf::class_number_by_kronecker(N)}});
    }

    bool agm_ok = true;
    try {
        cs::singular_k(N, ctx);  // verifies the defining AGM relation
    } catch (const std::exception&) {
        agm_ok = false;
    }
    checks.push_back({{"name", "k_agm_relation"}, {"pass", agm_ok}});

    ap::Real w = cs::eq_w_check(N, ctx);
    checks.push_back({{"name", "eq_w_identity"},
                      {"pass", w.is_zero() || w.mag() < mag_threshold(o.prec, 20)}});

    if (N > 3 && N % 8 == 3 && N % 3 != 0 && qf::is_squarefree(N)) {
        inv::InvariantBundle b = inv::fg_pair(N, ctx);
        ap::Real z = inv::constraint_zero(b.f, b.g);
        checks.push_back({{"name", "octic_constraint"},
                          {"pass", z.is_zero() || z.mag() < z.err_log2() + 8}});
    }

    if (N == mpz_class("2317723")) verify_2317723_extras(checks);

    bool all = true;
    for (const json& c : checks) all = all && c.at("pass").get<bool>();
    if (!all) code = 3;
    return {{"suite", o.suite}, {"checks", checks}, {"all_pass", all}};
}

// ------------------------------------------------------------- campaign

bool conjecture1_candidate(long N) {
    mpz_class n(N);
    return N % 4 == 3 && mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

bool conjecture2_candidate(long N) {
    return N > 3 && N % 8 == 3 && N % 3 != 0 && qf::is_squarefree(mpz_class(N));
}

json campaign_record_c1(long N) {
    lr::UnitTestReport rep = lr::unit_test_lambda(N);
    json rec = io::to_json(rep);
    if (!rep.recognized) {
        rec["status"] = "inconclusive";
    } else {
        bool pass = rep.L.monic() && rep.L.coeffs.front() == -1 &&
                    rep.degree == long(rep.h);
        rec["status"] = pass ? "pass" : "fail";
    }
    return rec;
}

json campaign_record_c2(long N) {
    qf::ClassGroup grp = qf::enumerate(mpz_class(-N));
    long h = long(grp.h);
    json rec = {{"h", h}};
    ap::PrecisionContext ctx = ap::PrecisionContext::from_digits(60 + 6 * h);
    inv::InvariantBundle b = inv::fg_pair(N, ctx);
    if (h == 1) {
        // integer invariant; not counted among the exceptions
        rec["status"] = "pass";
        rec["g_integer"] = b.g.round_to_int().get_str();
        rec["exception"] = false;
        return rec;
    }
    // the conjecture asks both invariants to have degree h; an exception on
    // either (f = 1 cases, integer or low-degree g cases) flags the N.
    // Degrees ascend because lindep rejects on ambiguity when the true
    // degree is below the one tried.
    for (auto [name, val] : {std::pair<const char*, const ap::Real*>{"g", &b.g},
                             {"f", &b.f}}) {
        for (long d = 1; d < h; ++d) {
            try {
                pb::IntPoly low = lr::algdep(*val, d, ctx);
                rec["exception"] = true;
                rec["exception_of"] = name;
                rec["minpoly"] = io::to_json(low);
                rec["status"] = "exception";
                return rec;
            } catch (const not_found_error&) {
            }
        }
    }
    rec["exception"] = false;
    pb::InvariantPolys ip = pb::invariant_polys(N);
    rec["G_degree"] = ip.G.degree();
    rec["status"] = ip.G.degree() == h ? "pass" : "fail";
    return rec;
}

json do_campaign(const Options& o, int& code) {
    if (o.conjecture != 1 && o.conjecture != 2)
        throw domain_error("conjecture must be 1 or 2");
    json state = {{"conjecture", o.conjecture},
                  {"from", o.from},
                  {"to", o.to},
                  {"records", json::object()}};
    if (!o.checkpoint.empty() && fs::exists(o.checkpoint)) {
        json prev;
        try {
            prev = io::read_file(o.checkpoint);
            if (prev.at("conjecture").get<int>() != o.conjecture ||
                !prev.at("records").is_object())
                throw internal_error("bad fields");
        } catch (const internal_error&) {
            throw;
        } catch (const std::exception& e) {
            throw internal_error(std::string("corrupt checkpoint: ") + e.what());
        }
        state["records"] = prev["records"];
    }
    json& records = state["records"];
    for (long N = o.from; N <= o.to; ++N) {
        bool want = o.conjecture == 1 ? conjecture1_candidate(N)
                                      : conjecture2_candidate(N);
        if (!want) continue;
        std::string key = std::to_string(N);
        if (records.contains(key)) continue;
        records[key] = o.conjecture == 1 ? campaign_record_c1(N)
                                         : campaign_record_c2(N);
        if (!o.checkpoint.empty()) io::write_file(o.checkpoint, state);
    }
    long pass = 0, fail = 0, inconclusive = 0, exceptions = 0;
    json exception_list = json::array();
    for (const auto& [key, rec] : records.items()) {
        std::string st = rec.at("status").get<std::string>();
        if (st == "pass") ++pass;
        else if (st == "fail") ++fail;
        else if (st == "exception") {
            ++exceptions;
            exception_list.push_back(std::stol(key));
        } else ++inconclusive;
    }
    std::sort(exception_list.begin(), exception_list.end());
    if (fail > 0) code = 3;
    else if (inconclusive > 0) code = 2;
    return {{"conjecture", o.conjecture},
            {"pass", pass},
            {"fail", fail},
            {"inconclusive", inconclusive},
            {"exceptions", exception_list},
            {"records", records}};
}

// ------------------------------------------------------------- plumbing

std::string cache_key(const std::string& cmd, const json& inputs) {
    std::string raw = cmd + inputs.dump();
    std::string key = cmd + "_";
    size_t hash = std::hash<std::string>{}(raw);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016zx", hash);
    return key + buf + ".json";
}

void print_text(const json& j, const std::string& prefix, std::ostream& os) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items())
            print_text(v, prefix.empty() ? k : prefix + "." + k, os);
    } else if (j.is_array()) {
        for (size_t i = 0; i < j.size(); ++i)
            print_text(j[i], prefix + "[" + std::to_string(i) + "]", os);
    } else {
        os << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump())
           << "\n";
    }
}

}  // namespace

int run(const std::vector<std::string>& args, io::json* envelope_out) {
    Options o;
    CLI::App app{"class invariants, singular values, and radicals for "
                 "discriminant -N"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub, bool with_N) {
        if (with_N) sub->add_option("-N,--N", o.N, "positive integer N")->required();
        sub->add_option("--prec", o.prec, "working precision, decimal digits")
            ->check(CLI::Range(38l, 1000000l));
        sub->add_flag("--text,!--json", o.text, "output format");
        sub->add_option("--out", o.out, "write the envelope to this file");
    };

    CLI::App* c;
    c = app.add_subcommand("classgroup", "form class group of disc -N");
    add_common(c, true);
    c->add_flag("--disc4", o.disc4, "use discriminant -4N");
    add_common(app.add_subcommand("invariant", "class-invariant bundle"), true);
    c = app.add_subcommand("polys", "class polynomials");
    add_common(c, true);
    c->add_option("--which", o.which, "G|F|weber|hilbert")
        ->required()
        ->check(CLI::IsMember({"G", "F", "weber", "hilbert"}));
    add_common(app.add_subcommand("lambda", "eta-quotient unit test"), true);
    add_common(app.add_subcommand("kn", "singular value k_N"), true);
    add_common(app.add_subcommand("KN", "elliptic integral K_N"), true);
    add_common(app.add_subcommand("modrel", "modular relation Phi(J,g)"), false);
    c = app.add_subcommand("radical", "evaluate a resolvent fixture");
    add_common(c, false);
    c->add_option("--fixture", o.fixture, "fixture JSON path")->required();
    c = app.add_subcommand("verify", "aggregate checks for one N");
    add_common(c, true);
    c->add_option("--suite", o.suite, "check suite name");
    c = app.add_subcommand("campaign", "conjecture verification range");
    add_common(c, false);
    c->add_option("--conjecture", o.conjecture, "1 or 2")->required();
    c->add_option("--from", o.from, "range start")->required();
    c->add_option("--to", o.to, "range end")->required();
    c->add_option("--checkpoint", o.checkpoint, "resumable state file");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help();
        return 64;
    }
    std::string cmd = app.get_subcommands().front()->get_name();

    using Handler = json (*)(const Options&, int&);
    static const std::map<std::string, Handler> handlers = {
        {"classgroup", do_classgroup}, {"invariant", do_invariant},
        {"polys", do_polys},           {"lambda", do_lambda},
        {"kn", do_kn},                 {"KN", do_KN},
        {"modrel", do_modrel},         {"radical", do_radical},
        {"verify", do_verify},         {"campaign", do_campaign}};

    json inputs = {{"N", o.N},        {"prec", o.prec},
                   {"disc4", o.disc4}, {"which", o.which},
                   {"suite", o.suite}, {"conjecture", o.conjecture},
                   {"from", o.from},   {"to", o.to}};

    int code = 0;
    try {
        const char* cache_env = std::getenv("CMRAD_CACHE_DIR");
        bool cacheable = cache_env && cmd != "campaign" && cmd != "radical" &&
                         cmd != "verify";
        fs::path cache_path;
        json outputs;
        bool hit = false;
        if (cacheable) {
            fs::create_directories(cache_env);
            cache_path = fs::path(cache_env) / cache_key(cmd, inputs);
            if (fs::exists(cache_path)) {
                outputs = io::read_file(cache_path.string());
                hit = true;
            }
        }
        auto t0 = std::chrono::steady_clock::now();
        if (!hit) outputs = handlers.at(cmd)(o, code);
        double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
        if (cacheable && !hit && code == 0) io::write_file(cache_path.string(), outputs);

        json env = io::make_envelope(cmd, inputs, outputs, ms);
        env["cache_hit"] = hit;
        if (envelope_out) *envelope_out = env;
        if (!o.out.empty()) io::write_file(o.out, env);
        else if (o.text) print_text(env["outputs"], "", std::cout);
        else std::cout << env.dump(2) << "\n";
        return code;
    } catch (const domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 1;
    } catch (const precision_error& e) {
        std::cerr << "precision: " << e.what() << "\n";
        return 2;
    } catch (const not_found_error& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return 2;
    } catch (const grouping_error& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return 2;
    } catch (const assumption_error& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return 2;
    } catch (const internal_error& e) {
        std::cerr << "internal inconsistency: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, nullptr);
}

}  // namespace cmrad::cli
