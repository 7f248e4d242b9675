#include <gmpxx.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "cmrad/driver.hpp"
#include "cmrad/jsonio.hpp"

using cmrad::cli::run;
using cmrad::io::json;

namespace {

// envelopes go to a scratch file so the test log stays quiet
int call(std::vector<std::string> args, json* env = nullptr) {
    args.push_back("--out");
    args.push_back("/tmp/cmrad_test_envelope.json");
    return run(args, env);
}

}  // namespace

TEST_CASE("classgroup command") {
    json env;
    CHECK(call({"classgroup", "-N", "1571"}, &env) == 0);
    CHECK(env["outputs"]["h"] == 17);
    CHECK(env["command"] == "classgroup");
    CHECK(env["version"] == "0.1.0");

    CHECK(call({"classgroup", "-N", "11", "--disc4"}, &env) == 0);
    CHECK(env["outputs"]["discriminant"] == "-44");
    CHECK(env["outputs"]["h"].get<long>() > 0);
}

TEST_CASE("invariant command rounds integer invariants") {
    json env;
    CHECK(call({"invariant", "-N", "163"}, &env) == 0);
    CHECK(env["outputs"]["f_rounded"] == "3");
    CHECK(env["outputs"]["g_rounded"] == "-2");
    CHECK(env["outputs"]["gamma2_rounded"] == "-640320");
    CHECK(env["outputs"]["signature"] == json({-1, -1, -1}));
}

TEST_CASE("polys command") {
    json env;
    CHECK(call({"polys", "-N", "59", "--which", "G"}, &env) == 0);
    CHECK(env["outputs"]["poly"]["degree"] == 3);
    CHECK(call({"polys", "-N", "47", "--which", "hilbert"}, &env) == 0);
    CHECK(env["outputs"]["poly"]["degree"] == 5);
    // one Broker root per class of disc -44, and h(-44) = 3
    CHECK(call({"polys", "-N", "11", "--which", "weber"}, &env) == 0);
    CHECK(env["outputs"]["poly"]["degree"] == 3);
}

TEST_CASE("lambda command") {
    json env;
    CHECK(call({"lambda", "-N", "23"}, &env) == 0);
    CHECK(env["outputs"]["degree_found"] == 3);
    CHECK(env["outputs"]["is_unit"] == true);
}

TEST_CASE("kn and KN commands") {
    json env;
    CHECK(call({"kn", "-N", "11"}, &env) == 0);
    std::string k = env["outputs"]["k_N"]["value"];
    CHECK(k.substr(0, 2) == "0.");  // 0 < k_N < 1
    CHECK(env["outputs"]["k_N"]["certified_digits"].get<long>() >= 36);
    CHECK(call({"KN", "-N", "11"}, &env) == 0);
    CHECK(!env["outputs"]["K_N"]["value"].get<std::string>().empty());
}

TEST_CASE("radical command evaluates fixtures") {
    json env;
    std::string dir = CMRAD_DATA_DIR;
    CHECK(call({"radical", "--fixture", dir + "/radical_quintic.json"}, &env) == 0);
    CHECK(env["outputs"]["residual_log2"].get<double>() < -90);
    CHECK(call({"radical", "--fixture", dir + "/radical_septic.json"}, &env) == 0);
    CHECK(env["outputs"]["residual_log2"].get<double>() < -90);
}

TEST_CASE("verify command") {
    json env;
    CHECK(call({"verify", "-N", "11", "--suite", "paper"}, &env) == 0);
    CHECK(env["outputs"]["all_pass"] == true);
    CHECK(call({"verify", "-N", "11", "--suite", "nonsense"}) == 1);
}

TEST_CASE("exit codes for malformed and invalid input") {
    CHECK(run({}) == 64);
    CHECK(call({"polys", "-N", "11"}) == 64);           // missing --which
    CHECK(call({"classgroup"}) == 64);                  // missing -N
    CHECK(call({"kn", "-N", "11", "--prec", "10"}) == 64);  // below minimum
    CHECK(call({"kn", "-N", "7"}) == 1);                // outside domain
    CHECK(call({"radical", "--fixture", "/nonexistent.json"}) == 1);
}

TEST_CASE("cache hits are bit-identical to fresh computation") {
    std::string dir = "/tmp/cmrad_cache_test";
    std::remove((dir + "/.placeholder").c_str());
    setenv("CMRAD_CACHE_DIR", dir.c_str(), 1);
    json fresh, cached;
    CHECK(call({"classgroup", "-N", "907", "--prec", "40"}, &fresh) == 0);
    CHECK(call({"classgroup", "-N", "907", "--prec", "40"}, &cached) == 0);
    unsetenv("CMRAD_CACHE_DIR");
    CHECK(fresh["cache_hit"] == false);
    CHECK(cached["cache_hit"] == true);
    CHECK(fresh["outputs"].dump() == cached["outputs"].dump());
}

TEST_CASE("campaign conjecture 1 with checkpoint resume") {
    std::string cp = "/tmp/cmrad_checkpoint.json";
    std::remove(cp.c_str());
    json env;
    CHECK(call({"campaign", "--conjecture", "1", "--from", "3", "--to", "50",
                "--checkpoint", cp}, &env) == 0);
    // primes 3 mod 4 below 50: 3, 7, 11, 19, 23, 31, 43, 47
    CHECK(env["outputs"]["pass"] == 8);
    CHECK(env["outputs"]["fail"] == 0);

    // resume keeps earlier records and adds the new prime 59
    CHECK(call({"campaign", "--conjecture", "1", "--from", "3", "--to", "60",
                "--checkpoint", cp}, &env) == 0);
    CHECK(env["outputs"]["pass"] == 9);
    CHECK(env["outputs"]["records"].contains("59"));

    // corrupted checkpoint refused
    {
        std::ofstream bad(cp);
        bad << "{ not json";
    }
    CHECK(call({"campaign", "--conjecture", "1", "--from", "3", "--to", "60",
                "--checkpoint", cp}) == 3);
    std::remove(cp.c_str());
}

TEST_CASE("campaign conjecture 2 flags the low exceptions") {
    json env;
    CHECK(call({"campaign", "--conjecture", "2", "--from", "11", "--to", "100"},
               &env) == 0);
    CHECK(env["outputs"]["exceptions"] == json({83, 91}));
    CHECK(env["outputs"]["fail"] == 0);
}

TEST_CASE("modrel command") {
    json env;
    CHECK(call({"modrel"}, &env) == 0);
    CHECK(env["outputs"]["degree_g"] == 192);
    CHECK(env["outputs"]["degree_J"] == 4);
    CHECK(env["outputs"]["terms"]["(0,192)"] == "4722366482869645213696");
}
