#include "cmrad/jsonio.hpp"

#include <cstdio>
#include <fstream>

#include "cmrad/common.hpp"

namespace cmrad::io {

namespace {

std::string dec(const mpz_class& z) { return z.get_str(); }

mpz_class from_dec(const json& j) {
    if (j.is_number_integer()) return mpz_class(j.get<long>());
    return mpz_class(j.get<std::string>());
}

}  // namespace

json to_json(const ap::Real& x, long digits) {
    long cert = x.certified_digits();
    long shown = std::min(digits, std::max(cert, 1L));
    return {{"value", x.to_decimal(shown)}, {"certified_digits", cert}};
}

json to_json(const ap::Complex& z, long digits) {
    json j = to_json(z.re, digits);
    if (!z.im.is_zero()) j["imag"] = to_json(z.im, digits);
    return j;
}

json to_json(const qf::Form& f) {
    return {{"a", dec(f.a)}, {"b", dec(f.b)}, {"c", dec(f.c)}};
}

json to_json(const qf::ClassGroup& g) {
    json classes = json::array();
    for (const qf::Form& f : g.classes) classes.push_back(to_json(f));
    json gens = json::array();
    for (const auto& [f, ord] : g.generators)
        gens.push_back({{"form", to_json(f)}, {"relative_order", ord}});
    return {{"discriminant", dec(g.disc)},
            {"h", g.h},
            {"classes", classes},
            {"generators", gens}};
}

json to_json(const pb::IntPoly& p) {
    json coeffs = json::array();
    for (const mpz_class& c : p.coeffs) coeffs.push_back(dec(c));
    return {{"degree", p.degree()}, {"coeffs", coeffs}};
}

json to_json(const pb::IntPoly& p, const pb::RoundingCertificate& cert) {
    json j = to_json(p);
    j["certificate"] = {{"max_distance", cert.max_distance},
                        {"bits_used", cert.bits_used},
                        {"escalations", cert.escalations}};
    return j;
}

pb::IntPoly intpoly_from_json(const json& j) {
    pb::IntPoly p;
    const json& coeffs = j.contains("coeffs") ? j["coeffs"] : j;
    for (const auto& c : coeffs) p.coeffs.push_back(from_dec(c));
    while (!p.coeffs.empty() && p.coeffs.back() == 0) p.coeffs.pop_back();
    if (p.coeffs.empty()) throw domain_error("intpoly_from_json: zero polynomial");
    return p;
}

json to_json(const inv::InvariantBundle& b, long digits) {
    return {{"N", dec(b.N)},
            {"r", to_json(b.r, digits)},
            {"s", to_json(b.s, digits)},
            {"f", to_json(b.f, digits)},
            {"g", to_json(b.g, digits)},
            {"gamma2", to_json(b.gamma2, digits)},
            {"j", to_json(b.j, digits)},
            {"signature", {b.sig.S1, b.sig.S2, b.sig.S3}},
            {"within_conjecture", b.within_conjecture}};
}

json to_json(const cs::ChowlaResult& r, long digits) {
    return {{"N", dec(r.N)},
            {"h", r.h},
            {"G_N", to_json(r.G_N, digits)},
            {"lambda", to_json(r.lambda, digits)},
            {"k_N", to_json(r.k_N, digits)},
            {"K_N", to_json(r.K_N, digits)}};
}

json to_json(const lr::UnitTestReport& r) {
    return {{"N", dec(r.N)},
            {"h", r.h},
            {"degree_found", r.degree},
            {"poly", r.recognized ? to_json(r.L) : json()},
            {"recognized", r.recognized},
            {"is_unit", r.is_unit},
            {"used_square", r.used_square},
            {"precision_bits", r.precision_bits}};
}

json to_json(const xp::MultiPoly& phi) {
    // keys "(deg_J,deg_g)"; works for any variable list (reverse order)
    json j = json::object();
    for (const auto& [expo, c] : phi.terms) {
        std::string key = "(";
        for (size_t i = expo.size(); i-- > 0;) {
            key += std::to_string(expo[i]);
            key += i == 0 ? ")" : ",";
        }
        j[key] = dec(c);
    }
    return j;
}

json to_json(const xp::ResolventData& d) {
    json pairs = json::array();
    for (const auto& [A, B] : d.pairs) pairs.push_back({dec(A), dec(B)});
    return {{"N", dec(d.N)}, {"p", d.p}, {"pairs", pairs}, {"denom", dec(d.denom)}};
}

xp::ResolventData resolvent_from_json(const json& j) {
    xp::ResolventData d;
    d.N = from_dec(j.at("N"));
    d.p = j.at("p").get<int>();
    for (const auto& pr : j.at("pairs"))
        d.pairs.emplace_back(from_dec(pr.at(0)), from_dec(pr.at(1)));
    if (j.contains("denom")) d.denom = from_dec(j["denom"]);
    return d;
}

json make_envelope(const std::string& command, json inputs, json outputs,
                   double timing_ms) {
    return {{"tool", "cmrad"},
            {"version", kVersion},
            {"command", command},
            {"inputs", std::move(inputs)},
            {"outputs", std::move(outputs)},
            {"timing_ms", timing_ms}};
}

void write_file(const std::string& path, const json& j) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw internal_error("cannot write " + tmp);
        out << j.dump(2) << "\n";
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw internal_error("cannot rename " + tmp + " to " + path);
}

json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot read " + path);
    json j;
    in >> j;
    return j;
}

}  // namespace cmrad::io
