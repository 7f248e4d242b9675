#ifndef CMRAD_JSONIO_HPP
#define CMRAD_JSONIO_HPP

#include <string>

#include "json.hpp"

#include "cmrad/apnum.hpp"
#include "cmrad/chowla.hpp"
#include "cmrad/exactpoly.hpp"
#include "cmrad/invariants.hpp"
#include "cmrad/latrel.hpp"
#include "cmrad/polybuild.hpp"
#include "cmrad/quadforms.hpp"

// JSON serialization for every user-facing type.  High-precision numbers
// are always decimal strings, never binary floats, so artifacts reproduce
// bit-identically across tools.
namespace cmrad::io {

using json = nlohmann::json;

// {"value": "<decimal>", "certified_digits": n}
json to_json(const ap::Real& x, long digits);
// adds "imag" when the imaginary part is nonzero
json to_json(const ap::Complex& z, long digits);

json to_json(const qf::Form& f);
json to_json(const qf::ClassGroup& g);

// {"degree": d, "coeffs": [decimal strings, constant first]}
json to_json(const pb::IntPoly& p);
json to_json(const pb::IntPoly& p, const pb::RoundingCertificate& cert);
pb::IntPoly intpoly_from_json(const json& j);

json to_json(const inv::InvariantBundle& b, long digits);
json to_json(const cs::ChowlaResult& r, long digits);
json to_json(const lr::UnitTestReport& r);

// sparse map {"(deg_J,deg_g)": "<decimal coefficient>"}
json to_json(const xp::MultiPoly& phi);

json to_json(const xp::ResolventData& d);
xp::ResolventData resolvent_from_json(const json& j);

// {"tool", "version", "command", "inputs", "outputs", "timing_ms"}
json make_envelope(const std::string& command, json inputs, json outputs,
                   double timing_ms);

// Atomic write: to <path>.tmp, then rename.
void write_file(const std::string& path, const json& j);
json read_file(const std::string& path);

}  // namespace cmrad::io

#endif
