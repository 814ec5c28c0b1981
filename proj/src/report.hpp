#pragma once

#include <string>

#include "covering.hpp"
#include "flatness.hpp"
#include "fundclass.hpp"

namespace ct {

// JSON payloads for each operation (stable machine format; field names are
// part of the public contract) and a human text rendering of each payload.
// All polynomial values are canonical strings re-parseable by poly_parse /
// ratfunc_parse / form_parse.

std::string json_value(const Family& f, const RatFunc& v);            // {"value": ...}
std::string json_form(const Family& f, const RelativeForm& w);        // {"value": ...}
std::string json_degree(int degree);                                  // {"degree": ...}
std::string json_classify(const Family& f, const ClassifyResult& r);
std::string json_check(const Family& f, const Verdict& v);
std::string json_weights(const Family& f, const std::optional<WeightAssignment>& w);
std::string json_fibers(const Family& f, const std::string& stratum,
                        const std::map<VarId, Rational>& point, const FiberCount& fc);
std::string json_pullback(const std::vector<PullbackResult>& rs);
std::string json_family(const Family& f);  // {"family": canonical text}

// Render a payload produced by one of the builders above as human-readable
// text; `op` selects the layout (trace, form, degree, classify, check,
// weights, fibers, residue, pullback, print). Unknown ops render as indented
// JSON. Throws CtError(parse) if the payload is not valid JSON.
std::string render_text(const std::string& op, const std::string& payload_json);

// FNV-1a 64-bit content digest, printed as 16 hex digits; used to tie machine
// reports to their inputs.
std::string content_digest(const std::string& text);

}  // namespace ct
