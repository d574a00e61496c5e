#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "adm/carpenter.hpp"
#include "adm/operators.hpp"
#include "adm/seqkit.hpp"
#include "adm/stream.hpp"

// JSON documents. Reals may be written as numbers or as decimal strings
// ("0.25", "1e-3") or fractions ("1/3"). Complex entries are [re, im] pairs;
// a bare real is accepted wherever a complex entry is expected. Parse
// failures throw Error(parse); shape failures throw Error(dimension).
//
//   sequence:      {"kind": "finite" | "finitely-supported", "values": [...]}
//                  {"kind": "geometric-tail" | "one-minus-geometric",
//                   "values": [...], "tail_first": x, "tail_ratio": q}
//                  {"kind": "periodic", "values": [...], "cycle": [...]}
//                  {"kind": "interleave", "parts": [sequence, ...]}
//   operator:      {"dim": n, "entries": [[re, im], ...]}  (row-major)
//                  {"diag": [...]}
//   decomposition: {"dim": n, "terms": [{"weight": w, "vector": [[re, im], ...]}, ...]}
//   stream:        {"kind": "orthonormal-basis"} | {"kind": "explicit", "vectors": [...]}
//                  {"kind": "block-overlap", "block": n, "seed": s}, each with optional "count"
//   isometry:      {"rows": r, "cols": c, "entries": [[re, im], ...]}  (row-major)
namespace adm::io {

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view text);

WeightSeq parse_sequence(std::string_view text);
std::string sequence_to_json(const WeightSeq& xi);

HermOp parse_operator(std::string_view text);
std::string operator_to_json(const HermOp& a);

RankOneDecomp parse_decomposition(std::string_view text);
/// Origins, when given, are written as an "origin" label per term.
std::string decomposition_to_json(const RankOneDecomp& d, const std::vector<TermOrigin>* origins = nullptr);

/// `default_seed` applies when a block-overlap stream has no "seed".
ProjectionStream parse_stream(std::string_view text, std::uint64_t default_seed = 0);
std::string stream_to_json(const ProjectionStream& s);

Matrix parse_isometry(std::string_view text);
std::string isometry_to_json(const Matrix& v);

/// Parses a real written as a number string, decimal or fraction.
double parse_real(std::string_view s);

/// FNV-1a 64-bit digest, hex encoded.
std::string digest(std::string_view bytes);

}  // namespace adm::io
