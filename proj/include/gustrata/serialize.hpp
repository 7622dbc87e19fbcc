#pragma once

// JSON forms of contexts, scalars, displays, polygons and cycle lists.
//
//   context  {"p": 3, "d": 2, "N": 24, "modulus": [1, 0, 1]}   (ascending, monic)
//   scalar   {"coords": ["5", "0"]}                          (decimal strings in [0, p^N))
//   display  {"context": ..., "basis": ["u1", ...],
//             "frobenius": [[scalar, ...], ...],   one inner list per column
//             "pairing":   [[scalar, ...], ...],   one inner list per row
//             "grading": {"u": [0, ...], "v": [...]}}
//   polygon  {"slopes": [{"num": 1, "den": 4, "mult": 4}, ...]}  ascending

#include <string>
#include <vector>

#include "json.hpp"

#include "gustrata/fcrystal.hpp"
#include "gustrata/slopegraph.hpp"

namespace gustrata::io {

using nlohmann::json;

json context_to_json(const witt::RingContext& ctx);
/// Rebuilds the context and checks that the recorded modulus matches.
witt::ContextPtr context_from_json(const json& j);

json scalar_to_json(const witt::PadicScalar& x);
witt::PadicScalar scalar_from_json(const witt::ContextPtr& ctx, const json& j);

json display_to_json(const DieudonneDisplay& display);
DieudonneDisplay display_from_json(const json& j);

json polygon_to_json(const NewtonPolygon& polygon);
NewtonPolygon polygon_from_json(const json& j);

/// [{"vertices": ["u1", ...], "length": L, "weight": W}, ...]
json cycles_to_json(const graph::SlopeGraph& g, const std::vector<graph::CycleSummary>& cycles);

}  // namespace gustrata::io
